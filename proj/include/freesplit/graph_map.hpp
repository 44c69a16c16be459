#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "freesplit/graph.hpp"

namespace freesplit {

inline constexpr std::size_t kDefaultLengthCap = 1000000;

class GraphMap {
 public:
  GraphMap() = default;
  // Images are tightened; vertex images are checked against edge images.
  GraphMap(std::shared_ptr<const Graph> source, std::shared_ptr<const Graph> target,
           std::vector<Vertex> vertex_map, std::vector<Word> edge_images);

  static GraphMap identity(std::shared_ptr<const Graph> g);
  // Endomorphism of a rose from rose-level images.
  static GraphMap from_free_map(std::shared_ptr<const Graph> rose, const FreeMap& f);

  const Graph& source() const noexcept { return *source_; }
  const Graph& target() const noexcept { return *target_; }
  const std::shared_ptr<const Graph>& source_ptr() const noexcept { return source_; }
  const std::shared_ptr<const Graph>& target_ptr() const noexcept { return target_; }
  const std::vector<Vertex>& vertex_map() const noexcept { return vertex_map_; }
  const std::vector<Word>& images() const noexcept { return images_; }
  const Word& image(EdgeId e) const { return images_.at(e); }
  bool is_endomorphism() const { return *source_ == *target_; }

  // Appends the image of `l` to a reduced accumulator.
  void append_image(Word& acc, Letter l) const;

  FreeMap to_free_map() const;  // only for rose endomorphisms

  friend bool operator==(const GraphMap& a, const GraphMap& b);

 private:
  std::shared_ptr<const Graph> source_;
  std::shared_ptr<const Graph> target_;
  std::vector<Vertex> vertex_map_;
  std::vector<Word> images_;
};

EdgePath map_path(const GraphMap& f, const EdgePath& p);
CyclicWord map_circuit(const GraphMap& f, const CyclicWord& c);
Word map_word(const GraphMap& f, std::span<const Letter> w, std::size_t cap = kDefaultLengthCap);

EdgePath iterate(const GraphMap& f, EdgePath p, unsigned k, std::size_t cap = kDefaultLengthCap);
CyclicWord iterate(const GraphMap& f, CyclicWord c, unsigned k, std::size_t cap = kDefaultLengthCap);

// x -> f(g(x)); requires target(g) == source(f).
GraphMap compose(const GraphMap& f, const GraphMap& g);
GraphMap power(const GraphMap& f, unsigned k);

class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  TransitionMatrix(std::vector<EdgeId> edges, std::vector<long long> entries);

  std::size_t size() const noexcept { return edges_.size(); }
  const std::vector<EdgeId>& edges() const noexcept { return edges_; }
  // Crossings of edges()[row] by the image of edges()[col].
  long long at(std::size_t row, std::size_t col) const { return entries_.at(row * size() + col); }
  TransitionMatrix block(const std::vector<EdgeId>& edges) const;
  std::vector<std::vector<long long>> rows() const;
  friend bool operator==(const TransitionMatrix&, const TransitionMatrix&) = default;

 private:
  std::vector<EdgeId> edges_;
  std::vector<long long> entries_;
};

TransitionMatrix transition_matrix(const GraphMap& f);
TransitionMatrix multiply(const TransitionMatrix& a, const TransitionMatrix& b);

inline constexpr double kPfTolerance = 1e-9;
inline constexpr std::size_t kPfIterationCap = 100000;
inline constexpr double kEgThreshold = 1.0 + 1e-9;

double pf_eigenvalue(const TransitionMatrix& m, double tol = kPfTolerance,
                     std::size_t cap = kPfIterationCap);

enum class StratumKind { EG, NEG, ZERO, FIXED };
const char* to_string(StratumKind k);

struct Stratum {
  std::vector<EdgeId> edges;
  StratumKind kind = StratumKind::ZERO;
  double pf = 0.0;
};

struct Filtration {
  std::vector<Stratum> strata;  // bottom first
  // Union of strata 0..i.
  EdgeSet subgraph(std::size_t i) const;
  std::size_t stratum_of(EdgeId e) const;
};

Filtration strata(const GraphMap& f);

bool is_nielsen(const GraphMap& f, const EdgePath& p);
bool is_invariant_subgraph(const GraphMap& f, const EdgeSet& h);

// Edges reachable from `seed` in the transition digraph, i.e. the least
// invariant subgraph containing `seed`.
EdgeSet invariant_closure(const GraphMap& f, const EdgeSet& seed);

OuterResult outer_equal(const GraphMap& f, const GraphMap& g, std::size_t budget = 100000);
GraphMap invert_automorphism(const GraphMap& f);

}  // namespace freesplit
