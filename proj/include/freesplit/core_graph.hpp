#pragma once

// Folded core graphs immersed in the rose, and free factor systems built
// from them.

#include <cstdint>
#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "freesplit/graph.hpp"
#include "freesplit/word.hpp"

namespace freesplit {

class CoreGraph {
 public:
  struct Edge {
    std::uint32_t from;
    std::uint32_t to;
    Letter label;  // always a forward rose letter
  };

  CoreGraph() = default;

  // Core of the subgroup generated by `generators` (may be empty when the
  // subgroup is trivial). Throws InvalidInput on an empty generator.
  static CoreGraph fold(const std::vector<Word>& generators, std::size_t rank);

  // Folds and cores an explicit labeled graph, which must be connected.
  static CoreGraph from_edges(std::size_t rank, std::size_t vertices, const std::vector<Edge>& edges);

  std::size_t ambient_rank() const noexcept { return rank_; }
  std::size_t num_vertices() const noexcept { return out_.size() / std::max<std::size_t>(1, 2 * rank_); }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool empty() const noexcept { return edges_.empty(); }
  // Rank of the (connected) subgroup.
  std::size_t rank() const noexcept { return edges_.size() + 1 - num_vertices(); }

  std::optional<std::uint32_t> step(std::uint32_t v, Letter l) const;
  // Does the cyclically reduced word read a closed loop from some vertex?
  bool reads_closed(std::span<const Letter> cyclic) const;
  // Free basis of the subgroup read at vertex 0.
  std::vector<Word> basis() const;
  // Label-preserving immersion into `other` exists.
  bool maps_into(const CoreGraph& other) const;

  // Isomorphism-invariant encoding; equal iff the subgroups are conjugate.
  const std::vector<std::int64_t>& canonical() const noexcept { return canonical_; }

  std::string to_text(const std::vector<std::string>& basis_names) const;

 private:
  void compute_canonical();

  std::size_t rank_ = 0;
  std::vector<std::int32_t> out_;  // vertex * 2n + letter -> target or -1
  std::vector<Edge> edges_;
  std::vector<std::int64_t> canonical_;
};

class FreeFactorSystem {
 public:
  FreeFactorSystem() = default;
  explicit FreeFactorSystem(std::size_t rank) : rank_(rank) {}
  FreeFactorSystem(std::size_t rank, std::vector<CoreGraph> components);

  // One component per generator list.
  static FreeFactorSystem from_generators(std::size_t rank, const std::vector<std::vector<Word>>& components);

  std::size_t ambient_rank() const noexcept { return rank_; }
  const std::vector<CoreGraph>& components() const noexcept { return components_; }
  std::size_t size() const noexcept { return components_.size(); }
  bool empty() const noexcept { return components_.empty(); }
  std::vector<std::size_t> ranks() const;
  // Nonempty and not the single whole group.
  bool proper() const;

  friend bool operator==(const FreeFactorSystem& a, const FreeFactorSystem& b);

  std::string describe(const std::vector<std::string>& basis_names) const;

 private:
  void sort_components();

  std::size_t rank_ = 0;
  std::vector<CoreGraph> components_;
};

bool carries(const FreeFactorSystem& ffs, const CyclicWord& c);
FreeFactorSystem meet(const FreeFactorSystem& a, const FreeFactorSystem& b);
// Every component of a is conjugate into a component of b.
bool is_contained(const FreeFactorSystem& a, const FreeFactorSystem& b);
std::size_t co_edge_number(const FreeFactorSystem& ffs);

// One component per non-contractible component of the subgraph, read in
// rose coordinates through the marking.
FreeFactorSystem subgraph_system(const MarkedGraph& g, const EdgeSet& edges);

// Canonical cyclic words of length <= max_length carried by the system.
std::vector<CyclicWord> candidate_classes(const FreeFactorSystem& ffs, std::size_t max_length);

}  // namespace freesplit
