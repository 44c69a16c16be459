#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "freesplit/free_map.hpp"
#include "freesplit/word.hpp"

namespace freesplit {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;
using EdgeSet = std::set<EdgeId>;

struct EdgeSpec {
  std::string name;
  Vertex from;
  Vertex to;
};

class Graph {
 public:
  Graph() = default;
  Graph(std::vector<std::string> vertex_names, std::vector<EdgeSpec> edges);

  // Rose with one vertex "v" and one loop per name.
  static Graph rose(const std::vector<std::string>& names);

  std::size_t num_vertices() const noexcept { return vertex_names_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<std::string>& vertex_names() const noexcept { return vertex_names_; }
  const std::vector<std::string>& edge_names() const noexcept { return edge_names_; }
  const EdgeSpec& edge(EdgeId e) const { return edges_.at(e); }

  Vertex origin(Letter l) const;
  Vertex terminus(Letter l) const;

  std::optional<EdgeId> find_edge(const std::string& name) const;
  std::optional<Vertex> find_vertex(const std::string& name) const;

  // Letters leaving v, in increasing order (a loop contributes both).
  std::vector<Letter> star(Vertex v) const;
  std::size_t valence(Vertex v) const;

  std::size_t num_components() const;
  // Euler characteristic rank of the whole graph.
  std::size_t rank() const;
  bool is_rose() const;

  std::string letter_name(Letter l) const;
  std::string format(std::span<const Letter> w) const { return format_word(w, edge_names_); }
  Word parse(const std::string& text) const { return parse_word(text, edge_names_); }

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  std::vector<std::string> vertex_names_;
  std::vector<std::string> edge_names_;
  std::vector<EdgeSpec> edges_;
};

struct EdgePath {
  Vertex start = 0;
  Word letters;

  bool empty() const noexcept { return letters.empty(); }
  std::size_t length() const noexcept { return letters.size(); }
  Vertex end(const Graph& g) const;
  friend bool operator==(const EdgePath&, const EdgePath&) = default;
};

// Throws InvalidInput if consecutive letters do not share endpoints.
void check_path(const Graph& g, const EdgePath& p);
EdgePath tighten(const Graph& g, const EdgePath& p);
EdgePath make_path(const Graph& g, const Word& letters);  // start = origin of first letter
bool is_closed(const Graph& g, const EdgePath& p);
CyclicWord canonical_cyclic(const Graph& g, const EdgePath& p);

// Graph with a marking from the rose R_n: basis element i goes to a closed
// path at `base`, and each edge goes to a rose word under the homotopy
// inverse.
class MarkedGraph {
 public:
  MarkedGraph() = default;

  // Computes the homotopy inverse when `inverse_images` is empty.
  MarkedGraph(std::shared_ptr<const Graph> graph, std::vector<std::string> basis_names, Vertex base,
              std::vector<Word> marking, std::vector<Word> inverse_images = {});

  // Rose with identity marking; basis names are the edge names.
  static MarkedGraph standard_rose(const std::vector<std::string>& names);

  const Graph& graph() const noexcept { return *graph_; }
  const std::shared_ptr<const Graph>& graph_ptr() const noexcept { return graph_; }
  const std::vector<std::string>& basis_names() const noexcept { return basis_names_; }
  std::size_t rank() const noexcept { return basis_names_.size(); }
  Vertex base() const noexcept { return base_; }
  const std::vector<Word>& marking() const noexcept { return marking_; }
  const std::vector<Word>& inverse_images() const noexcept { return inverse_; }
  bool identity_marked() const noexcept { return identity_; }

  // Path in the graph to a rose word (through the homotopy inverse).
  Word to_rose(std::span<const Letter> path) const;
  // Rose word to a tightened closed path at base.
  Word from_rose(std::span<const Letter> word) const;
  CyclicWord class_to_rose(const CyclicWord& c) const;
  CyclicWord class_from_rose(const CyclicWord& c) const;

  // Marking as a rose endomorphism composed with the inverse: should be inner.
  FreeMap round_trip() const;

 private:
  std::shared_ptr<const Graph> graph_;
  std::vector<std::string> basis_names_;
  Vertex base_ = 0;
  std::vector<Word> marking_;
  std::vector<Word> inverse_;
  bool identity_ = false;
};

// Spanning-tree coordinates of pi_1(G, base): one free generator per
// non-tree edge, in edge order.
struct TreeBasis {
  std::vector<EdgeId> generators;             // non-tree edges
  std::vector<int> generator_index;            // edge -> index or -1
  std::vector<Word> to_vertex;                 // tree path base -> v
  Word loop(std::size_t i, const Graph& g) const;  // closed path for generator i
  Word coordinates(std::span<const Letter> closed_path) const;  // word in generators
};
TreeBasis tree_basis(const Graph& g, Vertex base);

}  // namespace freesplit
