#include "freesplit/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "freesplit/error.hpp"

namespace freesplit {

Graph::Graph(std::vector<std::string> vertex_names, std::vector<EdgeSpec> edges)
    : vertex_names_(std::move(vertex_names)), edges_(std::move(edges)) {
  for (const auto& e : edges_) {
    if (e.from >= vertex_names_.size() || e.to >= vertex_names_.size()) {
      invalid_input("edge '" + e.name + "' has an endpoint outside the vertex set");
    }
    if (e.name.empty() || e.name.back() == '\'') invalid_input("bad edge name '" + e.name + "'");
    if (std::find(edge_names_.begin(), edge_names_.end(), e.name) != edge_names_.end()) {
      invalid_input("duplicate edge name '" + e.name + "'");
    }
    edge_names_.push_back(e.name);
  }
}

Graph Graph::rose(const std::vector<std::string>& names) {
  std::vector<EdgeSpec> edges;
  for (const auto& n : names) edges.push_back({n, 0, 0});
  return Graph({"v"}, std::move(edges));
}

Vertex Graph::origin(Letter l) const {
  const auto& e = edges_.at(edge_of(l));
  return is_barred(l) ? e.to : e.from;
}

Vertex Graph::terminus(Letter l) const {
  const auto& e = edges_.at(edge_of(l));
  return is_barred(l) ? e.from : e.to;
}

std::optional<EdgeId> Graph::find_edge(const std::string& name) const {
  auto it = std::find(edge_names_.begin(), edge_names_.end(), name);
  if (it == edge_names_.end()) return std::nullopt;
  return static_cast<EdgeId>(it - edge_names_.begin());
}

std::optional<Vertex> Graph::find_vertex(const std::string& name) const {
  auto it = std::find(vertex_names_.begin(), vertex_names_.end(), name);
  if (it == vertex_names_.end()) return std::nullopt;
  return static_cast<Vertex>(it - vertex_names_.begin());
}

std::vector<Letter> Graph::star(Vertex v) const {
  std::vector<Letter> out;
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    if (edges_[e].from == v) out.push_back(forward(e));
    if (edges_[e].to == v) out.push_back(barred(e));
  }
  return out;
}

std::size_t Graph::valence(Vertex v) const { return star(v).size(); }

std::size_t Graph::num_components() const {
  std::vector<Vertex> parent(vertex_names_.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Vertex x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t comps = vertex_names_.size();
  for (const auto& e : edges_) {
    Vertex a = find(e.from), b = find(e.to);
    if (a != b) {
      parent[a] = b;
      --comps;
    }
  }
  return comps;
}

std::size_t Graph::rank() const { return edges_.size() + num_components() - vertex_names_.size(); }

bool Graph::is_rose() const { return vertex_names_.size() == 1; }

std::string Graph::letter_name(Letter l) const {
  std::string s = edge_names_.at(edge_of(l));
  if (is_barred(l)) s += '\'';
  return s;
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.vertex_names_ != b.vertex_names_ || a.edge_names_ != b.edge_names_) return false;
  for (std::size_t i = 0; i < a.edges_.size(); ++i) {
    if (a.edges_[i].from != b.edges_[i].from || a.edges_[i].to != b.edges_[i].to) return false;
  }
  return true;
}

Vertex EdgePath::end(const Graph& g) const { return letters.empty() ? start : g.terminus(letters.back()); }

void check_path(const Graph& g, const EdgePath& p) {
  if (p.start >= g.num_vertices()) invalid_input("path starts outside the graph");
  Vertex at = p.start;
  for (Letter l : p.letters) {
    if (edge_of(l) >= g.num_edges()) invalid_input("path uses an unknown edge");
    if (g.origin(l) != at) invalid_input("edge sequence is not endpoint-compatible");
    at = g.terminus(l);
  }
}

EdgePath tighten(const Graph& g, const EdgePath& p) {
  check_path(g, p);
  return {p.start, free_reduce(p.letters)};
}

EdgePath make_path(const Graph& g, const Word& letters) {
  EdgePath p{letters.empty() ? 0 : g.origin(letters.front()), letters};
  check_path(g, p);
  return p;
}

bool is_closed(const Graph& g, const EdgePath& p) { return p.end(g) == p.start; }

CyclicWord canonical_cyclic(const Graph& g, const EdgePath& p) {
  check_path(g, p);
  if (!is_closed(g, p)) invalid_input("canonical_cyclic needs a closed path");
  return CyclicWord::from_word(p.letters);
}

Word TreeBasis::loop(std::size_t i, const Graph& g) const {
  EdgeId e = generators.at(i);
  Word w = to_vertex[g.edge(e).from];
  append_reduced(w, Word{forward(e)});
  append_inverse_reduced(w, to_vertex[g.edge(e).to]);
  return w;
}

Word TreeBasis::coordinates(std::span<const Letter> path) const {
  Word out;
  for (Letter l : path) {
    int idx = generator_index.at(edge_of(l));
    if (idx < 0) continue;
    Letter g = is_barred(l) ? barred(static_cast<std::uint32_t>(idx)) : forward(static_cast<std::uint32_t>(idx));
    append_reduced(out, Word{g});
  }
  return out;
}

TreeBasis tree_basis(const Graph& g, Vertex base) {
  TreeBasis tb;
  tb.generator_index.assign(g.num_edges(), -1);
  tb.to_vertex.assign(g.num_vertices(), Word{});
  std::vector<bool> seen(g.num_vertices(), false);
  std::vector<bool> tree(g.num_edges(), false);
  std::deque<Vertex> queue{base};
  seen[base] = true;
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    for (Letter l : g.star(v)) {
      Vertex w = g.terminus(l);
      if (seen[w]) continue;
      seen[w] = true;
      tree[edge_of(l)] = true;
      tb.to_vertex[w] = tb.to_vertex[v];
      tb.to_vertex[w].push_back(l);
      queue.push_back(w);
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) invalid_input("graph is not connected");
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!tree[e]) {
      tb.generator_index[e] = static_cast<int>(tb.generators.size());
      tb.generators.push_back(e);
    }
  }
  return tb;
}

MarkedGraph::MarkedGraph(std::shared_ptr<const Graph> graph, std::vector<std::string> basis_names,
                         Vertex base, std::vector<Word> marking, std::vector<Word> inverse_images)
    : graph_(std::move(graph)),
      basis_names_(std::move(basis_names)),
      base_(base),
      marking_(std::move(marking)),
      inverse_(std::move(inverse_images)) {
  const Graph& g = *graph_;
  if (base_ >= g.num_vertices()) invalid_input("marking base vertex outside the graph");
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (g.valence(v) < 2) invalid_input("vertex '" + g.vertex_names()[v] + "' has valence < 2");
  }
  if (g.num_components() != 1) invalid_input("marked graph must be connected");
  if (g.rank() != basis_names_.size()) invalid_input("marking rank does not match the graph rank");
  if (marking_.size() != basis_names_.size()) invalid_input("marking must give one path per basis element");
  for (auto& w : marking_) {
    EdgePath p{base_, w};
    check_path(g, p);
    if (!is_closed(g, p)) invalid_input("marking paths must be closed at the base vertex");
    w = free_reduce(w);
  }
  const std::size_t n = basis_names_.size();
  identity_ = g.is_rose() && g.num_edges() == n;
  for (std::size_t i = 0; identity_ && i < n; ++i) {
    identity_ = marking_[i] == Word{forward(static_cast<std::uint32_t>(i))};
  }
  if (inverse_.empty()) {
    if (identity_) {
      for (std::size_t i = 0; i < n; ++i) inverse_.push_back({forward(static_cast<std::uint32_t>(i))});
    } else {
      TreeBasis tb = tree_basis(g, base_);
      std::vector<Word> coords;
      for (const auto& w : marking_) coords.push_back(tb.coordinates(w));
      FreeMap alpha_inv = invert(FreeMap(coords));
      inverse_.assign(g.num_edges(), Word{});
      for (std::size_t j = 0; j < tb.generators.size(); ++j) inverse_[tb.generators[j]] = alpha_inv.image(j);
    }
  } else {
    if (inverse_.size() != g.num_edges()) invalid_input("inverse marking must give one word per edge");
    for (auto& w : inverse_) {
      for (Letter l : w) {
        if (edge_of(l) >= n) invalid_input("inverse marking uses a letter outside the rank");
      }
      w = free_reduce(w);
    }
    if (outer_equal(round_trip(), FreeMap::identity(n)).verdict != OuterVerdict::Equal) {
      invalid_input("supplied inverse marking is not a homotopy inverse");
    }
  }
}

MarkedGraph MarkedGraph::standard_rose(const std::vector<std::string>& names) {
  std::vector<Word> marking;
  for (std::size_t i = 0; i < names.size(); ++i) marking.push_back({forward(static_cast<std::uint32_t>(i))});
  return MarkedGraph(std::make_shared<const Graph>(Graph::rose(names)), names, 0, std::move(marking));
}

Word MarkedGraph::to_rose(std::span<const Letter> path) const {
  Word out;
  for (Letter l : path) {
    const Word& img = inverse_.at(edge_of(l));
    if (is_barred(l)) {
      append_inverse_reduced(out, img);
    } else {
      append_reduced(out, img);
    }
  }
  return out;
}

Word MarkedGraph::from_rose(std::span<const Letter> word) const {
  Word out;
  for (Letter l : word) {
    const Word& img = marking_.at(edge_of(l));
    if (is_barred(l)) {
      append_inverse_reduced(out, img);
    } else {
      append_reduced(out, img);
    }
  }
  return out;
}

CyclicWord MarkedGraph::class_to_rose(const CyclicWord& c) const {
  if (identity_) return c;
  return CyclicWord::from_word(to_rose(c.letters()));
}

CyclicWord MarkedGraph::class_from_rose(const CyclicWord& c) const {
  if (identity_) return c;
  return CyclicWord::from_word(from_rose(c.letters()));
}

FreeMap MarkedGraph::round_trip() const {
  std::vector<Word> images;
  for (const auto& w : marking_) images.push_back(to_rose(w));
  return FreeMap(std::move(images));
}

}  // namespace freesplit
