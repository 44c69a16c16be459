#include "freesplit/splitting.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include "freesplit/error.hpp"
#include "freesplit/text_format.hpp"

namespace freesplit {

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

std::vector<std::size_t> subgraph_valence(const Graph& g, const EdgeSet& edges) {
  std::vector<std::size_t> val(g.num_vertices(), 0);
  for (EdgeId e : edges) {
    ++val[g.edge(e).from];
    ++val[g.edge(e).to];
  }
  return val;
}

}  // namespace

std::vector<EdgeSet> subgraph_components(const Graph& g, const EdgeSet& edges) {
  UnionFind uf(g.num_vertices());
  for (EdgeId e : edges) uf.unite(g.edge(e).from, g.edge(e).to);
  std::map<std::size_t, EdgeSet> by_root;
  std::vector<std::size_t> order;
  for (EdgeId e : edges) {
    std::size_t r = uf.find(g.edge(e).from);
    if (!by_root.count(r)) order.push_back(r);
    by_root[r].insert(e);
  }
  std::vector<EdgeSet> out;
  for (auto r : order) out.push_back(by_root[r]);
  return out;
}

std::size_t subgraph_rank(const Graph& g, const EdgeSet& edges) {
  auto val = subgraph_valence(g, edges);
  std::size_t vertices = std::count_if(val.begin(), val.end(), [](std::size_t v) { return v > 0; });
  std::size_t comps = subgraph_components(g, edges).size();
  return edges.size() + comps - vertices;
}

EdgeSet subgraph_core(const Graph& g, const EdgeSet& edges) {
  EdgeSet out = edges;
  for (bool changed = true; changed;) {
    changed = false;
    auto val = subgraph_valence(g, out);
    for (auto it = out.begin(); it != out.end();) {
      const auto& spec = g.edge(*it);
      if (val[spec.from] == 1 || val[spec.to] == 1) {
        it = out.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  return out;
}

bool all_components_noncontractible(const Graph& g, const EdgeSet& edges) {
  for (const auto& c : subgraph_components(g, edges)) {
    if (subgraph_rank(g, c) == 0) return false;
  }
  return true;
}

std::vector<EdgeSet> natural_edges(const Graph& g) {
  UnionFind uf(g.num_edges());
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (g.valence(v) != 2) continue;
    auto star = g.star(v);
    uf.unite(edge_of(star[0]), edge_of(star[1]));
  }
  std::map<std::size_t, EdgeSet> groups;
  for (EdgeId e = 0; e < g.num_edges(); ++e) groups[uf.find(e)].insert(e);
  std::vector<EdgeSet> out;
  for (auto& [r, s] : groups) out.push_back(s);
  std::sort(out.begin(), out.end(), [](const EdgeSet& a, const EdgeSet& b) { return *a.begin() < *b.begin(); });
  return out;
}

bool is_natural_subgraph(const Graph& g, const EdgeSet& edges) {
  for (const auto& chain : natural_edges(g)) {
    std::size_t in = 0;
    for (EdgeId e : chain) in += edges.count(e);
    if (in != 0 && in != chain.size()) return false;
  }
  return true;
}

std::vector<Vertex> natural_vertices(const Graph& g) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (g.valence(v) >= 3) out.push_back(v);
  }
  return out;
}

MarkedGraphPair validate_pair(const MarkedGraph& g, const EdgeSet& h) {
  const Graph& graph = g.graph();
  for (EdgeId e : h) {
    if (e >= graph.num_edges()) invalid_input("subgraph edge outside the graph");
  }
  if (!is_natural_subgraph(graph, h)) invalid_input("subgraph is not natural");
  if (!all_components_noncontractible(graph, h)) invalid_input("subgraph has a contractible component");
  std::size_t co_edge = 0;
  for (const auto& chain : natural_edges(graph)) co_edge += h.count(*chain.begin()) ? 0 : 1;
  if (co_edge == 0) invalid_input("subgraph is the whole graph");
  return {g, h, co_edge};
}

namespace {

std::vector<EdgeSet> outside_chains(const MarkedGraphPair& p) {
  std::vector<EdgeSet> out;
  for (const auto& chain : natural_edges(p.graph())) {
    if (!p.h.count(*chain.begin())) out.push_back(chain);
  }
  return out;
}

std::vector<EdgeSet> inside_chains(const MarkedGraphPair& p) {
  std::vector<EdgeSet> out;
  for (const auto& chain : natural_edges(p.graph())) {
    if (p.h.count(*chain.begin())) out.push_back(chain);
  }
  return out;
}

constexpr std::size_t kMaxSubsetBits = 20;

}  // namespace

std::vector<MarkedGraphPair> faces(const MarkedGraphPair& p) {
  if (p.co_edge < 2) invalid_input("faces need co-edge at least two");
  auto chains = outside_chains(p);
  if (chains.size() > kMaxSubsetBits) budget_exhausted("too many natural edges for face enumeration");
  std::vector<MarkedGraphPair> out;
  const std::size_t full = (std::size_t{1} << chains.size()) - 1;
  for (std::size_t mask = 1; mask < full; ++mask) {
    EdgeSet h = p.h;
    for (std::size_t i = 0; i < chains.size(); ++i) {
      if (mask >> i & 1) h.insert(chains[i].begin(), chains[i].end());
    }
    if (!all_components_noncontractible(p.graph(), h)) continue;
    out.push_back({p.marked, h, p.co_edge - static_cast<std::size_t>(__builtin_popcountll(mask))});
  }
  return out;
}

std::vector<MarkedGraphPair> cofaces(const MarkedGraphPair& p) {
  auto chains = inside_chains(p);
  if (chains.size() > kMaxSubsetBits) budget_exhausted("too many natural edges for coface enumeration");
  std::vector<MarkedGraphPair> out;
  const std::size_t count = std::size_t{1} << chains.size();
  for (std::size_t mask = 1; mask < count; ++mask) {
    EdgeSet h = p.h;
    for (std::size_t i = 0; i < chains.size(); ++i) {
      if (mask >> i & 1) {
        for (EdgeId e : chains[i]) h.erase(e);
      }
    }
    if (!all_components_noncontractible(p.graph(), h)) continue;
    out.push_back({p.marked, h, p.co_edge + static_cast<std::size_t>(__builtin_popcountll(mask))});
  }
  return out;
}

FreeFactorSystem elliptic_system(const MarkedGraphPair& p) { return subgraph_system(p.marked, p.h); }

OneEdgeSplitting one_edge(const MarkedGraphPair& p) {
  if (p.co_edge != 1) invalid_input("not a one-edge splitting");
  return {p, elliptic_system(p)};
}

bool equivalent_one_edge(const OneEdgeSplitting& a, const OneEdgeSplitting& b) { return a.elliptic == b.elliptic; }

namespace {

SplittingKey system_key(const FreeFactorSystem& ffs) {
  SplittingKey key{{1, static_cast<std::int64_t>(ffs.ambient_rank())}};
  for (const auto& c : ffs.components()) key.push_back(c.canonical());
  return key;
}

}  // namespace

SplittingKey splitting_key(const MarkedGraphPair& p) {
  if (p.co_edge == 1) return system_key(elliptic_system(p));
  auto chains = outside_chains(p);
  std::vector<SplittingKey> parts;
  for (std::size_t skip = 0; skip < chains.size(); ++skip) {
    EdgeSet h = p.h;
    for (std::size_t i = 0; i < chains.size(); ++i) {
      if (i != skip) h.insert(chains[i].begin(), chains[i].end());
    }
    if (!all_components_noncontractible(p.graph(), h)) continue;
    parts.push_back(system_key(elliptic_system({p.marked, h, 1})));
  }
  std::sort(parts.begin(), parts.end());
  SplittingKey key{{static_cast<std::int64_t>(p.co_edge)}};
  for (auto& part : parts) {
    key.push_back({-1});
    key.insert(key.end(), part.begin(), part.end());
  }
  return key;
}

bool same_splitting(const MarkedGraphPair& a, const MarkedGraphPair& b) {
  return a.co_edge == b.co_edge && splitting_key(a) == splitting_key(b);
}

MarkedGraphPair remark(const MarkedGraphPair& p, const GraphMap& f) {
  if (!(f.source() == p.graph()) || !f.is_endomorphism()) invalid_input("remarking map must be an endomorphism of the pair's graph");
  std::vector<Word> marking;
  for (const auto& w : p.marked.marking()) marking.push_back(map_path(f, EdgePath{p.marked.base(), w}).letters);
  MarkedGraph m(p.marked.graph_ptr(), p.marked.basis_names(), f.vertex_map()[p.marked.base()], marking);
  return {m, p.h, p.co_edge};
}

RelationResult pair_relation_check(const GraphMap& h, const MarkedGraphPair& p1, const MarkedGraphPair& p2,
                                   std::size_t budget) {
  if (!(h.source() == p1.graph()) || !(h.target() == p2.graph())) invalid_input("map does not go between the pairs' graphs");
  if (p1.marked.rank() != p2.marked.rank()) invalid_input("pairs have different ranks");
  RelationResult r;
  // (1) markings are preserved up to free homotopy.
  std::vector<Word> images;
  for (const auto& w : p1.marked.marking()) {
    images.push_back(free_reduce(p2.marked.to_rose(map_path(h, EdgePath{p1.marked.base(), w}).letters)));
  }
  const std::size_t n = p1.marked.rank();
  OuterResult o = outer_equal(FreeMap(images), FreeMap::identity(n), budget);
  if (o.verdict == OuterVerdict::Unknown) {
    r.reason = "marking comparison: " + o.reason;
    return r;
  }
  if (o.verdict == OuterVerdict::Distinct) {
    r.status = RelationStatus::FailsClause;
    r.clause = 1;
    r.reason = "map does not preserve the markings";
    return r;
  }
  // (2) natural vertices outside H correspond bijectively.
  const Graph& g1 = p1.graph();
  const Graph& g2 = p2.graph();
  auto outside = [](const Graph& g, const EdgeSet& hs) {
    auto val = subgraph_valence(g, hs);
    std::set<Vertex> out;
    for (Vertex v : natural_vertices(g)) {
      if (val[v] == 0) out.insert(v);
    }
    return out;
  };
  auto v1 = outside(g1, p1.h);
  auto v2 = outside(g2, p2.h);
  PairRelationWitness wit{h, {}, {}};
  std::set<Vertex> hit;
  for (Vertex v : v1) {
    Vertex img = h.vertex_map()[v];
    if (!v2.count(img) || !hit.insert(img).second) {
      r.status = RelationStatus::FailsClause;
      r.clause = 2;
      r.reason = "vertex '" + g1.vertex_names()[v] + "' has no matching natural vertex";
      return r;
    }
    wit.vertices.emplace_back(v, img);
  }
  if (hit.size() != v2.size()) {
    r.status = RelationStatus::FailsClause;
    r.clause = 2;
    r.reason = "natural vertices outside the subgraph are not onto";
    return r;
  }
  // (3) each edge outside H maps to (path in H') E' (path in H').
  std::set<EdgeId> matched;
  std::size_t outside_edges = 0;
  for (EdgeId e = 0; e < g2.num_edges(); ++e) outside_edges += p2.h.count(e) ? 0 : 1;
  for (EdgeId e = 0; e < g1.num_edges(); ++e) {
    if (p1.h.count(e)) continue;
    const Word& img = h.image(e);
    std::size_t pos = img.size(), count = 0;
    for (std::size_t i = 0; i < img.size(); ++i) {
      if (!p2.h.count(edge_of(img[i]))) {
        pos = i;
        ++count;
      }
    }
    if (count != 1 || !matched.insert(edge_of(img[pos])).second) {
      r.status = RelationStatus::FailsClause;
      r.clause = 3;
      r.reason = "image of edge '" + g1.edge_names()[e] + "' is not of the form uE'v with u, v in the subgraph";
      return r;
    }
    wit.edges.push_back({e, img[pos], Word(img.begin(), img.begin() + static_cast<std::ptrdiff_t>(pos)),
                         Word(img.begin() + static_cast<std::ptrdiff_t>(pos) + 1, img.end())});
  }
  if (matched.size() != outside_edges) {
    r.status = RelationStatus::FailsClause;
    r.clause = 3;
    r.reason = "edges outside the target subgraph are not all hit";
    return r;
  }
  r.status = RelationStatus::Holds;
  r.witness = std::move(wit);
  return r;
}

std::vector<MarkedGraph> blow_ups(const MarkedGraph& mg) {
  const Graph& g = mg.graph();
  std::vector<MarkedGraph> out;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    auto star = g.star(v);
    if (star.size() < 4 || star.size() > kMaxSubsetBits) continue;
    for (std::size_t mask = 0; mask < (std::size_t{1} << star.size()); ++mask) {
      if (mask & 1) continue;  // star[0] stays at v
      std::size_t moved = __builtin_popcountll(mask);
      if (moved < 2 || star.size() - moved < 2) continue;
      std::set<Letter> away;
      for (std::size_t i = 0; i < star.size(); ++i) {
        if (mask >> i & 1) away.insert(star[i]);
      }
      const Vertex nv = static_cast<Vertex>(g.num_vertices());
      std::vector<std::string> vnames = g.vertex_names();
      vnames.push_back(vnames[v] + "'");
      std::vector<EdgeSpec> edges;
      for (EdgeId e = 0; e < g.num_edges(); ++e) {
        EdgeSpec s = g.edge(e);
        if (away.count(forward(e))) s.from = nv;
        if (away.count(barred(e))) s.to = nv;
        edges.push_back(s);
      }
      std::string name = "e" + std::to_string(g.num_edges());
      while (g.find_edge(name)) name += "_";
      const EdgeId ne = static_cast<EdgeId>(g.num_edges());
      edges.push_back({name, v, nv});
      auto ng = std::make_shared<const Graph>(vnames, edges);
      std::vector<Word> marking;
      for (const auto& w : mg.marking()) {
        Word out_w;
        Vertex at = mg.base();
        for (Letter l : w) {
          Vertex o = ng->origin(l);
          if (o != at) out_w.push_back(at == v ? forward(ne) : barred(ne));
          out_w.push_back(l);
          at = ng->terminus(l);
        }
        if (at != mg.base()) out_w.push_back(at == v ? forward(ne) : barred(ne));
        marking.push_back(free_reduce(out_w));
      }
      std::vector<Word> inverse = mg.inverse_images();
      inverse.push_back({});
      out.emplace_back(ng, mg.basis_names(), mg.base(), marking, inverse);
    }
  }
  return out;
}

Adjacency adjacent(const OneEdgeSplitting& a, const OneEdgeSplitting& b, const SearchBudget& budget) {
  if (equivalent_one_edge(a, b)) invalid_input("splittings are equivalent");
  const SplittingKey ka = system_key(a.elliptic), kb = system_key(b.elliptic);
  std::vector<MarkedGraph> graphs{a.pair.marked, b.pair.marked};
  for (const auto* src : {&a.pair.marked, &b.pair.marked}) {
    for (auto& g : blow_ups(*src)) {
      if (graphs.size() >= budget.max_graphs) break;
      graphs.push_back(std::move(g));
    }
  }
  for (const auto& mg : graphs) {
    auto chains = natural_edges(mg.graph());
    for (std::size_t i = 0; i < chains.size(); ++i) {
      for (std::size_t j = i + 1; j < chains.size(); ++j) {
        EdgeSet h;
        for (std::size_t k = 0; k < chains.size(); ++k) {
          if (k != i && k != j) h.insert(chains[k].begin(), chains[k].end());
        }
        if (!all_components_noncontractible(mg.graph(), h)) continue;
        MarkedGraphPair p{mg, h, 2};
        std::vector<SplittingKey> keys;
        for (const auto& f : faces(p)) keys.push_back(system_key(elliptic_system(f)));
        if (keys.size() != 2) continue;
        if ((keys[0] == ka && keys[1] == kb) || (keys[0] == kb && keys[1] == ka)) return {true, p};
      }
    }
  }
  return {};
}

std::vector<std::pair<OneEdgeSplitting, OneEdgeSplitting>> adjacent_pairs(const MarkedGraph& g, std::size_t limit) {
  std::vector<std::pair<OneEdgeSplitting, OneEdgeSplitting>> out;
  std::set<std::pair<SplittingKey, SplittingKey>> seen;
  std::vector<MarkedGraph> graphs{g};
  for (auto& b : blow_ups(g)) graphs.push_back(std::move(b));
  for (const auto& mg : graphs) {
    auto chains = natural_edges(mg.graph());
    for (std::size_t i = 0; i < chains.size() && out.size() < limit; ++i) {
      for (std::size_t j = i + 1; j < chains.size() && out.size() < limit; ++j) {
        EdgeSet h;
        for (std::size_t k = 0; k < chains.size(); ++k) {
          if (k != i && k != j) h.insert(chains[k].begin(), chains[k].end());
        }
        if (!all_components_noncontractible(mg.graph(), h)) continue;
        auto fs = faces(MarkedGraphPair{mg, h, 2});
        if (fs.size() != 2) continue;
        auto a = one_edge(fs[0]), b = one_edge(fs[1]);
        if (equivalent_one_edge(a, b)) continue;
        SplittingKey ka = system_key(a.elliptic), kb = system_key(b.elliptic);
        if (kb < ka) std::swap(ka, kb);
        if (!seen.emplace(std::move(ka), std::move(kb)).second) continue;
        out.emplace_back(std::move(a), std::move(b));
      }
    }
  }
  return out;
}

DistanceResult fs_distance_upper(const MarkedGraphPair& a, const MarkedGraphPair& b, const SearchBudget& budget,
                                 const std::vector<MarkedGraph>& extra) {
  std::vector<MarkedGraph> graphs{a.marked, b.marked};
  graphs.insert(graphs.end(), extra.begin(), extra.end());
  struct Node {
    std::size_t graph;
    EdgeSet h;
    std::size_t co_edge;
  };
  std::vector<Node> nodes;
  std::map<std::pair<std::size_t, EdgeSet>, std::size_t> index;
  std::map<SplittingKey, std::vector<std::size_t>> by_key;
  std::vector<SplittingKey> keys;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const Graph& g = graphs[gi].graph();
    auto chains = natural_edges(g);
    if (chains.size() > kMaxSubsetBits) return {};
    for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << chains.size()); ++mask) {
      EdgeSet h;
      for (std::size_t i = 0; i < chains.size(); ++i) {
        if (mask >> i & 1) h.insert(chains[i].begin(), chains[i].end());
      }
      if (!all_components_noncontractible(g, h)) continue;
      if (nodes.size() >= budget.max_nodes) return {};
      std::size_t co = chains.size() - __builtin_popcountll(mask);
      index[{gi, h}] = nodes.size();
      keys.push_back(splitting_key({graphs[gi], h, co}));
      by_key[keys.back()].push_back(nodes.size());
      nodes.push_back({gi, h, co});
    }
  }
  auto pair_of = [&](std::size_t id) {
    return MarkedGraphPair{graphs[nodes[id].graph], nodes[id].h, nodes[id].co_edge};
  };
  auto start = index.find({0, a.h});
  auto goal = index.find({1, b.h});
  if (start == index.end() || goal == index.end()) invalid_input("inputs are not valid pairs");
  const std::size_t none = nodes.size();
  std::vector<std::size_t> dist(nodes.size(), SIZE_MAX), prev(nodes.size(), none);
  std::vector<std::string> how(nodes.size());
  std::deque<std::size_t> queue{start->second};
  dist[start->second] = 0;
  how[start->second] = "start";
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    auto relax = [&](std::size_t v, std::size_t w, const char* move) {
      if (dist[u] + w < dist[v]) {
        dist[v] = dist[u] + w;
        prev[v] = u;
        how[v] = move;
        if (w == 0) {
          queue.push_front(v);
        } else {
          queue.push_back(v);
        }
      }
    };
    for (std::size_t v : by_key[keys[u]]) relax(v, 0, "equal");
    const Node& nu = nodes[u];
    auto chains = natural_edges(graphs[nu.graph].graph());
    for (const auto& chain : chains) {
      EdgeSet h = nu.h;
      const bool inside = h.count(*chain.begin()) != 0;
      if (inside) {
        for (EdgeId e : chain) h.erase(e);
      } else {
        h.insert(chain.begin(), chain.end());
      }
      auto it = index.find({nu.graph, h});
      if (it != index.end()) relax(it->second, 1, inside ? "expand" : "collapse");
    }
  }
  const std::size_t target = goal->second;
  DistanceResult out;
  // A same-key node may be reached before the goal representative.
  std::size_t best = target;
  for (std::size_t v : by_key[keys[target]]) {
    if (dist[v] < dist[best]) best = v;
  }
  if (dist[best] == SIZE_MAX) return out;
  out.distance = dist[best];
  std::vector<std::size_t> chain;
  for (std::size_t v = best; v != none; v = prev[v]) chain.push_back(v);
  std::reverse(chain.begin(), chain.end());
  for (std::size_t v : chain) out.path.push_back({how[v], pair_of(v)});
  if (best != target) out.path.push_back({"equal", pair_of(target)});
  return out;
}

std::string pair_to_text(const MarkedGraphPair& p) {
  Document doc;
  doc.graph = p.marked.graph_ptr();
  doc.marked = p.marked;
  doc.subgraph = p.h;
  return print_document(doc);
}

}  // namespace freesplit
