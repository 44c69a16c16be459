#include "freesplit/core_graph.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "freesplit/error.hpp"

namespace freesplit {

namespace {

// Stallings folding with union-find.
class Folder {
 public:
  explicit Folder(std::size_t rank) : rank_(rank) {}

  std::uint32_t add_vertex() {
    parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
    out_.emplace_back();
    return parent_.back();
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  void add_edge(std::uint32_t u, Letter l, std::uint32_t v) {
    pending_.emplace_back(u, l, v);
    drain();
  }

  std::size_t size() const { return parent_.size(); }

  // Adjacency of roots after folding, as a dense table.
  std::vector<std::int32_t> table(std::vector<std::uint32_t>& roots) {
    roots.clear();
    std::vector<std::int32_t> index(parent_.size(), -1);
    for (std::uint32_t x = 0; x < parent_.size(); ++x) {
      if (find(x) == x) {
        index[x] = static_cast<std::int32_t>(roots.size());
        roots.push_back(x);
      }
    }
    std::vector<std::int32_t> t(roots.size() * 2 * rank_, -1);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      for (auto [l, w] : out_[roots[i]]) t[i * 2 * rank_ + l] = index[find(w)];
    }
    return t;
  }

 private:
  void drain() {
    while (!pending_.empty()) {
      auto [u, l, v] = pending_.front();
      pending_.pop_front();
      u = find(u);
      v = find(v);
      auto it = out_[u].find(l);
      if (it == out_[u].end()) {
        out_[u][l] = v;
        auto jt = out_[v].find(inv(l));
        if (jt == out_[v].end()) {
          out_[v][inv(l)] = u;
        } else if (find(jt->second) != u) {
          pending_.emplace_back(v, inv(l), u);
        }
        continue;
      }
      std::uint32_t w = find(it->second);
      if (w == v) continue;
      std::uint32_t root = std::min(v, w), other = std::max(v, w);
      parent_[other] = root;
      for (auto [l2, t] : out_[other]) pending_.emplace_back(root, l2, t);
      out_[other].clear();
    }
  }

  std::size_t rank_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::map<Letter, std::uint32_t>> out_;
  std::deque<std::tuple<std::uint32_t, Letter, std::uint32_t>> pending_;
};

// Prunes valence <= 1 vertices, then renumbers by BFS from the least
// surviving vertex in letter order. Returns the new dense table.
std::vector<std::int32_t> core_of(std::vector<std::int32_t> t, std::size_t rank, std::size_t nv) {
  const std::size_t L = 2 * rank;
  std::vector<std::size_t> val(nv, 0);
  std::vector<bool> alive(nv, true);
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t l = 0; l < L; ++l) val[v] += t[v * L + l] >= 0 ? 1 : 0;
  }
  std::vector<std::size_t> work;
  for (std::size_t v = 0; v < nv; ++v) {
    if (val[v] <= 1) work.push_back(v);
  }
  while (!work.empty()) {
    std::size_t v = work.back();
    work.pop_back();
    if (!alive[v] || val[v] > 1) continue;
    alive[v] = false;
    for (std::size_t l = 0; l < L; ++l) {
      std::int32_t w = t[v * L + l];
      if (w < 0) continue;
      t[v * L + l] = -1;
      std::size_t back = static_cast<std::size_t>(w) * L + inv(static_cast<Letter>(l));
      if (t[back] >= 0) {
        t[back] = -1;
        if (--val[static_cast<std::size_t>(w)] <= 1) work.push_back(static_cast<std::size_t>(w));
      }
    }
    val[v] = 0;
  }
  std::vector<std::int32_t> index(nv, -1);
  std::vector<std::size_t> order;
  for (std::size_t s = 0; s < nv; ++s) {
    if (!alive[s] || index[s] >= 0) continue;
    if (!order.empty()) invalid_input("core graph is not connected");
    std::deque<std::size_t> q{s};
    index[s] = 0;
    order.push_back(s);
    while (!q.empty()) {
      std::size_t v = q.front();
      q.pop_front();
      for (std::size_t l = 0; l < L; ++l) {
        std::int32_t w = t[v * L + l];
        if (w >= 0 && index[static_cast<std::size_t>(w)] < 0) {
          index[static_cast<std::size_t>(w)] = static_cast<std::int32_t>(order.size());
          order.push_back(static_cast<std::size_t>(w));
          q.push_back(static_cast<std::size_t>(w));
        }
      }
    }
  }
  std::vector<std::int32_t> out(order.size() * L, -1);
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t l = 0; l < L; ++l) {
      std::int32_t w = t[order[i] * L + l];
      if (w >= 0) out[i * L + l] = index[static_cast<std::size_t>(w)];
    }
  }
  return out;
}

}  // namespace

CoreGraph CoreGraph::fold(const std::vector<Word>& generators, std::size_t rank) {
  Folder folder(rank);
  std::uint32_t base = folder.add_vertex();
  for (const auto& g : generators) {
    Word w = free_reduce(g);
    if (w.empty()) invalid_input("fold: trivial generator");
    std::uint32_t at = base;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (edge_of(w[i]) >= rank) invalid_input("fold: letter outside the rank");
      std::uint32_t next = i + 1 == w.size() ? base : folder.add_vertex();
      folder.add_edge(at, w[i], next);
      at = next;
    }
  }
  std::vector<std::uint32_t> roots;
  auto table = folder.table(roots);
  CoreGraph g;
  g.rank_ = rank;
  g.out_ = core_of(std::move(table), rank, roots.size());
  const std::size_t L = 2 * rank;
  for (std::size_t v = 0; rank > 0 && v < g.out_.size() / L; ++v) {
    for (std::size_t e = 0; e < rank; ++e) {
      std::int32_t w = g.out_[v * L + 2 * e];
      if (w >= 0) g.edges_.push_back({static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(w), forward(static_cast<std::uint32_t>(e))});
    }
  }
  g.compute_canonical();
  return g;
}

CoreGraph CoreGraph::from_edges(std::size_t rank, std::size_t vertices, const std::vector<Edge>& edges) {
  Folder folder(rank);
  for (std::size_t i = 0; i < vertices; ++i) folder.add_vertex();
  for (const auto& e : edges) folder.add_edge(e.from, e.label, e.to);
  std::vector<std::uint32_t> roots;
  auto table = folder.table(roots);
  CoreGraph g;
  g.rank_ = rank;
  g.out_ = core_of(std::move(table), rank, roots.size());
  const std::size_t L = 2 * rank;
  for (std::size_t v = 0; rank > 0 && v < g.out_.size() / L; ++v) {
    for (std::size_t e = 0; e < rank; ++e) {
      std::int32_t w = g.out_[v * L + 2 * e];
      if (w >= 0) g.edges_.push_back({static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(w), forward(static_cast<std::uint32_t>(e))});
    }
  }
  g.compute_canonical();
  return g;
}

std::optional<std::uint32_t> CoreGraph::step(std::uint32_t v, Letter l) const {
  std::int32_t w = out_.at(v * 2 * rank_ + l);
  if (w < 0) return std::nullopt;
  return static_cast<std::uint32_t>(w);
}

bool CoreGraph::reads_closed(std::span<const Letter> c) const {
  if (c.empty()) return !empty();
  const std::size_t L = 2 * rank_;
  for (std::size_t v = 0; v < num_vertices(); ++v) {
    std::size_t at = v;
    bool ok = true;
    for (Letter l : c) {
      if (edge_of(l) >= rank_) return false;
      std::int32_t w = out_[at * L + l];
      if (w < 0) {
        ok = false;
        break;
      }
      at = static_cast<std::size_t>(w);
    }
    if (ok && at == v) return true;
  }
  return false;
}

std::vector<Word> CoreGraph::basis() const {
  std::vector<Word> out;
  const std::size_t nv = num_vertices();
  if (nv == 0) return out;
  const std::size_t L = 2 * rank_;
  std::vector<Word> path(nv);
  std::vector<bool> seen(nv, false);
  std::set<std::pair<std::size_t, Letter>> tree;  // (vertex, forward letter) of tree edges
  std::deque<std::size_t> q{0};
  seen[0] = true;
  while (!q.empty()) {
    std::size_t v = q.front();
    q.pop_front();
    for (Letter l = 0; l < L; ++l) {
      std::int32_t w = out_[v * L + l];
      if (w < 0 || seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = true;
      path[static_cast<std::size_t>(w)] = path[v];
      path[static_cast<std::size_t>(w)].push_back(l);
      if (is_barred(l)) {
        tree.insert({static_cast<std::size_t>(w), inv(l)});
      } else {
        tree.insert({v, l});
      }
      q.push_back(static_cast<std::size_t>(w));
    }
  }
  for (const auto& e : edges_) {
    if (tree.count({e.from, e.label})) continue;
    Word w = path[e.from];
    append_reduced(w, Word{e.label});
    append_inverse_reduced(w, path[e.to]);
    out.push_back(w);
  }
  return out;
}

bool CoreGraph::maps_into(const CoreGraph& other) const {
  if (empty()) return true;
  if (rank_ != other.rank_) return false;
  const std::size_t L = 2 * rank_;
  for (std::size_t target = 0; target < other.num_vertices(); ++target) {
    std::vector<std::int64_t> img(num_vertices(), -1);
    img[0] = static_cast<std::int64_t>(target);
    std::deque<std::size_t> q{0};
    bool ok = true;
    while (!q.empty() && ok) {
      std::size_t v = q.front();
      q.pop_front();
      for (Letter l = 0; l < L && ok; ++l) {
        std::int32_t w = out_[v * L + l];
        if (w < 0) continue;
        std::int32_t y = other.out_[static_cast<std::size_t>(img[v]) * L + l];
        if (y < 0) {
          ok = false;
        } else if (img[static_cast<std::size_t>(w)] < 0) {
          img[static_cast<std::size_t>(w)] = y;
          q.push_back(static_cast<std::size_t>(w));
        } else if (img[static_cast<std::size_t>(w)] != y) {
          ok = false;
        }
      }
    }
    if (ok) return true;
  }
  return false;
}

void CoreGraph::compute_canonical() {
  const std::size_t nv = num_vertices();
  const std::size_t L = 2 * rank_;
  canonical_.clear();
  if (nv == 0) return;
  std::vector<std::int64_t> best;
  std::vector<std::int64_t> number(nv);
  std::vector<std::size_t> order;
  for (std::size_t s = 0; s < nv; ++s) {
    std::fill(number.begin(), number.end(), -1);
    order.clear();
    number[s] = 0;
    order.push_back(s);
    std::vector<std::int64_t> code;
    code.reserve(1 + nv * L);
    code.push_back(static_cast<std::int64_t>(nv));
    bool worse = false;
    for (std::size_t i = 0; i < order.size() && !worse; ++i) {
      std::size_t v = order[i];
      for (std::size_t l = 0; l < L; ++l) {
        std::int32_t w = out_[v * L + l];
        std::int64_t c = -1;
        if (w >= 0) {
          if (number[static_cast<std::size_t>(w)] < 0) {
            number[static_cast<std::size_t>(w)] = static_cast<std::int64_t>(order.size());
            order.push_back(static_cast<std::size_t>(w));
          }
          c = number[static_cast<std::size_t>(w)];
        }
        code.push_back(c);
        if (!best.empty()) {
          std::size_t k = code.size() - 1;
          if (code[k] > best[k] && std::equal(code.begin(), code.begin() + static_cast<std::ptrdiff_t>(k), best.begin())) {
            worse = true;
            break;
          }
        }
      }
    }
    if (worse) continue;
    if (best.empty() || code < best) best = std::move(code);
  }
  canonical_ = std::move(best);
}

std::string CoreGraph::to_text(const std::vector<std::string>& names) const {
  std::ostringstream out;
  out << "VERTICES";
  for (std::size_t v = 0; v < num_vertices(); ++v) out << " c" << v;
  out << "\nEDGES\n";
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    out << 'e' << i << " c" << e.from << " c" << e.to << ' ' << format_word(Word{e.label}, names) << '\n';
  }
  return out.str();
}

FreeFactorSystem::FreeFactorSystem(std::size_t rank, std::vector<CoreGraph> components)
    : rank_(rank), components_(std::move(components)) {
  components_.erase(std::remove_if(components_.begin(), components_.end(), [](const CoreGraph& g) { return g.empty(); }),
                    components_.end());
  sort_components();
}

FreeFactorSystem FreeFactorSystem::from_generators(std::size_t rank, const std::vector<std::vector<Word>>& comps) {
  std::vector<CoreGraph> gs;
  for (const auto& gens : comps) gs.push_back(CoreGraph::fold(gens, rank));
  return FreeFactorSystem(rank, std::move(gs));
}

void FreeFactorSystem::sort_components() {
  std::sort(components_.begin(), components_.end(),
            [](const CoreGraph& a, const CoreGraph& b) { return a.canonical() < b.canonical(); });
}

std::vector<std::size_t> FreeFactorSystem::ranks() const {
  std::vector<std::size_t> out;
  for (const auto& c : components_) out.push_back(c.rank());
  return out;
}

bool FreeFactorSystem::proper() const {
  if (components_.empty()) return false;
  return !(components_.size() == 1 && components_[0].rank() == rank_);
}

bool operator==(const FreeFactorSystem& a, const FreeFactorSystem& b) {
  if (a.rank_ != b.rank_ || a.components_.size() != b.components_.size()) return false;
  for (std::size_t i = 0; i < a.components_.size(); ++i) {
    if (a.components_[i].canonical() != b.components_[i].canonical()) return false;
  }
  return true;
}

std::string FreeFactorSystem::describe(const std::vector<std::string>& names) const {
  std::string out = "{";
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i) out += ", ";
    out += "[<";
    auto basis = components_[i].basis();
    for (std::size_t j = 0; j < basis.size(); ++j) {
      if (j) out += ", ";
      out += format_word(basis[j], names);
    }
    out += ">]";
  }
  return out + "}";
}

bool carries(const FreeFactorSystem& ffs, const CyclicWord& c) {
  for (const auto& g : ffs.components()) {
    if (g.reads_closed(c.letters())) return true;
  }
  return false;
}

FreeFactorSystem meet(const FreeFactorSystem& a, const FreeFactorSystem& b) {
  if (a.ambient_rank() != b.ambient_rank()) invalid_input("meet: rank mismatch");
  const std::size_t rank = a.ambient_rank();
  std::vector<CoreGraph> out;
  for (const auto& g : a.components()) {
    for (const auto& h : b.components()) {
      const std::size_t n1 = g.num_vertices(), n2 = h.num_vertices();
      const std::size_t nv = n1 * n2;
      std::vector<std::uint32_t> parent(nv);
      std::iota(parent.begin(), parent.end(), 0);
      auto find = [&](std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
      };
      std::vector<CoreGraph::Edge> edges;
      for (std::uint32_t u = 0; u < n1; ++u) {
        for (std::uint32_t v = 0; v < n2; ++v) {
          for (std::uint32_t e = 0; e < rank; ++e) {
            auto s = g.step(u, forward(e));
            auto t = h.step(v, forward(e));
            if (!s || !t) continue;
            std::uint32_t from = u * static_cast<std::uint32_t>(n2) + v;
            std::uint32_t to = *s * static_cast<std::uint32_t>(n2) + *t;
            edges.push_back({from, to, forward(e)});
            parent[find(from)] = find(to);
          }
        }
      }
      std::map<std::uint32_t, std::vector<CoreGraph::Edge>> groups;
      for (const auto& e : edges) groups[find(e.from)].push_back(e);
      for (auto& [root, es] : groups) {
        // Renumber the component's vertices densely.
        std::map<std::uint32_t, std::uint32_t> idx;
        for (auto& e : es) {
          idx.emplace(e.from, static_cast<std::uint32_t>(idx.size()));
          idx.emplace(e.to, static_cast<std::uint32_t>(idx.size()));
        }
        for (auto& e : es) {
          e.from = idx[e.from];
          e.to = idx[e.to];
        }
        if (es.size() + 1 <= idx.size()) continue;  // tree
        CoreGraph c = CoreGraph::from_edges(rank, idx.size(), es);
        if (!c.empty()) out.push_back(std::move(c));
      }
    }
  }
  return FreeFactorSystem(rank, std::move(out));
}

bool is_contained(const FreeFactorSystem& a, const FreeFactorSystem& b) {
  for (const auto& g : a.components()) {
    bool found = false;
    for (const auto& h : b.components()) {
      if (g.maps_into(h)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::size_t co_edge_number(const FreeFactorSystem& ffs) {
  if (!ffs.proper()) invalid_input("co_edge_number needs a proper free factor system");
  std::size_t total = 0;
  for (auto r : ffs.ranks()) total += r;
  if (total > ffs.ambient_rank()) invalid_input("component ranks exceed the ambient rank");
  return (ffs.ambient_rank() - total) + (ffs.size() - 1);
}

FreeFactorSystem subgraph_system(const MarkedGraph& g, const EdgeSet& edges) {
  const Graph& gr = g.graph();
  std::vector<int> comp(gr.num_vertices(), -1);
  std::vector<std::vector<Word>> comps;
  for (Vertex s = 0; s < gr.num_vertices(); ++s) {
    if (comp[s] >= 0) continue;
    bool touches = false;
    for (EdgeId e : edges) touches = touches || gr.edge(e).from == s || gr.edge(e).to == s;
    if (!touches) continue;
    // Spanning tree of this component of the subgraph; each remaining edge
    // closes a loop at s.
    const int id = static_cast<int>(comps.size());
    std::vector<Word> path(gr.num_vertices());
    std::set<EdgeId> tree;
    comp[s] = id;
    std::deque<Vertex> q{s};
    while (!q.empty()) {
      Vertex v = q.front();
      q.pop_front();
      for (Letter l : gr.star(v)) {
        if (!edges.count(edge_of(l))) continue;
        Vertex w = gr.terminus(l);
        if (comp[w] >= 0) continue;
        comp[w] = id;
        path[w] = path[v];
        path[w].push_back(l);
        tree.insert(edge_of(l));
        q.push_back(w);
      }
    }
    std::vector<Word> gens;
    for (EdgeId e : edges) {
      if (tree.count(e) || comp[gr.edge(e).from] != id) continue;
      Word loop = path[gr.edge(e).from];
      append_reduced(loop, Word{forward(e)});
      append_inverse_reduced(loop, path[gr.edge(e).to]);
      gens.push_back(free_reduce(g.to_rose(loop)));
    }
    comps.push_back(std::move(gens));
  }
  std::vector<std::vector<Word>> nontrivial;
  for (auto& c : comps) {
    if (!c.empty()) nontrivial.push_back(std::move(c));
  }
  return FreeFactorSystem::from_generators(g.rank(), nontrivial);
}

std::vector<CyclicWord> candidate_classes(const FreeFactorSystem& ffs, std::size_t max_length) {
  std::set<CyclicWord> found;
  if (max_length == 0) return {};
  for (const auto& g : ffs.components()) {
    const std::size_t L = 2 * g.ambient_rank();
    Word path;
    std::function<void(std::uint32_t, std::uint32_t)> dfs = [&](std::uint32_t start, std::uint32_t at) {
      if (!path.empty() && at == start && path.front() != inv(path.back())) {
        found.insert(CyclicWord::from_word(path));
      }
      if (path.size() == max_length) return;
      for (Letter l = 0; l < L; ++l) {
        if (!path.empty() && l == inv(path.back())) continue;
        auto next = g.step(at, l);
        if (!next) continue;
        path.push_back(l);
        dfs(start, *next);
        path.pop_back();
      }
    };
    for (std::uint32_t v = 0; v < g.num_vertices(); ++v) dfs(v, v);
  }
  return {found.begin(), found.end()};
}

}  // namespace freesplit
