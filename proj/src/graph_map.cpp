#include "freesplit/graph_map.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

#include "freesplit/error.hpp"

namespace freesplit {

GraphMap::GraphMap(std::shared_ptr<const Graph> source, std::shared_ptr<const Graph> target,
                   std::vector<Vertex> vertex_map, std::vector<Word> edge_images)
    : source_(std::move(source)),
      target_(std::move(target)),
      vertex_map_(std::move(vertex_map)),
      images_(std::move(edge_images)) {
  const Graph& s = *source_;
  const Graph& t = *target_;
  if (vertex_map_.size() != s.num_vertices()) invalid_input("vertex assignment has the wrong size");
  if (images_.size() != s.num_edges()) invalid_input("need one image per edge");
  for (Vertex v : vertex_map_) {
    if (v >= t.num_vertices()) invalid_input("vertex assignment leaves the target");
  }
  for (EdgeId e = 0; e < s.num_edges(); ++e) {
    EdgePath p{vertex_map_[s.edge(e).from], images_[e]};
    check_path(t, p);
    if (p.end(t) != vertex_map_[s.edge(e).to]) {
      invalid_input("image of edge '" + s.edge_names()[e] + "' does not match the vertex assignment");
    }
    images_[e] = free_reduce(images_[e]);
  }
}

GraphMap GraphMap::identity(std::shared_ptr<const Graph> g) {
  std::vector<Vertex> vm(g->num_vertices());
  for (Vertex v = 0; v < vm.size(); ++v) vm[v] = v;
  std::vector<Word> images(g->num_edges());
  for (EdgeId e = 0; e < images.size(); ++e) images[e] = {forward(e)};
  return GraphMap(g, g, std::move(vm), std::move(images));
}

GraphMap GraphMap::from_free_map(std::shared_ptr<const Graph> rose, const FreeMap& f) {
  if (!rose->is_rose() || rose->num_edges() != f.rank()) invalid_input("from_free_map needs a rose of matching rank");
  return GraphMap(rose, rose, {0}, f.images());
}

void GraphMap::append_image(Word& acc, Letter l) const {
  const Word& img = images_.at(edge_of(l));
  if (is_barred(l)) {
    append_inverse_reduced(acc, img);
  } else {
    append_reduced(acc, img);
  }
}

FreeMap GraphMap::to_free_map() const {
  if (!source_->is_rose() || !target_->is_rose() || source_->num_edges() != target_->num_edges()) {
    invalid_input("rose endomorphism expected");
  }
  return FreeMap(images_);
}

bool operator==(const GraphMap& a, const GraphMap& b) {
  return *a.source_ == *b.source_ && *a.target_ == *b.target_ && a.vertex_map_ == b.vertex_map_ &&
         a.images_ == b.images_;
}

Word map_word(const GraphMap& f, std::span<const Letter> w, std::size_t cap) {
  Word out;
  for (Letter l : w) {
    if (edge_of(l) >= f.source().num_edges()) invalid_input("word is not in the source graph");
    f.append_image(out, l);
    if (out.size() > cap) budget_exhausted("image length exceeds cap " + std::to_string(cap));
  }
  return out;
}

EdgePath map_path(const GraphMap& f, const EdgePath& p) {
  check_path(f.source(), p);
  return {f.vertex_map()[p.start], map_word(f, p.letters)};
}

CyclicWord map_circuit(const GraphMap& f, const CyclicWord& c) {
  return CyclicWord::from_word(map_word(f, c.letters()));
}

EdgePath iterate(const GraphMap& f, EdgePath p, unsigned k, std::size_t cap) {
  if (!f.is_endomorphism() && k > 0) invalid_input("iterate needs an endomorphism");
  check_path(f.source(), p);
  p.letters = free_reduce(p.letters);
  for (unsigned i = 0; i < k; ++i) {
    p = {f.vertex_map()[p.start], map_word(f, p.letters, cap)};
  }
  return p;
}

CyclicWord iterate(const GraphMap& f, CyclicWord c, unsigned k, std::size_t cap) {
  if (!f.is_endomorphism() && k > 0) invalid_input("iterate needs an endomorphism");
  for (unsigned i = 0; i < k; ++i) c = CyclicWord::from_word(map_word(f, c.letters(), cap));
  return c;
}

GraphMap compose(const GraphMap& f, const GraphMap& g) {
  if (!(g.target() == f.source())) invalid_input("compose: target of g is not the source of f");
  std::vector<Vertex> vm(g.source().num_vertices());
  for (Vertex v = 0; v < vm.size(); ++v) vm[v] = f.vertex_map()[g.vertex_map()[v]];
  std::vector<Word> images;
  images.reserve(g.images().size());
  for (const auto& w : g.images()) images.push_back(map_word(f, w));
  return GraphMap(g.source_ptr(), f.target_ptr(), std::move(vm), std::move(images));
}

GraphMap power(const GraphMap& f, unsigned k) {
  if (!f.is_endomorphism()) invalid_input("power needs an endomorphism");
  GraphMap out = GraphMap::identity(f.source_ptr());
  for (unsigned i = 0; i < k; ++i) out = compose(f, out);
  return out;
}

TransitionMatrix::TransitionMatrix(std::vector<EdgeId> edges, std::vector<long long> entries)
    : edges_(std::move(edges)), entries_(std::move(entries)) {
  if (entries_.size() != edges_.size() * edges_.size()) invalid_input("transition matrix has the wrong size");
}

TransitionMatrix TransitionMatrix::block(const std::vector<EdgeId>& edges) const {
  std::vector<std::size_t> idx;
  for (EdgeId e : edges) {
    auto it = std::find(edges_.begin(), edges_.end(), e);
    if (it == edges_.end()) invalid_input("block edge not in matrix");
    idx.push_back(static_cast<std::size_t>(it - edges_.begin()));
  }
  std::vector<long long> entries;
  for (std::size_t r : idx) {
    for (std::size_t c : idx) entries.push_back(at(r, c));
  }
  return TransitionMatrix(edges, std::move(entries));
}

std::vector<std::vector<long long>> TransitionMatrix::rows() const {
  std::vector<std::vector<long long>> out(size(), std::vector<long long>(size()));
  for (std::size_t r = 0; r < size(); ++r) {
    for (std::size_t c = 0; c < size(); ++c) out[r][c] = at(r, c);
  }
  return out;
}

TransitionMatrix transition_matrix(const GraphMap& f) {
  if (!f.is_endomorphism()) invalid_input("transition_matrix needs an endomorphism");
  const std::size_t n = f.source().num_edges();
  std::vector<EdgeId> edges(n);
  for (EdgeId e = 0; e < n; ++e) edges[e] = e;
  std::vector<long long> entries(n * n, 0);
  for (EdgeId col = 0; col < n; ++col) {
    for (Letter l : f.image(col)) entries[edge_of(l) * n + col] += 1;
  }
  return TransitionMatrix(std::move(edges), std::move(entries));
}

TransitionMatrix multiply(const TransitionMatrix& a, const TransitionMatrix& b) {
  if (a.edges() != b.edges()) invalid_input("multiply: index mismatch");
  const std::size_t n = a.size();
  std::vector<long long> entries(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) entries[i * n + j] += a.at(i, k) * b.at(k, j);
    }
  }
  return TransitionMatrix(a.edges(), std::move(entries));
}

double pf_eigenvalue(const TransitionMatrix& m, double tol, std::size_t cap) {
  const std::size_t n = m.size();
  if (n == 0) return 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (m.at(r, c) < 0) invalid_input("pf_eigenvalue needs a nonnegative matrix");
    }
  }
  // Iterate with A + I, which is primitive for irreducible A; the
  // Collatz-Wielandt ratios bracket the spectral radius.
  std::vector<double> x(n, 1.0), y(n);
  for (std::size_t it = 0; it < cap; ++it) {
    for (std::size_t r = 0; r < n; ++r) {
      double s = x[r];
      for (std::size_t c = 0; c < n; ++c) s += static_cast<double>(m.at(r, c)) * x[c];
      y[r] = s;
    }
    double lo = INFINITY, hi = 0.0, top = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      double ratio = y[r] / x[r];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      top = std::max(top, y[r]);
    }
    if (hi - lo < tol * std::max(1.0, hi)) return 0.5 * (lo + hi) - 1.0;
    for (std::size_t r = 0; r < n; ++r) x[r] = y[r] / top;
  }
  throw Error(ErrorKind::NumericalTolerance, "power iteration did not converge");
}

const char* to_string(StratumKind k) {
  switch (k) {
    case StratumKind::EG: return "EG";
    case StratumKind::NEG: return "NEG";
    case StratumKind::ZERO: return "ZERO";
    case StratumKind::FIXED: return "FIXED";
  }
  return "?";
}

EdgeSet Filtration::subgraph(std::size_t i) const {
  EdgeSet out;
  for (std::size_t s = 0; s <= i && s < strata.size(); ++s) out.insert(strata[s].edges.begin(), strata[s].edges.end());
  return out;
}

std::size_t Filtration::stratum_of(EdgeId e) const {
  for (std::size_t s = 0; s < strata.size(); ++s) {
    if (std::find(strata[s].edges.begin(), strata[s].edges.end(), e) != strata[s].edges.end()) return s;
  }
  invalid_input("edge not in any stratum");
}

namespace {

std::vector<std::vector<EdgeId>> dependency_lists(const GraphMap& f) {
  const std::size_t n = f.source().num_edges();
  std::vector<std::vector<EdgeId>> deps(n);
  for (EdgeId e = 0; e < n; ++e) {
    for (Letter l : f.image(e)) deps[e].push_back(edge_of(l));
    std::sort(deps[e].begin(), deps[e].end());
    deps[e].erase(std::unique(deps[e].begin(), deps[e].end()), deps[e].end());
  }
  return deps;
}

// Tarjan; returns component id per edge.
std::vector<std::size_t> scc(const std::vector<std::vector<EdgeId>>& deps, std::size_t& count) {
  const std::size_t n = deps.size();
  std::vector<long> index(n, -1), low(n, 0);
  std::vector<bool> on(n, false);
  std::vector<EdgeId> stack;
  std::vector<std::size_t> comp(n, 0);
  long counter = 0;
  count = 0;
  std::function<void(EdgeId)> visit = [&](EdgeId v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on[v] = true;
    for (EdgeId w : deps[v]) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      EdgeId w;
      do {
        w = stack.back();
        stack.pop_back();
        on[w] = false;
        comp[w] = count;
      } while (w != v);
      ++count;
    }
  };
  for (EdgeId v = 0; v < n; ++v) {
    if (index[v] < 0) visit(v);
  }
  return comp;
}

}  // namespace

Filtration strata(const GraphMap& f) {
  if (!f.is_endomorphism()) invalid_input("strata needs an endomorphism");
  const std::size_t n = f.source().num_edges();
  auto deps = dependency_lists(f);
  std::size_t count = 0;
  auto comp = scc(deps, count);
  std::vector<std::vector<EdgeId>> members(count);
  for (EdgeId e = 0; e < n; ++e) members[comp[e]].push_back(e);

  Filtration out;
  std::vector<bool> placed(count, false);
  Stratum fixed;
  fixed.kind = StratumKind::FIXED;
  fixed.pf = 1.0;
  for (std::size_t c = 0; c < count; ++c) {
    if (members[c].size() == 1 && f.image(members[c][0]) == Word{forward(members[c][0])}) {
      fixed.edges.push_back(members[c][0]);
      placed[c] = true;
    }
  }
  if (!fixed.edges.empty()) {
    std::sort(fixed.edges.begin(), fixed.edges.end());
    out.strata.push_back(fixed);
  }
  // Condensation order: a component comes after everything its images cross.
  std::vector<std::set<std::size_t>> needs(count);
  for (EdgeId e = 0; e < n; ++e) {
    for (EdgeId d : deps[e]) {
      if (comp[d] != comp[e] && !placed[comp[d]]) needs[comp[e]].insert(comp[d]);
    }
  }
  TransitionMatrix full = transition_matrix(f);
  auto key = [&](std::size_t c) { return members[c].front(); };
  std::size_t remaining = 0;
  for (std::size_t c = 0; c < count; ++c) remaining += placed[c] ? 0 : 1;
  while (remaining > 0) {
    std::size_t pick = count;
    for (std::size_t c = 0; c < count; ++c) {
      if (placed[c]) continue;
      bool ready = std::all_of(needs[c].begin(), needs[c].end(), [&](std::size_t d) { return placed[d]; });
      if (ready && (pick == count || key(c) < key(pick))) pick = c;
    }
    placed[pick] = true;
    --remaining;
    Stratum s;
    s.edges = members[pick];
    TransitionMatrix b = full.block(s.edges);
    bool zero = true;
    for (std::size_t r = 0; r < b.size(); ++r) {
      for (std::size_t c = 0; c < b.size(); ++c) zero = zero && b.at(r, c) == 0;
    }
    if (zero) {
      s.kind = StratumKind::ZERO;
      s.pf = 0.0;
    } else {
      s.pf = pf_eigenvalue(b);
      if (s.pf > kEgThreshold) {
        s.kind = StratumKind::EG;
      } else {
        bool ident = std::all_of(s.edges.begin(), s.edges.end(),
                                 [&](EdgeId e) { return f.image(e) == Word{forward(e)}; });
        s.kind = ident ? StratumKind::FIXED : StratumKind::NEG;
      }
    }
    out.strata.push_back(std::move(s));
  }
  return out;
}

bool is_nielsen(const GraphMap& f, const EdgePath& p) {
  if (!f.is_endomorphism()) invalid_input("is_nielsen needs an endomorphism");
  check_path(f.source(), p);
  Vertex a = p.start, b = p.end(f.source());
  if (f.vertex_map()[a] != a || f.vertex_map()[b] != b) invalid_input("path endpoints are not fixed");
  return map_path(f, p).letters == free_reduce(p.letters);
}

bool is_invariant_subgraph(const GraphMap& f, const EdgeSet& h) {
  for (EdgeId e : h) {
    for (Letter l : f.image(e)) {
      if (!h.count(edge_of(l))) return false;
    }
  }
  return true;
}

EdgeSet invariant_closure(const GraphMap& f, const EdgeSet& seed) {
  EdgeSet out = seed;
  std::vector<EdgeId> work(seed.begin(), seed.end());
  while (!work.empty()) {
    EdgeId e = work.back();
    work.pop_back();
    for (Letter l : f.image(e)) {
      if (out.insert(edge_of(l)).second) work.push_back(edge_of(l));
    }
  }
  return out;
}

OuterResult outer_equal(const GraphMap& f, const GraphMap& g, std::size_t budget) {
  return outer_equal(f.to_free_map(), g.to_free_map(), budget);
}

GraphMap invert_automorphism(const GraphMap& f) {
  return GraphMap::from_free_map(f.source_ptr(), invert(f.to_free_map()));
}

}  // namespace freesplit
