#include "freesplit/whitehead.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "freesplit/error.hpp"

namespace freesplit {

void WhiteheadGraph::add_edge(Letter a, Letter b) {
  ++weight_[a * num_vertices() + b];
  if (a != b) ++weight_[b * num_vertices() + a];
}

void WhiteheadGraph::add_turn(Letter u, Letter v) { add_edge(u, inv(v)); }

long long WhiteheadGraph::degree(Letter u) const {
  long long d = 0;
  for (Letter v = 0; v < num_vertices(); ++v) d += weight(u, v);
  return d;
}

long long WhiteheadGraph::num_edges() const {
  long long twice = 0;
  for (Letter u = 0; u < num_vertices(); ++u) {
    for (Letter v = 0; v < num_vertices(); ++v) twice += u == v ? 2 * weight(u, v) : weight(u, v);
  }
  return twice / 2;
}

std::vector<std::size_t> WhiteheadGraph::components() const {
  const std::size_t nv = num_vertices();
  std::vector<std::size_t> comp(nv, std::numeric_limits<std::size_t>::max());
  std::size_t next = 0;
  for (Letter s = 0; s < nv; ++s) {
    if (comp[s] != std::numeric_limits<std::size_t>::max()) continue;
    comp[s] = next;
    std::deque<Letter> q{s};
    while (!q.empty()) {
      Letter u = q.front();
      q.pop_front();
      for (Letter v = 0; v < nv; ++v) {
        if (weight(u, v) > 0 && comp[v] == std::numeric_limits<std::size_t>::max()) {
          comp[v] = next;
          q.push_back(v);
        }
      }
    }
    ++next;
  }
  return comp;
}

bool WhiteheadGraph::connected() const {
  auto c = components();
  return std::all_of(c.begin(), c.end(), [](std::size_t x) { return x == 0; });
}

std::size_t WhiteheadGraph::cut_vertex_count() const {
  const std::size_t nv = num_vertices();
  if (nv < 3) return 0;
  std::size_t count = 0;
  for (Letter cut = 0; cut < nv; ++cut) {
    std::vector<bool> seen(nv, false);
    seen[cut] = true;
    Letter start = cut == 0 ? 1 : 0;
    seen[start] = true;
    std::deque<Letter> q{start};
    std::size_t reached = 1;
    while (!q.empty()) {
      Letter u = q.front();
      q.pop_front();
      for (Letter v = 0; v < nv; ++v) {
        if (!seen[v] && weight(u, v) > 0) {
          seen[v] = true;
          ++reached;
          q.push_back(v);
        }
      }
    }
    if (reached != nv - 1) ++count;
  }
  return count;
}

bool WhiteheadGraph::has_cut_vertex() const { return cut_vertex_count() > 0; }

std::string WhiteheadGraph::summary() const {
  auto c = components();
  std::size_t k = c.empty() ? 0 : *std::max_element(c.begin(), c.end()) + 1;
  std::ostringstream out;
  out << "vertices=" << num_vertices() << " edges=" << num_edges() << " components=" << k
      << " cut_vertex=" << (k == 1 && has_cut_vertex() ? "yes" : "no");
  return out.str();
}

WhiteheadGraph whitehead_graph(const std::vector<CyclicWord>& classes, std::size_t rank) {
  WhiteheadGraph g(rank);
  for (const auto& c : classes) {
    const Word& w = c.letters();
    for (std::size_t i = 0; i < w.size(); ++i) g.add_turn(w[i], w[(i + 1) % w.size()]);
  }
  return g;
}

WhiteheadGraph turn_graph(const std::vector<Word>& words, std::size_t rank) {
  WhiteheadGraph g(rank);
  for (const auto& w : words) {
    for (std::size_t i = 0; i + 1 < w.size(); ++i) g.add_turn(w[i], w[i + 1]);
  }
  return g;
}

FreeMap move_automorphism(std::size_t rank, const WhiteheadMove& m) {
  return whitehead_automorphism(rank, m.multiplier, m.cut);
}

WhiteheadMove inverse_move(const WhiteheadMove& m) {
  WhiteheadMove out = m;
  out.cut[m.multiplier] = false;
  out.cut[inv(m.multiplier)] = true;
  out.multiplier = inv(m.multiplier);
  return out;
}

MinCut min_cut(const WhiteheadGraph& g, Letter a) {
  const std::size_t nv = g.num_vertices();
  const Letter sink = inv(a);
  std::vector<long long> residual(nv * nv);
  for (Letter u = 0; u < nv; ++u) {
    for (Letter v = 0; v < nv; ++v) residual[u * nv + v] = u == v ? 0 : g.weight(u, v);
  }
  long long flow = 0;
  std::vector<std::int64_t> parent(nv);
  auto reach = [&]() {
    std::fill(parent.begin(), parent.end(), -1);
    parent[a] = a;
    std::deque<Letter> q{a};
    while (!q.empty()) {
      Letter u = q.front();
      q.pop_front();
      for (Letter v = 0; v < nv; ++v) {
        if (parent[v] < 0 && residual[u * nv + v] > 0) {
          parent[v] = u;
          q.push_back(v);
        }
      }
    }
  };
  for (;;) {
    reach();
    if (parent[sink] < 0) break;
    long long bottleneck = std::numeric_limits<long long>::max();
    for (Letter v = sink; v != a; v = static_cast<Letter>(parent[v])) {
      bottleneck = std::min(bottleneck, residual[static_cast<std::size_t>(parent[v]) * nv + v]);
    }
    for (Letter v = sink; v != a; v = static_cast<Letter>(parent[v])) {
      Letter u = static_cast<Letter>(parent[v]);
      residual[u * nv + v] -= bottleneck;
      residual[v * nv + u] += bottleneck;
    }
    flow += bottleneck;
  }
  MinCut out;
  out.capacity = flow;
  out.move.multiplier = a;
  out.move.cut.assign(nv, false);
  for (Letter v = 0; v < nv; ++v) out.move.cut[v] = parent[v] >= 0;
  return out;
}

namespace {

std::size_t total_length(const std::vector<CyclicWord>& cs) {
  std::size_t s = 0;
  for (const auto& c : cs) s += c.length();
  return s;
}

std::vector<CyclicWord> apply_all(const FreeMap& f, const std::vector<CyclicWord>& cs) {
  std::vector<CyclicWord> out;
  out.reserve(cs.size());
  for (const auto& c : cs) out.push_back(f.apply(c));
  return out;
}

}  // namespace

Minimized whitehead_minimize(const std::vector<CyclicWord>& classes, std::size_t rank, const WhiteheadBudget& budget) {
  Minimized m;
  m.classes = classes;
  m.total_length = total_length(classes);
  m.automorphism = FreeMap::identity(rank);
  m.inverse = FreeMap::identity(rank);
  if (m.total_length > budget.max_letters) budget_exhausted("input exceeds the letter budget");
  for (;;) {
    WhiteheadGraph g = whitehead_graph(m.classes, rank);
    long long best_gain = 0;
    MinCut best;
    for (Letter a = 0; a < 2 * rank; ++a) {
      long long deg = g.degree(a);
      if (deg == 0) continue;
      MinCut mc = min_cut(g, a);
      if (deg - mc.capacity > best_gain) {
        best_gain = deg - mc.capacity;
        best = mc;
      }
    }
    if (best_gain == 0) break;
    if (m.moves.size() >= budget.max_moves) budget_exhausted("Whitehead move budget exhausted");
    FreeMap step = move_automorphism(rank, best.move);
    auto next = apply_all(step, m.classes);
    std::size_t len = total_length(next);
    if (len + static_cast<std::size_t>(best_gain) != m.total_length) {
      throw std::logic_error("Whitehead move changed length by an unexpected amount");
    }
    m.classes = std::move(next);
    m.total_length = len;
    m.automorphism = compose(step, m.automorphism);
    m.inverse = compose(m.inverse, move_automorphism(rank, inverse_move(best.move)));
    m.moves.push_back(std::move(best.move));
  }
  return m;
}

const char* to_string(FillsKind k) {
  switch (k) {
    case FillsKind::Fills:
      return "Fills";
    case FillsKind::ProperFactor:
      return "ProperFactor";
    case FillsKind::Unknown:
      return "Unknown";
  }
  return "?";
}

namespace {

struct Unresolved {
  std::string reason;
};

Word to_ambient(const std::vector<Word>& basis, std::span<const Letter> w) {
  Word out;
  for (Letter l : w) {
    if (is_barred(l)) {
      append_inverse_reduced(out, basis[edge_of(l)]);
    } else {
      append_reduced(out, basis[edge_of(l)]);
    }
  }
  return out;
}

// Appends one generator list per component of the support of `classes`,
// which are written in the free basis `basis` (ambient words).
void support_rec(const std::vector<Word>& basis, const std::vector<CyclicWord>& classes, const WhiteheadBudget& budget,
                 std::size_t& moves_used, std::vector<std::vector<Word>>& out, Minimized* top) {
  const std::size_t r = basis.size();
  WhiteheadBudget local = budget;
  local.max_moves = budget.max_moves - std::min(budget.max_moves, moves_used);
  Minimized m = whitehead_minimize(classes, r, local);
  moves_used += m.moves.size();
  WhiteheadGraph g = whitehead_graph(m.classes, r);
  auto comp = g.components();
  std::map<std::size_t, std::vector<std::uint32_t>> used;  // component -> generators
  for (std::uint32_t i = 0; i < r; ++i) {
    if (g.degree(forward(i)) == 0) continue;
    if (comp[forward(i)] != comp[barred(i)]) {
      throw Unresolved{"minimized Whitehead graph separates a letter from its inverse"};
    }
    used[comp[forward(i)]].push_back(i);
  }
  if (top) *top = m;
  if (used.size() == 1 && used.begin()->second.size() == r) {
    if (g.has_cut_vertex()) throw Unresolved{"cut vertex in a minimized Whitehead graph"};
    out.push_back(basis);
    return;
  }
  for (const auto& [id, gens] : used) {
    std::vector<Word> sub_basis;
    std::vector<Letter> local_letter(2 * r, 0);
    for (std::size_t k = 0; k < gens.size(); ++k) {
      sub_basis.push_back(to_ambient(basis, m.inverse.image(gens[k])));
      local_letter[forward(gens[k])] = forward(static_cast<std::uint32_t>(k));
      local_letter[barred(gens[k])] = barred(static_cast<std::uint32_t>(k));
    }
    std::vector<CyclicWord> sub_classes;
    for (const auto& c : m.classes) {
      if (comp[c.letters().front()] != id) continue;
      Word w;
      for (Letter l : c.letters()) w.push_back(local_letter[l]);
      sub_classes.push_back(CyclicWord::from_word(w));
    }
    support_rec(sub_basis, sub_classes, budget, moves_used, out, nullptr);
  }
}

}  // namespace

SupportResult free_factor_support(const std::vector<CyclicWord>& classes, std::size_t rank,
                                  const WhiteheadBudget& budget) {
  if (classes.empty()) invalid_input("free factor support of an empty set");
  std::vector<CyclicWord> nontrivial;
  for (const auto& c : classes) {
    for (Letter l : c.letters()) {
      if (edge_of(l) >= rank) invalid_input("class uses a letter outside the rank");
    }
    if (c.empty()) invalid_input("trivial conjugacy class");
    nontrivial.push_back(c);
  }
  std::vector<Word> basis;
  for (std::uint32_t i = 0; i < rank; ++i) basis.push_back({forward(i)});
  SupportResult res;
  std::vector<std::vector<Word>> comps;
  std::size_t moves_used = 0;
  try {
    support_rec(basis, nontrivial, budget, moves_used, comps, &res.top);
  } catch (const Unresolved& u) {
    res.reason = u.reason;
    return res;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BudgetExhausted) throw;
    res.reason = e.what();
    return res;
  }
  res.known = true;
  res.support = FreeFactorSystem::from_generators(rank, comps);
  return res;
}

FillsVerdict fills(const std::vector<CyclicWord>& classes, std::size_t rank, const WhiteheadBudget& budget) {
  SupportResult s = free_factor_support(classes, rank, budget);
  FillsVerdict v;
  v.minimized = s.top.classes;
  v.total_length = s.top.total_length;
  v.moves = s.top.moves;
  if (!s.top.classes.empty()) v.graph_summary = whitehead_graph(s.top.classes, rank).summary();
  if (!s.known) {
    v.kind = FillsKind::Unknown;
    v.reason = s.reason;
    return v;
  }
  auto ranks = s.support.ranks();
  if (ranks.size() == 1 && ranks[0] == rank) {
    v.kind = FillsKind::Fills;
  } else {
    v.kind = FillsKind::ProperFactor;
    v.witness = s.support;
  }
  return v;
}

}  // namespace freesplit
