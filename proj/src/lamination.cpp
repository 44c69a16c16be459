#include "freesplit/lamination.hpp"

#include <algorithm>
#include <cmath>

#include "freesplit/error.hpp"

namespace freesplit {

void AttractionParams::validate() const {
  if (segment_length < 1) invalid_input("segment length must be at least 1");
  if (stability < 1) invalid_input("stability margin must be at least 1");
  if (forward_horizon < stability || backward_horizon < stability) {
    invalid_input("horizons must be at least the stability margin");
  }
}

Word LaminationApprox::defining_segment(std::size_t length) const {
  const Word& d = deepest().letters;
  if (d.size() <= length) return d;
  const std::size_t mid = d.size() / 2;
  std::size_t best = d.size();
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (edge_of(d[i]) != seed) continue;
    std::size_t dist = i > mid ? i - mid : mid - i;
    std::size_t best_dist = best > mid ? best - mid : mid - best;
    if (best == d.size() || dist < best_dist) best = i;
  }
  if (best == d.size()) best = mid;
  std::size_t start = best > length / 2 ? best - length / 2 : 0;
  start = std::min(start, d.size() - length);
  return Word(d.begin() + static_cast<std::ptrdiff_t>(start),
              d.begin() + static_cast<std::ptrdiff_t>(start + length));
}

Word LaminationApprox::rose_segment(std::size_t k) const { return marked.to_rose(segments.at(k).letters); }

EdgePath leaf_segment(const GraphMap& f, EdgeId e, unsigned k, std::size_t cap) {
  if (e >= f.source().num_edges()) invalid_input("edge outside the graph");
  return iterate(f, make_path(f.source(), {forward(e)}), k, cap);
}

LaminationApprox lamination_approx(const MarkedGraph& g, const GraphMap& f, std::size_t stratum,
                                   const LaminationOptions& opts) {
  if (!(g.graph() == f.source()) || !f.is_endomorphism()) invalid_input("map does not act on the marked graph");
  Filtration filt = strata(f);
  if (stratum >= filt.strata.size()) invalid_input("stratum index out of range");
  if (filt.strata[stratum].kind != StratumKind::EG) invalid_input("stratum is not EG");
  LaminationApprox lam{g, f, stratum, filt.strata[stratum].edges, 0, {}, 0};
  lam.seed = *std::min_element(lam.stratum_edges.begin(), lam.stratum_edges.end());
  lam.segments.push_back(make_path(f.source(), {forward(lam.seed)}));
  for (std::size_t k = 1; k <= opts.max_depth; ++k) {
    lam.segments.push_back(iterate(f, lam.segments.back(), 1, opts.length_cap));
    std::size_t len = lam.segments.back().length();
    if (len > opts.max_length) break;
    if (k >= opts.min_depth && len >= opts.min_length) break;
  }
  return lam;
}

std::vector<LaminationApprox> all_laminations(const MarkedGraph& g, const GraphMap& f, const LaminationOptions& opts) {
  std::vector<LaminationApprox> out;
  Filtration filt = strata(f);
  for (std::size_t i = 0; i < filt.strata.size(); ++i) {
    if (filt.strata[i].kind == StratumKind::EG) out.push_back(lamination_approx(g, f, i, opts));
  }
  return out;
}

bool contains_segment(const CyclicWord& c, const Word& segment) {
  if (c.empty()) return segment.empty();
  return cyclic_contains(c.letters(), segment) || cyclic_contains(c.letters(), inverse(segment));
}

Attraction weakly_attracted(const GraphMap& f, const CyclicWord& c, const LaminationApprox& lam,
                            const AttractionParams& params, std::size_t cap) {
  params.validate();
  const Word seg = lam.defining_segment(params.segment_length);
  CyclicWord cur = c;
  unsigned run = 0;
  for (unsigned j = 0; j <= params.forward_horizon + params.stability; ++j) {
    if (contains_segment(cur, seg)) {
      if (++run == params.stability + 1) return {true, j - params.stability};
    } else {
      run = 0;
      if (j >= params.forward_horizon) break;
    }
    if (j < params.forward_horizon + params.stability) cur = iterate(f, cur, 1, cap);
  }
  return {};
}

namespace {

constexpr std::size_t kWindow = 2000;

// Closed subloops of the central part of a leaf segment: the stretches
// between consecutive occurrences of the seed edge, read in the rose.
std::vector<CyclicWord> subloops(const LaminationApprox& lam, std::size_t depth) {
  const Word& w = lam.segments.at(depth).letters;
  std::size_t start = w.size() > kWindow ? (w.size() - kWindow) / 2 : 0;
  std::size_t stop = std::min(w.size(), start + kWindow);
  std::vector<std::size_t> at;
  for (std::size_t i = start; i < stop; ++i) {
    if (w[i] == forward(lam.seed)) at.push_back(i);
  }
  std::vector<CyclicWord> out;
  for (std::size_t k = 0; k + 1 < at.size(); ++k) {
    Word loop(w.begin() + static_cast<std::ptrdiff_t>(at[k]), w.begin() + static_cast<std::ptrdiff_t>(at[k + 1]));
    CyclicWord c = lam.marked.class_to_rose(CyclicWord::from_word(loop));
    if (!c.empty() && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
  }
  return out;
}

bool same_verdict(const FillsVerdict& a, const FillsVerdict& b) {
  if (a.kind != b.kind || a.kind == FillsKind::Unknown) return false;
  return a.kind == FillsKind::Fills || a.witness == b.witness;
}

EdgeSet all_edges(const Graph& g) {
  EdgeSet out;
  for (EdgeId e = 0; e < g.num_edges(); ++e) out.insert(e);
  return out;
}

FillsVerdict closure_verdict(const LaminationApprox& lam, const EdgeSet& closure) {
  FillsVerdict v;
  v.kind = FillsKind::ProperFactor;
  v.witness = subgraph_system(lam.marked, closure);
  v.reason = "carried by a proper invariant subgraph";
  return v;
}

// Verdict of fills() on the subloops, accepted once two consecutive depths
// agree.
FillsVerdict stabilize(const std::vector<LaminationApprox*>& lams, const WhiteheadBudget& budget,
                       std::size_t& stable_depth) {
  std::size_t depth = lams.front()->depth();
  for (auto* l : lams) depth = std::min(depth, l->depth());
  const std::size_t rank = lams.front()->marked.rank();
  FillsVerdict prev;
  for (std::size_t d = 1; d <= depth; ++d) {
    std::vector<CyclicWord> classes;
    for (auto* l : lams) {
      auto more = subloops(*l, d);
      classes.insert(classes.end(), more.begin(), more.end());
    }
    FillsVerdict cur;
    if (classes.empty()) {
      cur.reason = "no closed subloop at depth " + std::to_string(d);
    } else {
      cur = fills(classes, rank, budget);
    }
    if (d >= 2 && same_verdict(prev, cur)) {
      stable_depth = d;
      return cur;
    }
    prev = std::move(cur);
  }
  FillsVerdict v;
  v.reason = "verdict did not stabilize within " + std::to_string(depth) + " depths";
  v.graph_summary = prev.graph_summary;
  return v;
}

}  // namespace

FillsVerdict lamination_fills(LaminationApprox& lam, const WhiteheadBudget& budget) {
  lam.stabilization_depth = 0;
  if (lam.segments.size() < 2) {
    FillsVerdict v;
    v.reason = "a single depth cannot stabilize";
    return v;
  }
  EdgeSet closure = invariant_closure(lam.map, EdgeSet(lam.stratum_edges.begin(), lam.stratum_edges.end()));
  if (closure != all_edges(lam.map.source())) {
    lam.stabilization_depth = 1;
    return closure_verdict(lam, closure);
  }
  if (lam.marked.rank() == 2) {
    // Proper free factors of F_2 are cyclic and carry no EG lamination.
    lam.stabilization_depth = 1;
    FillsVerdict v;
    v.kind = FillsKind::Fills;
    v.reason = "EG lamination in rank 2";
    return v;
  }
  return stabilize({&lam}, budget, lam.stabilization_depth);
}

FillsVerdict laminations_jointly_fill(std::vector<LaminationApprox>& lams, const WhiteheadBudget& budget) {
  if (lams.empty()) invalid_input("no laminations");
  EdgeSet closure;
  for (auto& l : lams) {
    EdgeSet c = invariant_closure(l.map, EdgeSet(l.stratum_edges.begin(), l.stratum_edges.end()));
    closure.insert(c.begin(), c.end());
  }
  for (auto& l : lams) l.stabilization_depth = 0;
  if (closure != all_edges(lams.front().map.source())) {
    for (auto& l : lams) l.stabilization_depth = 1;
    return closure_verdict(lams.front(), closure);
  }
  if (lams.front().marked.rank() == 2) {
    for (auto& l : lams) l.stabilization_depth = 1;
    FillsVerdict v;
    v.kind = FillsKind::Fills;
    v.reason = "EG lamination in rank 2";
    return v;
  }
  std::vector<LaminationApprox*> ptrs;
  for (auto& l : lams) {
    if (l.segments.size() < 2) {
      FillsVerdict v;
      v.reason = "a single depth cannot stabilize";
      return v;
    }
    ptrs.push_back(&l);
  }
  std::size_t depth = 0;
  FillsVerdict v = stabilize(ptrs, budget, depth);
  for (auto& l : lams) l.stabilization_depth = depth;
  return v;
}

double pf_estimate(const GraphMap& g, const LaminationApprox& lam, std::size_t depth) {
  if (!(g.source() == lam.map.source()) || !g.is_endomorphism()) invalid_input("map does not act on the lamination graph");
  const EdgePath& sigma = lam.segments.at(depth);
  EdgeSet stratum(lam.stratum_edges.begin(), lam.stratum_edges.end());
  auto crossings = [&](const Word& w) {
    std::size_t n = 0;
    for (Letter l : w) n += stratum.count(edge_of(l));
    return n;
  };
  std::size_t before = crossings(sigma.letters);
  if (before == 0) invalid_input("segment does not cross the stratum");
  std::size_t after = crossings(map_path(g, sigma).letters);
  return std::log(static_cast<double>(after) / static_cast<double>(before));
}

}  // namespace freesplit
