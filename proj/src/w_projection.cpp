#include "freesplit/w_projection.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_map>

#include "freesplit/error.hpp"

namespace freesplit {

namespace {

Word central(const Word& w, std::size_t length) {
  if (w.size() <= length) return w;
  std::size_t start = (w.size() - length) / 2;
  return Word(w.begin() + static_cast<std::ptrdiff_t>(start),
              w.begin() + static_cast<std::ptrdiff_t>(start + length));
}

// Runs fn(i) for i < n on a few threads; results land by index.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, Fn fn) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(n, 1));
  auto run = [&](std::size_t first) {
    for (std::size_t i = first; i < n; i += workers) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(run, t);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

Word power_apply(const FreeMap& f, Word w, int k) {
  for (int i = 0; i < k; ++i) w = free_reduce(f.apply(w));
  return w;
}

// Short classes of the system plus the basis elements of each component and
// their products in pairs.
std::vector<CyclicWord> w_candidates(const FreeFactorSystem& ffs, std::size_t length) {
  std::set<CyclicWord> out;
  for (auto& c : candidate_classes(ffs, length)) out.insert(c);
  for (const auto& comp : ffs.components()) {
    auto basis = comp.basis();
    for (std::size_t i = 0; i < basis.size(); ++i) {
      out.insert(CyclicWord::from_word(basis[i]));
      for (std::size_t j = i + 1; j < basis.size(); ++j) {
        Word ab = basis[i];
        ab.insert(ab.end(), basis[j].begin(), basis[j].end());
        out.insert(CyclicWord::from_word(ab));
        Word abar = basis[i];
        Word inv_b = inverse(basis[j]);
        abar.insert(abar.end(), inv_b.begin(), inv_b.end());
        out.insert(CyclicWord::from_word(abar));
      }
    }
  }
  out.erase(CyclicWord{});
  return {out.begin(), out.end()};
}

std::optional<long long> common_difference(const std::vector<DivergenceRow>& rows) {
  if (rows.size() < 2) return std::nullopt;
  for (const auto& r : rows) {
    if (!r.value) return std::nullopt;
  }
  long long d = *rows[1].value - *rows[0].value;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (*rows[i].value - *rows[i - 1].value != d) return std::nullopt;
  }
  return d;
}

}  // namespace

struct WCache {
  std::mutex lock;
  std::unordered_map<CyclicWord, WResult, CyclicWordHash> values;
};

FreeMap rose_automorphism(const MarkedGraph& g, const GraphMap& f) {
  if (!(f.source() == g.graph()) || !f.is_endomorphism()) invalid_input("map does not act on the marked graph");
  TreeBasis tb = tree_basis(g.graph(), g.base());
  const Word& to_image = tb.to_vertex[f.vertex_map()[g.base()]];
  std::vector<Word> images;
  for (const auto& loop : g.marking()) {
    Word path = to_image;
    Word img = map_path(f, EdgePath{g.base(), loop}).letters;
    path.insert(path.end(), img.begin(), img.end());
    Word back = inverse(to_image);
    path.insert(path.end(), back.begin(), back.end());
    images.push_back(free_reduce(g.to_rose(free_reduce(path))));
  }
  return FreeMap(images);
}

const CyclicWord& ClassOrbit::at(int i) {
  auto it = at_.find(i);
  if (it != at_.end()) return it->second;
  const CyclicWord& prev = at(i > 0 ? i - 1 : i + 1);
  CyclicWord next = i > 0 ? ctx_->forward(prev) : ctx_->backward(prev);
  if (next.length() > ctx_->params().length_cap) budget_exhausted("orbit exceeds the length cap");
  return at_.emplace(i, std::move(next)).first->second;
}

CyclicWord WContext::forward(const CyclicWord& c) const { return iterate(forward_map_, c, 1, params_.length_cap); }
CyclicWord WContext::backward(const CyclicWord& c) const { return iterate(backward_map_, c, 1, params_.length_cap); }

WContext build_context(const MarkedGraph& g, const GraphMap& f, const std::optional<GraphMap>& inverse_map,
                       const WParams& params) {
  params.attraction.validate();
  WContext ctx;
  ctx.params_ = params;
  ctx.cache_ = std::make_shared<WCache>();
  ctx.marked_ = std::make_shared<const MarkedGraph>(g);
  ctx.phi_ = rose_automorphism(g, f);
  const std::size_t n = g.rank();
  MarkedGraph rose = MarkedGraph::standard_rose(g.basis_names());
  ctx.rose_ = rose.graph_ptr();
  ctx.forward_map_ = GraphMap::from_free_map(ctx.rose_, ctx.phi_);
  if (inverse_map) {
    ctx.phi_inv_ = rose_automorphism(g, *inverse_map);
    auto check = outer_equal(compose(ctx.phi_, ctx.phi_inv_), FreeMap::identity(n));
    if (check.verdict != OuterVerdict::Equal) invalid_input("supplied inverse does not invert the map");
  } else {
    ctx.phi_inv_ = invert_automorphism(ctx.forward_map_).to_free_map();
  }
  ctx.backward_map_ = GraphMap::from_free_map(ctx.rose_, ctx.phi_inv_);

  for (auto& lam : all_laminations(g, f, params.lamination)) {
    if (lamination_fills(lam).kind == FillsKind::Fills) {
      ctx.plus_ = std::make_shared<LaminationApprox>(std::move(lam));
      break;
    }
  }
  if (!ctx.plus_) invalid_input("no lamination of the map is certified to fill");

  auto minus = all_laminations(rose, ctx.backward_map_, params.lamination);
  if (minus.empty()) invalid_input("inverse has no EG stratum");
  EdgeSet all;
  for (EdgeId e = 0; e < ctx.rose_->num_edges(); ++e) all.insert(e);
  std::size_t pick = minus.size() - 1;
  for (std::size_t i = minus.size(); i-- > 0;) {
    const auto& l = minus[i];
    if (invariant_closure(l.map, EdgeSet(l.stratum_edges.begin(), l.stratum_edges.end())) == all) {
      pick = i;
      break;
    }
  }
  ctx.minus_ = std::make_shared<LaminationApprox>(std::move(minus[pick]));

  const std::size_t L = params.attraction.segment_length;
  ctx.seg_plus_ = central(ctx.plus_->rose_segment(ctx.plus_->depth()), L);
  ctx.seg_minus_ = central(ctx.minus_->deepest().letters, L);
  if (ctx.seg_plus_.size() < L || ctx.seg_minus_.size() < L) {
    budget_exhausted("lamination segments shorter than the defining length");
  }
  return ctx;
}

bool in_U(const WContext& ctx, const CyclicWord& c, Side side) {
  return contains_segment(c, side == Side::Plus ? ctx.segment_plus() : ctx.segment_minus());
}

WResult w_of(const WContext& ctx, ClassOrbit& orbit) {
  const auto& p = ctx.params().attraction;
  const int s = static_cast<int>(p.stability);
  WResult r;
  if (orbit.at(0).empty()) {
    r.reason = "trivial class";
    return r;
  }
  int run = 0, top = 1;
  bool found = false;
  for (int i = 0; i >= -static_cast<int>(p.backward_horizon) - s; --i) {
    if (in_U(ctx, orbit.at(i), Side::Minus)) {
      if (run++ == 0) top = i;
      if (run == s + 1) {
        found = true;
        break;
      }
    } else {
      run = 0;
    }
  }
  if (!found) {
    r.reason = "never settles in U- within the backward horizon";
    return r;
  }
  int miss = top + 1;
  if (top == 0) {
    miss = 0;
    for (int i = 1; i <= static_cast<int>(p.forward_horizon); ++i) {
      if (!in_U(ctx, orbit.at(i), Side::Minus)) {
        miss = i;
        break;
      }
    }
    if (miss == 0) {
      r.reason = "stays in U- under forward iteration";
      return r;
    }
  }
  r.defined = true;
  r.run_top = top;
  r.first_miss = miss;
  r.value = 1 - miss;
  if (auto m = ctx.m_hat()) {
    bool ok = true;
    const long long start = -r.value + *m;
    for (long long i = start; i <= start + s && ok; ++i) ok = in_U(ctx, orbit.at(static_cast<int>(i)), Side::Plus);
    r.forward_ok = ok;
  }
  return r;
}

WResult w_of(const WContext& ctx, const CyclicWord& c) {
  WCache* cache = ctx.cache_.get();
  {
    std::lock_guard<std::mutex> guard(cache->lock);
    auto it = cache->values.find(c);
    if (it != cache->values.end() && (it->second.forward_ok.has_value() || !ctx.m_hat() || !it->second.defined)) {
      return it->second;
    }
  }
  ClassOrbit orbit(ctx, c);
  WResult r = w_of(ctx, orbit);
  std::lock_guard<std::mutex> guard(cache->lock);
  cache->values[c] = r;
  return r;
}

std::optional<long long> forward_lag(const WContext& ctx, ClassOrbit& orbit, const WResult& w) {
  if (!w.defined) return std::nullopt;
  const auto& p = ctx.params().attraction;
  const int start = static_cast<int>(-w.value);
  int run = 0, first = 0;
  for (int i = start; i <= start + static_cast<int>(p.forward_horizon + p.stability); ++i) {
    if (in_U(ctx, orbit.at(i), Side::Plus)) {
      if (run++ == 0) first = i;
      if (run == static_cast<int>(p.stability) + 1) return first - start;
    } else {
      run = 0;
    }
  }
  return std::nullopt;
}

namespace {

WValue minimum(const WContext& ctx, const std::vector<CyclicWord>& cands) {
  std::vector<std::optional<WResult>> results = parallel_map<std::optional<WResult>>(
      cands.size(), [&](std::size_t i) -> std::optional<WResult> {
        try {
          return w_of(ctx, cands[i]);
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::BudgetExhausted) return std::nullopt;
          throw;
        }
      });
  WValue v;
  v.candidates = cands.size();
  bool any = false, exhausted = false;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (!results[i]) {
      exhausted = true;
      continue;
    }
    if (!results[i]->defined) continue;
    ++v.defined;
    if (!any || results[i]->value < v.value) {
      v.value = results[i]->value;
      v.witness = cands[i];
      any = true;
    }
  }
  if (!any) {
    if (exhausted) budget_exhausted("every candidate with a chance of a value ran past the length cap");
    not_applicable("no candidate class has a defined w");
  }
  return v;
}

}  // namespace

WValue W_of_ffs(const WContext& ctx, const FreeFactorSystem& ffs) {
  if (ffs.ambient_rank() != ctx.rank()) invalid_input("system rank differs from the context");
  return minimum(ctx, w_candidates(ffs, ctx.params().candidate_length));
}

WValue W_transported(const WContext& ctx, const FreeFactorSystem& ffs, int m) {
  WValue v = W_of_ffs(ctx, ffs);
  v.value += m;
  v.shift = m;
  if (m > 0) {
    v.witness = CyclicWord::from_word(power_apply(ctx.phi(), v.witness.oriented(), m));
  } else if (m < 0) {
    v.witness = CyclicWord::from_word(power_apply(ctx.phi_inverse(), v.witness.oriented(), -m));
  }
  return v;
}

WValue W_of_splitting(const WContext& ctx, const OneEdgeSplitting& s) { return W_of_ffs(ctx, s.elliptic); }

WValue W_of_splitting(const WContext& ctx, const OneEdgeSplitting& s, int m) {
  // F(S^{phi^m}) = phi^{-m} F(S).
  return W_transported(ctx, s.elliptic, -m);
}

FreeFactorSystem apply_power(const WContext& ctx, const FreeFactorSystem& ffs, int k) {
  std::vector<std::vector<Word>> comps;
  for (const auto& c : ffs.components()) {
    comps.emplace_back();
    for (const auto& b : c.basis()) {
      comps.back().push_back(k >= 0 ? power_apply(ctx.phi(), b, k) : power_apply(ctx.phi_inverse(), b, -k));
    }
  }
  return FreeFactorSystem::from_generators(ffs.ambient_rank(), comps);
}

MEstimate estimate_M(WContext& ctx, const std::vector<FreeFactorSystem>& sample) {
  if (sample.empty()) not_applicable("empty sample");
  MEstimate est;
  std::set<CyclicWord> seen;
  for (const auto& ffs : sample) {
    auto cands = w_candidates(ffs, ctx.params().candidate_length);
    std::vector<long long> values;
    for (const auto& c : cands) {
      WResult r;
      try {
        r = w_of(ctx, c);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::BudgetExhausted) throw;
        continue;
      }
      if (!r.defined) continue;
      values.push_back(r.value);
      if (seen.insert(c).second) {
        ++est.classes;
        ClassOrbit orbit(ctx, c);
        try {
          if (auto lag = forward_lag(ctx, orbit, r)) est.max_lag = std::max(est.max_lag, *lag);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::BudgetExhausted) throw;
        }
      }
    }
    if (values.empty()) continue;
    ++est.systems;
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    est.max_spread = std::max(est.max_spread, *hi - *lo);
  }
  if (est.classes == 0) not_applicable("no class in the sample has a defined w");
  est.m_hat = std::max(est.max_spread, est.max_lag);
  ctx.set_m_hat(est.m_hat);
  return est;
}

DisplacementTable displacement_table(const WContext& ctx, const OneEdgeSplitting& s, int range,
                                     const std::vector<int>& raw_at) {
  if (range < 0) invalid_input("negative range");
  DisplacementTable t;
  WValue base = W_of_splitting(ctx, s);
  t.base = base.value;
  t.witness = base.witness;
  t.slope_exact = true;
  const long long bound = ctx.m_hat().value_or(0);
  for (int m = -range; m <= range; ++m) {
    DisplacementRow row;
    row.m = m;
    row.transported = W_of_splitting(ctx, s, m).value;
    if (row.transported != t.base - m) t.slope_exact = false;
    if (std::find(raw_at.begin(), raw_at.end(), m) != raw_at.end()) {
      try {
        row.raw = W_of_ffs(ctx, apply_power(ctx, s.elliptic, -m)).value;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::BudgetExhausted && e.kind() != ErrorKind::NotApplicable) throw;
      }
      if (!row.raw || std::llabs(*row.raw - row.transported) > bound) t.raw_within_m = false;
    }
    t.rows.push_back(row);
  }
  return t;
}

LipschitzReport lipschitz_check(const WContext& ctx,
                                const std::vector<std::pair<OneEdgeSplitting, OneEdgeSplitting>>& pairs) {
  LipschitzReport rep;
  rep.m_hat = ctx.m_hat().value_or(0);
  const std::vector<std::string>& names = ctx.marked().basis_names();
  for (const auto& [a, b] : pairs) {
    LipschitzRow row;
    row.first = a.elliptic.describe(names);
    row.second = b.elliptic.describe(names);
    if (!equivalent_one_edge(a, b) && !adjacent(a, b).found) {
      row.note = "not adjacent";
      ++rep.skipped;
      rep.rows.push_back(row);
      continue;
    }
    try {
      row.w1 = W_of_splitting(ctx, a).value;
      row.w2 = W_of_splitting(ctx, b).value;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotApplicable && e.kind() != ErrorKind::BudgetExhausted) throw;
      row.note = e.what();
      ++rep.skipped;
      rep.rows.push_back(row);
      continue;
    }
    row.delta = *row.w2 - *row.w1;
    row.within = std::llabs(row.delta) <= 8 * rep.m_hat;
    ++rep.checked;
    if (!row.within) ++rep.violations;
    if (rep.m_hat > 0) {
      rep.max_ratio = std::max(rep.max_ratio, static_cast<double>(std::llabs(row.delta)) / static_cast<double>(rep.m_hat));
    }
    rep.rows.push_back(row);
  }
  return rep;
}

DivergenceReport divergence_check(const WContext& ctx, const FreeMap& psi, const OneEdgeSplitting& t, int first,
                                  int last) {
  if (first < 0 || last < first) invalid_input("exponent range must satisfy 0 <= first <= last");
  if (psi.rank() != ctx.rank()) invalid_input("psi rank differs from the context");
  auto cands = w_candidates(t.elliptic, ctx.params().candidate_length);
  auto table = [&](const FreeMap& f) {
    std::vector<DivergenceRow> rows;
    std::vector<Word> cur;
    for (const auto& c : cands) cur.push_back(c.oriented());
    for (int l = 0; l <= last; ++l) {
      if (l >= first) {
        std::vector<CyclicWord> moved;
        for (const auto& w : cur) moved.push_back(CyclicWord::from_word(w));
        DivergenceRow row{l, std::nullopt};
        try {
          row.value = minimum(ctx, moved).value;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::NotApplicable && e.kind() != ErrorKind::BudgetExhausted) throw;
        }
        rows.push_back(row);
      }
      for (auto& w : cur) w = free_reduce(f.apply(w));
    }
    return rows;
  };
  DivergenceReport rep;
  rep.psi_table = table(psi);
  rep.phi_table = table(ctx.phi());
  bool complete = true;
  long long lo = 0, hi = 0;
  bool any = false;
  for (const auto& r : rep.psi_table) {
    if (!r.value) {
      complete = false;
      continue;
    }
    lo = any ? std::min(lo, *r.value) : *r.value;
    hi = any ? std::max(hi, *r.value) : *r.value;
    any = true;
  }
  rep.psi_band = hi - lo;
  rep.bounded = complete && any && rep.psi_band <= 2 * ctx.m_hat().value_or(0);
  rep.phi_slope = common_difference(rep.phi_table);
  auto psi_slope = common_difference(rep.psi_table);
  // A table with exact nonzero slope escapes every band.
  if (psi_slope && *psi_slope != 0) rep.bounded = false;
  if (!complete) {
    rep.verdict = "Unknown";
  } else {
    rep.verdict = rep.bounded ? "Bounded" : "Unbounded";
  }
  return rep;
}

}  // namespace freesplit
