#include <doctest.h>

#include <cmath>

#include "freesplit/error.hpp"
#include "freesplit/fixtures.hpp"
#include "freesplit/lamination.hpp"
#include "support.hpp"

using namespace freesplit;

namespace {

std::size_t eg_index(const GraphMap& f, std::size_t which = 0) {
  auto filt = strata(f);
  for (std::size_t i = 0; i < filt.strata.size(); ++i) {
    if (filt.strata[i].kind == StratumKind::EG && which-- == 0) return i;
  }
  FAIL("no EG stratum");
  return 0;
}

std::size_t crossings(const Word& w, const std::vector<EdgeId>& edges) {
  std::size_t n = 0;
  for (Letter l : w) n += std::count(edges.begin(), edges.end(), edge_of(l));
  return n;
}

}  // namespace

TEST_CASE("leaf segments of the filling example") {
  auto spec = fixture("filling_reducible");
  const Graph& g = spec.map.source();
  const std::string s = catalog_sigma(3);
  EdgeId b = *g.find_edge("B");
  CHECK(leaf_segment(spec.map, b, 0).letters == Word{forward(b)});
  CHECK(leaf_segment(spec.map, b, 1).letters == g.parse("B " + s + " A " + s + " B' " + s + " B"));
  for (unsigned k = 0; k < 4; ++k) {
    Word shorter = leaf_segment(spec.map, b, k).letters;
    Word longer = leaf_segment(spec.map, b, k + 1).letters;
    REQUIRE(longer.size() > shorter.size());
    CHECK(std::equal(shorter.begin(), shorter.end(), longer.begin()));
  }
}

TEST_CASE("lamination approximation grows and tracks the eigenvalue") {
  auto spec = fixture("filling_reducible");
  std::size_t idx = eg_index(spec.map);
  CHECK_THROWS_AS(lamination_approx(spec.marked, spec.map, 0), Error);
  auto lam = lamination_approx(spec.marked, spec.map, idx);
  CHECK(lam.seed == *spec.map.source().find_edge("A"));
  CHECK(lam.depth() >= 6);
  for (std::size_t k = 0; k + 1 < lam.segments.size(); ++k) {
    CHECK(lam.segments[k + 1].length() > lam.segments[k].length());
  }
  // Ratio of stratum crossings once the segment is long.
  LaminationOptions opts;
  opts.min_length = 80000;
  auto deep = lamination_approx(spec.marked, spec.map, idx, opts);
  std::size_t k = 1;
  while (deep.segments[k].length() < 10000) ++k;
  REQUIRE(k + 1 < deep.segments.size());
  double ratio = static_cast<double>(crossings(deep.segments[k + 1].letters, deep.stratum_edges)) /
                 static_cast<double>(crossings(deep.segments[k].letters, deep.stratum_edges));
  CHECK(std::abs(ratio - (2 + std::sqrt(3.0))) < 0.01 * (2 + std::sqrt(3.0)));
}

TEST_CASE("defining segments are central subwords of the deepest segment") {
  auto spec = fixture("filling_reducible");
  auto lam = lamination_approx(spec.marked, spec.map, eg_index(spec.map));
  Word seg = lam.defining_segment(64);
  CHECK(seg.size() == 64);
  CHECK(contains(lam.deepest().letters, seg));
  CHECK(std::count_if(seg.begin(), seg.end(), [&](Letter l) { return edge_of(l) == lam.seed; }) > 0);
  CHECK(contains_segment(CyclicWord::from_word(inverse(lam.deepest().letters)), seg));
  CHECK(lam.defining_segment(1u << 30) == lam.deepest().letters);
}

TEST_CASE("weak attraction on the filling example") {
  auto spec = fixture("filling_reducible");
  auto lam = lamination_approx(spec.marked, spec.map, eg_index(spec.map));
  const Graph& g = spec.map.source();
  AttractionParams params;
  CyclicWord a = CyclicWord::from_word(g.parse("A"));
  CyclicWord sigma = CyclicWord::from_word(g.parse(catalog_sigma(3)));
  auto att = weakly_attracted(spec.map, a, lam, params);
  CHECK(att.attracted);
  CHECK_FALSE(weakly_attracted(spec.map, sigma, lam, params).attracted);

  // Oracle: iterate the free map directly and look for stable containment.
  Word seg = lam.defining_segment(params.segment_length);
  FreeMap f = spec.map.to_free_map();
  Word cur = g.parse("A");
  std::vector<bool> hits;
  for (int j = 0; j < 8; ++j) {
    Word doubled = oracle::canonical_cyclic(cur);
    Word twice = doubled;
    twice.insert(twice.end(), doubled.begin(), doubled.end());
    hits.push_back(contains(twice, seg) || contains(twice, oracle::invert_word(seg)));
    cur = oracle::stack_reduce(f.apply(cur));
  }
  unsigned first = 0;
  while (!(hits[first] && hits[first + 1] && hits[first + 2] && hits[first + 3])) ++first;
  CHECK(att.first_index == first);

  // Already containing the segment: attracted immediately.
  CyclicWord own = CyclicWord::from_word(lam.deepest().letters);
  auto now = weakly_attracted(spec.map, own, lam, params, 50000000);
  CHECK(now.attracted);
  CHECK(now.first_index == 0);

  AttractionParams bad;
  bad.stability = 0;
  CHECK_THROWS_AS(weakly_attracted(spec.map, a, lam, bad), Error);
}

TEST_CASE("attraction is monotone in the horizons") {
  auto spec = fixture("filling_reducible");
  auto lam = lamination_approx(spec.marked, spec.map, eg_index(spec.map));
  const Graph& g = spec.map.source();
  for (const char* w : {"A", "B", "A B", "X A", "Y B' Z", "A X B"}) {
    CyclicWord c = CyclicWord::from_word(g.parse(w));
    for (unsigned s = 1; s <= 2; ++s) {
      AttractionParams small;
      small.stability = s;
      small.forward_horizon = 4;
      small.backward_horizon = 4;
      AttractionParams big = small;
      big.forward_horizon = 6;
      big.stability = s + 1;
      auto a = weakly_attracted(spec.map, c, lam, small, 50000000);
      if (a.attracted) CHECK(weakly_attracted(spec.map, c, lam, big, 50000000).attracted);
    }
  }
}

TEST_CASE("filling verdicts for single laminations") {
  for (unsigned m : {2u, 3u, 4u}) {
    FixtureParams p;
    p.m = m;
    auto spec = fixture("filling_reducible", p);
    auto lam = lamination_approx(spec.marked, spec.map, eg_index(spec.map));
    auto v = lamination_fills(lam);
    CAPTURE(m);
    CAPTURE(v.reason);
    CHECK(v.kind == FillsKind::Fills);
    CHECK(lam.stabilization_depth >= 1);
    CHECK(lam.stabilization_depth <= 6);
  }
  auto spec = fixture("filling_reducible");
  LaminationOptions one;
  one.min_depth = 0;
  one.max_depth = 0;
  auto lam = lamination_approx(spec.marked, spec.map, eg_index(spec.map), one);
  CHECK(lam.depth() == 0);
  CHECK(lamination_fills(lam).kind == FillsKind::Unknown);
}

TEST_CASE("two laminations that only fill together") {
  auto spec = fixture("bdd_no_periodic");
  auto lams = all_laminations(spec.marked, spec.map);
  REQUIRE(lams.size() == 2);
  const Graph& g = spec.map.source();
  for (auto& lam : lams) {
    auto v = lamination_fills(lam);
    CHECK(v.kind == FillsKind::ProperFactor);
    REQUIRE(v.witness.size() == 1);
    CHECK(v.witness.ranks() == std::vector<std::size_t>{5});
    CHECK(v.witness.proper());
  }
  // The witness for the first lamination is <X, Y, Z, A, B>.
  auto v1 = lamination_fills(lams[0]);
  EdgeSet k1;
  for (const char* n : {"X", "Y", "Z", "A", "B"}) k1.insert(*g.find_edge(n));
  CHECK(v1.witness == subgraph_system(spec.marked, k1));

  auto joint = laminations_jointly_fill(lams);
  CAPTURE(joint.reason);
  CHECK(joint.kind == FillsKind::Fills);

  std::vector<LaminationApprox> twice{lams[0], lams[0]};
  auto dup = laminations_jointly_fill(twice);
  CHECK(dup.kind == FillsKind::ProperFactor);
  CHECK(dup.witness == v1.witness);

  auto filling = fixture("filling_reducible");
  std::vector<LaminationApprox> single = all_laminations(filling.marked, filling.map);
  CHECK(laminations_jointly_fill(single).kind == FillsKind::Fills);
}

TEST_CASE("expansion estimates") {
  auto spec = fixture("filling_reducible");
  auto lam = lamination_approx(spec.marked, spec.map, eg_index(spec.map));
  const double target = std::log(pf_eigenvalue(transition_matrix(spec.map).block(lam.stratum_edges)));
  CHECK(std::abs(target - std::log(2 + std::sqrt(3.0))) < 1e-9);
  const std::size_t d = lam.depth();
  CHECK(pf_estimate(GraphMap::identity(spec.map.source_ptr()), lam, d) == 0.0);
  double one = pf_estimate(spec.map, lam, d);
  CHECK(std::abs(one - target) < 1e-3);
  double two = pf_estimate(compose(spec.map, spec.map), lam, d - 1);
  CHECK(std::abs(two - 2 * one) < 0.02 * 2 * one);

  // A segment that misses the stratum.
  LaminationApprox empty = lam;
  empty.segments[0] = make_path(spec.map.source(), spec.map.source().parse("X"));
  CHECK_THROWS_AS(pf_estimate(spec.map, empty, 0), Error);
}
