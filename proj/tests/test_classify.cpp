#include <doctest.h>

#include <cmath>

#include "freesplit/classify.hpp"
#include "freesplit/error.hpp"
#include "support.hpp"

using namespace freesplit;

namespace {

// Spectral radius above one, from the characteristic polynomial.
bool hyperbolic(const std::array<long long, 4>& m) {
  const double tr = static_cast<double>(m[0] + m[3]);
  const double det = static_cast<double>(m[0] * m[3] - m[1] * m[2]);
  const double disc = tr * tr - 4 * det;
  if (disc <= 0) return false;
  const double radius = (std::abs(tr) + std::sqrt(disc)) / 2;
  return radius > 1 + 1e-9;
}

std::array<long long, 4> abelian_matrix(const FreeMap& f) {
  auto a = oracle::abelian(f.image(0), 2), b = oracle::abelian(f.image(1), 2);
  return {a[0], b[0], a[1], b[1]};
}

std::string edge_name(const MarkedGraphPair& p, EdgeId e) { return p.graph().edge(e).name; }

}  // namespace

TEST_CASE("trace test in rank two") {
  CHECK(rank2_classify({2, 1, 1, 1}) == Rank2Verdict::Loxodromic);
  CHECK(rank2_classify({1, 1, 0, 1}) == Rank2Verdict::NotLoxodromic);
  CHECK(rank2_classify({0, -1, 1, 0}) == Rank2Verdict::NotLoxodromic);
  CHECK(rank2_classify({-1, 0, 0, -1}) == Rank2Verdict::NotLoxodromic);
  CHECK(rank2_classify({1, 1, 1, 0}) == Rank2Verdict::Loxodromic);
  CHECK(rank2_classify({1, 0, 0, -1}) == Rank2Verdict::NotLoxodromic);
  CHECK_THROWS_AS(rank2_classify({2, 0, 0, 1}), Error);
  CHECK_THROWS_AS(rank2_classify({0, 0, 0, 0}), Error);
  CHECK(std::string(to_string(Rank2Verdict::Loxodromic)) == "Loxodromic");

  // Every unimodular matrix with small entries against the eigenvalues.
  std::size_t seen = 0;
  for (long long a = -3; a <= 3; ++a)
    for (long long b = -3; b <= 3; ++b)
      for (long long c = -3; c <= 3; ++c)
        for (long long d = -3; d <= 3; ++d) {
          long long det = a * d - b * c;
          if (det != 1 && det != -1) continue;
          ++seen;
          std::array<long long, 4> m{a, b, c, d};
          CAPTURE(a);
          CAPTURE(b);
          CAPTURE(c);
          CAPTURE(d);
          CHECK((rank2_classify(m) == Rank2Verdict::Loxodromic) == hyperbolic(m));
        }
  CHECK(seen > 100);
}

TEST_CASE("battery matrices are the abelianized maps") {
  auto battery = rank2_battery();
  CHECK(battery.size() >= 10);
  for (const auto& rc : battery) {
    CAPTURE(rc.name);
    FreeMap phi = rose_automorphism(rc.spec.marked, rc.spec.map);
    CHECK(abelian_matrix(phi) == rc.matrix);
  }
}

TEST_CASE("power that makes permutation strata trivial") {
  auto battery = rank2_battery();
  std::map<std::string, unsigned> expect = {{"identity", 1}, {"swap", 2}, {"quarter_turn", 4}, {"reflection", 2},
                                            {"minus_identity", 2}, {"theta_rotation", 3},
                                            {"theta_flip_rotation", 6}, {"cat", 1}, {"shear", 1}};
  for (const auto& rc : battery) {
    auto it = expect.find(rc.name);
    if (it == expect.end()) continue;
    CAPTURE(rc.name);
    CHECK(rotationless_power(rc.spec.map) == it->second);
  }
  // Finite order elements become the identity map at that power.
  for (const char* name : {"swap", "quarter_turn", "theta_rotation", "theta_flip_rotation", "minus_identity"}) {
    for (const auto& rc : battery) {
      if (rc.name != name) continue;
      CAPTURE(name);
      const GraphMap& f = rc.spec.map;
      CHECK(power(f, rotationless_power(f)) == GraphMap::identity(f.source_ptr()));
    }
  }
  CHECK(rotationless_power(fixture("filling_reducible").map) == 1);
}

TEST_CASE("periodic vertex witnesses") {
  auto spec = fixture("reducible_periodic");
  auto w = periodic_vertex_witness(spec.marked, spec.map);
  CHECK(w.relation.status == RelationStatus::Holds);
  REQUIRE(w.splitting.pair.h.size() == 1);
  CHECK(edge_name(w.splitting.pair, *w.splitting.pair.h.begin()) == "y");
  // Independent recheck of the relation and of invariance.
  CHECK(is_invariant_subgraph(spec.map, w.splitting.pair.h));
  CHECK(pair_relation_check(spec.map, w.splitting.pair, remark(w.splitting.pair, spec.map)).status ==
        RelationStatus::Holds);

  auto id = GraphMap::identity(spec.marked.graph_ptr());
  auto wi = periodic_vertex_witness(spec.marked, id);
  CHECK(wi.relation.status == RelationStatus::Holds);
  CHECK(wi.splitting.pair.co_edge == 1);

  auto filling = fixture("filling_reducible");
  try {
    periodic_vertex_witness(filling.marked, filling.map);
    FAIL("expected NotApplicable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotApplicable);
  }
}

TEST_CASE("bounded orbit chain on the two-lamination example") {
  auto spec = fixture("bdd_no_periodic");
  for (unsigned k : {0u, 1u, 2u, 3u}) {
    CAPTURE(k);
    auto c = bounded_path_witness(spec, k);
    CHECK(c.verified);
    CHECK(c.moves == 4);
    REQUIRE(c.pairs.size() == 7);
    REQUIRE(c.links.size() == 6);
    // f1 agrees with f on K1 and f2 elsewhere.
    for (EdgeId e = 0; e < spec.map.source().num_edges(); ++e) {
      bool in_k1 = spec.decomposition->k1.count(e) > 0;
      CHECK(c.f1.image(e) == (in_k1 ? spec.map.image(e) : Word{forward(e)}));
      CHECK(c.f2.image(e) == (in_k1 ? Word{forward(e)} : spec.map.image(e)));
    }
    // Faces collapse strictly more; equalities give the same splitting.
    for (const auto& l : c.links) {
      const auto& a = c.pairs[l.from];
      const auto& b = c.pairs[l.to];
      if (l.kind == ChainLinkKind::Face) {
        CHECK(std::includes(b.h.begin(), b.h.end(), a.h.begin(), a.h.end()));
        CHECK(b.co_edge < a.co_edge);
      } else {
        CHECK(same_splitting(a, b));
      }
    }
    if (k == 0) {
      CHECK(c.pairs[3].marked.marking() == c.pairs[0].marked.marking());
      CHECK(c.pairs[6].marked.marking() == c.pairs[0].marked.marking());
    }
  }
}

TEST_CASE("decomposition clauses are enforced") {
  auto spec = fixture("bdd_no_periodic");
  ExampleSpec none = spec;
  none.decomposition.reset();
  CHECK_THROWS_AS(bounded_path_witness(none, 1), Error);

  // Barbell with an extra loop: x, z at p, y at q, bridge e.
  auto g = std::make_shared<const Graph>(std::vector<std::string>{"p", "q"},
                                         std::vector<EdgeSpec>{{"x", 0, 0}, {"z", 0, 0}, {"y", 1, 1}, {"e", 0, 1}});
  ExampleSpec bad;
  bad.name = "contractible";
  bad.marked = MarkedGraph(g, {"x", "z", "y"}, 0, {g->parse("x"), g->parse("z"), g->parse("e y e'")});
  bad.map = GraphMap::identity(g);
  bad.decomposition = Decomposition{{0, 1, 2}, {3}, {}, {}};
  try {
    bounded_path_witness(bad, 1);
    FAIL("expected InvalidInput");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInput);
    CHECK(std::string(e.what()).find("clause 3") != std::string::npos);
  }
  CHECK_THROWS_AS(validate_spec(bad), Error);
}

TEST_CASE("classification of the fixtures") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    auto spec = fixture(name);
    auto c = classify(spec);
    if (spec.expected) CHECK(c.verdict == *spec.expected);
  }
  auto lox = classify(fixture("filling_reducible"));
  CHECK(lox.verdict == Verdict::Loxodromic);
  CHECK(lox.witness_kind == "displacement-table");
  REQUIRE(lox.table);
  CHECK(lox.table->slope_exact);
  CHECK(lox.laminations == std::vector<std::string>{"Fills"});

  auto bdd = classify(fixture("bdd_no_periodic"));
  CHECK(bdd.verdict == Verdict::BoundedOrbits);
  CHECK(bdd.witness_kind == "chain");
  CHECK(bdd.laminations == std::vector<std::string>{"ProperFactor", "ProperFactor"});
  CHECK(bdd.joint == "Fills");
  REQUIRE(bdd.chain);
  CHECK(bdd.chain->verified);

  auto spec = fixture("bdd_no_periodic");
  spec.decomposition.reset();
  auto cited = classify(spec);
  CHECK(cited.verdict == Verdict::BoundedOrbits);
  CHECK(cited.witness_kind == "by-theorem");
  CHECK_FALSE(cited.chain);

  auto stub = classify(fixture("surface_example"));
  CHECK(stub.verdict == Verdict::Unknown);
  CHECK(stub.stage == "input");

  auto lin = classify(fixture("linear_example"));
  CHECK(lin.verdict == Verdict::PeriodicVertex);
  REQUIRE(lin.periodic);
  CHECK(lin.periodic->relation.status == RelationStatus::Holds);

  ClassifyOptions forced;
  forced.power = 2;
  CHECK(classify(fixture("filling_reducible"), forced).power == 2);
}

TEST_CASE("rank two battery agrees with the trace test") {
  for (const auto& rc : rank2_battery()) {
    CAPTURE(rc.name);
    auto c = classify(rc.spec);
    bool lox = rank2_classify(rc.matrix) == Rank2Verdict::Loxodromic;
    CHECK((c.verdict == Verdict::Loxodromic) == lox);
    if (lox) {
      REQUIRE(c.table);
      CHECK(c.table->slope_exact);
      CHECK(c.table->rows.size() == 9);
      for (const auto& row : c.table->rows) CHECK(row.transported == c.table->base - row.m);
    } else {
      CHECK(c.verdict == Verdict::PeriodicVertex);
      REQUIRE(c.periodic);
      GraphMap g = power(rc.spec.map, c.power);
      auto p = c.periodic->splitting.pair;
      CHECK(pair_relation_check(g, p, remark(p, g)).status == RelationStatus::Holds);
    }
  }
}

TEST_CASE("linear example generators") {
  FixtureParams one, two;
  one.i = 1;
  one.j = 0;
  two.i = 0;
  two.j = 1;
  auto a = fixture("linear_example", one);
  auto b = fixture("linear_example", two);
  const Graph& g = a.map.source();
  CHECK(compose(a.map, b.map) == compose(b.map, a.map));
  CHECK_FALSE(a.map == b.map);
  for (const char* text : {"X", "Y X Y'", "Z X Y X Y' Z'"}) {
    CAPTURE(text);
    CyclicWord c = CyclicWord::from_word(g.parse(text));
    CHECK(map_circuit(a.map, c) == c);
    CHECK(map_circuit(b.map, c) == c);
  }
  CHECK_FALSE(map_circuit(a.map, CyclicWord::from_word(g.parse("Y"))) == CyclicWord::from_word(g.parse("Y")));

  // The generators preserve the lamination of the companion map exactly.
  auto lams = all_laminations(a.marked, *a.companion);
  REQUIRE(lams.size() == 1);
  for (std::size_t d = 0; d <= lams[0].depth(); ++d) {
    CAPTURE(d);
    CHECK(pf_estimate(a.map, lams[0], d) == 0.0);
    CHECK(pf_estimate(b.map, lams[0], d) == 0.0);
  }
}

TEST_CASE("x to xy with y fixed has an invariant splitting at the y loop") {
  auto g = std::make_shared<const Graph>(std::vector<std::string>{"v"},
                                         std::vector<EdgeSpec>{{"x", 0, 0}, {"y", 0, 0}});
  MarkedGraph rose(g, {"x", "y"}, 0, {g->parse("x"), g->parse("y")});
  GraphMap f(g, g, {0}, {g->parse("x y"), g->parse("y")});
  auto w = periodic_vertex_witness(rose, f);
  CHECK(w.relation.status == RelationStatus::Holds);
  REQUIRE(w.splitting.pair.h.size() == 1);
  CHECK(edge_name(w.splitting.pair, *w.splitting.pair.h.begin()) == "y");

  ExampleSpec spec;
  spec.name = "xy";
  spec.marked = rose;
  spec.map = f;
  auto c = classify(spec);
  CHECK(c.verdict == Verdict::PeriodicVertex);
  CHECK(c.witness_kind == "invariant-splitting");
}

TEST_CASE("loxodromic witnesses carry the Lipschitz check and a consistent lower bound") {
  std::vector<ExampleSpec> specs{fixture("filling_reducible")};
  for (const auto& rc : rank2_battery()) specs.push_back(rc.spec);
  std::size_t compared = 0;
  for (const auto& spec : specs) {
    CAPTURE(spec.name);
    ClassifyOptions opts;
    auto c = classify(spec, opts);
    if (c.verdict != Verdict::Loxodromic) {
      CHECK_FALSE(c.distance_lower);
      continue;
    }
    REQUIRE(c.lipschitz);
    CHECK(c.lipschitz->violations == 0);
    CHECK(c.lipschitz->checked > 0);
    REQUIRE(c.m_hat);
    REQUIRE(c.distance_lower);
    CHECK(*c.distance_lower == doctest::Approx(opts.range / (8.0 * static_cast<double>(*c.m_hat))));
    // Upper bound by search where the search reaches the translate.
    REQUIRE(c.tracked);
    GraphMap g = power(spec.map, c.power);
    for (unsigned m = 1; m <= 2; ++m) {
      auto moved = remark(c.tracked->pair, power(g, m));
      SearchBudget budget;
      auto d = fs_distance_upper(c.tracked->pair, moved, budget);
      if (!d.distance) continue;
      ++compared;
      CHECK(static_cast<double>(m) / (8.0 * static_cast<double>(*c.m_hat)) <= static_cast<double>(*d.distance));
    }
  }
  MESSAGE("lower/upper comparisons: " << compared);
}
