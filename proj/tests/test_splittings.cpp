#include <doctest.h>

#include <memory>
#include <random>

#include "freesplit/error.hpp"
#include "freesplit/fixtures.hpp"
#include "freesplit/splitting.hpp"
#include "support.hpp"

using namespace freesplit;

namespace {

std::shared_ptr<const Graph> theta_graph() {
  return std::make_shared<const Graph>(std::vector<std::string>{"p", "q"},
                                       std::vector<EdgeSpec>{{"a", 0, 1}, {"b", 0, 1}, {"c", 0, 1}});
}

// x = a c', y = b c'.
MarkedGraph theta() {
  auto g = theta_graph();
  return MarkedGraph(g, {"x", "y"}, 0, {g->parse("a c'"), g->parse("b c'")});
}

MarkedGraph rose(std::size_t rank) {
  std::vector<std::string> names{"x", "y", "z", "u", "v"};
  names.resize(rank);
  return MarkedGraph::standard_rose(names);
}

MarkedGraph rose_with(const FreeMap& f) {
  MarkedGraph r = rose(f.rank());
  return MarkedGraph(r.graph_ptr(), r.basis_names(), 0, f.images());
}

EdgeSet edges(const Graph& g, std::initializer_list<const char*> names) {
  EdgeSet out;
  for (const char* n : names) out.insert(*g.find_edge(n));
  return out;
}

std::size_t symmetric_difference(const EdgeSet& a, const EdgeSet& b) {
  std::size_t n = 0;
  for (EdgeId e : a) n += b.count(e) ? 0 : 1;
  for (EdgeId e : b) n += a.count(e) ? 0 : 1;
  return n;
}

}  // namespace

TEST_CASE("natural edges and natural subgraphs") {
  // Theta with the edge c subdivided at r.
  auto g = std::make_shared<const Graph>(std::vector<std::string>{"p", "q", "r"},
                                         std::vector<EdgeSpec>{{"a", 0, 1}, {"b", 0, 1}, {"c1", 0, 2}, {"c2", 2, 1}});
  auto chains = natural_edges(*g);
  REQUIRE(chains.size() == 3);
  CHECK(chains[2] == edges(*g, {"c1", "c2"}));
  CHECK(natural_vertices(*g) == std::vector<Vertex>{0, 1});
  CHECK(is_natural_subgraph(*g, edges(*g, {"a", "c1", "c2"})));
  CHECK_FALSE(is_natural_subgraph(*g, edges(*g, {"a", "c1"})));
  CHECK(subgraph_rank(*g, edges(*g, {"a", "b"})) == 1);
  CHECK(subgraph_core(*g, edges(*g, {"a", "b", "c1"})) == edges(*g, {"a", "b"}));
}

TEST_CASE("pair validation names the violated clause") {
  MarkedGraph t = theta();
  const Graph& g = t.graph();
  CHECK_THROWS_WITH_AS(validate_pair(t, edges(g, {"a"})), doctest::Contains("contractible"), Error);
  CHECK_THROWS_WITH_AS(validate_pair(t, edges(g, {"a", "b", "c"})), doctest::Contains("whole graph"), Error);
  auto g2 = std::make_shared<const Graph>(std::vector<std::string>{"p", "q", "r"},
                                          std::vector<EdgeSpec>{{"a", 0, 1}, {"b", 0, 1}, {"c1", 0, 2}, {"c2", 2, 1}});
  MarkedGraph sub(g2, {"x", "y"}, 0, {g2->parse("a c2' c1'"), g2->parse("b c2' c1'")});
  CHECK_THROWS_WITH_AS(validate_pair(sub, edges(*g2, {"a", "c1"})), doctest::Contains("natural"), Error);
  auto p = validate_pair(t, edges(g, {"a", "b"}));
  CHECK(p.co_edge == 1);
  CHECK(validate_pair(t, {}).co_edge == 3);
}

TEST_CASE("faces and cofaces") {
  MarkedGraph t = theta();
  auto p = validate_pair(t, {});
  auto f = faces(p);
  // Single edges of the theta are arcs; the three pairs of edges are circles.
  REQUIRE(f.size() == 3);
  for (const auto& q : f) {
    CHECK(q.co_edge == 1);
    CHECK(q.h.size() == 2);
  }
  CHECK_THROWS_AS(faces(f[0]), Error);

  auto r = validate_pair(rose(3), edges(rose(3).graph(), {"x"}));
  CHECK(faces(r).size() == 2);
  auto up = cofaces(r);
  REQUIRE(up.size() == 1);
  CHECK(up[0].h.empty());
  CHECK(up[0].co_edge == 3);
}

TEST_CASE("faces and cofaces are mutually inverse on random roses") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    MarkedGraph r = rose(4);
    EdgeSet h;
    for (EdgeId e = 0; e < 4; ++e) {
      if (rng() % 2) h.insert(e);
    }
    if (h.size() == 4) h.erase(0);
    auto p = validate_pair(r, h);
    if (p.co_edge < 2) continue;
    for (const auto& f : faces(p)) {
      CHECK(f.co_edge < p.co_edge);
      bool back = false;
      for (const auto& c : cofaces(f)) back = back || c.h == p.h;
      CHECK(back);
    }
  }
}

TEST_CASE("elliptic systems and equivalence of one-edge splittings") {
  MarkedGraph t = theta();
  auto ab = one_edge(validate_pair(t, edges(t.graph(), {"a", "b"})));
  // The circle a b' reads x y' in the rose.
  CHECK(ab.elliptic == FreeFactorSystem::from_generators(2, {{parse_word("x y'", {"x", "y"})}}));

  // Rose whose first petal reads x y': the same splitting.
  FreeMap m({parse_word("x y", {"x", "y"}), parse_word("y", {"x", "y"})});
  MarkedGraph r = rose_with(m);
  auto petal = one_edge(validate_pair(r, edges(r.graph(), {"x"})));
  CHECK(equivalent_one_edge(ab, petal));
  CHECK(same_splitting(ab.pair, petal.pair));
  auto other = one_edge(validate_pair(r, edges(r.graph(), {"y"})));
  CHECK_FALSE(equivalent_one_edge(ab, other));
  CHECK_THROWS_AS(one_edge(validate_pair(t, {})), Error);
}

TEST_CASE("splitting keys of higher co-edge pairs") {
  auto r = validate_pair(rose(3), {});
  auto t = validate_pair(rose(3), edges(rose(3).graph(), {"x"}));
  CHECK(splitting_key(r) != splitting_key(t));
  // Reordering the petals does not change the splitting.
  FreeMap swap({parse_word("y", {"x", "y", "z"}), parse_word("x", {"x", "y", "z"}), parse_word("z", {"x", "y", "z"})});
  MarkedGraph s = rose_with(swap);
  CHECK(same_splitting(r, validate_pair(s, {})));
  CHECK(same_splitting(t, validate_pair(s, edges(s.graph(), {"y"}))));
  CHECK_FALSE(same_splitting(t, validate_pair(s, edges(s.graph(), {"x"}))));
}

TEST_CASE("remarking moves the elliptic system by the inverse") {
  std::mt19937 rng(5);
  const std::vector<std::string> names{"x", "y", "z"};
  for (int trial = 0; trial < 25; ++trial) {
    FreeMap f = oracle::random_automorphism(rng, 3, 6);
    MarkedGraph r = rose(3);
    GraphMap g = GraphMap::from_free_map(r.graph_ptr(), f);
    auto p = validate_pair(r, edges(r.graph(), {"x", "y"}));
    auto q = remark(p, g);
    auto ell = elliptic_system(q);
    REQUIRE(ell.size() == 1);
    // f carries the new elliptic factor onto <x, y>.
    std::vector<Word> images;
    for (const Word& b : ell.components()[0].basis()) images.push_back(oracle::substitute(f.images(), b));
    CHECK(FreeFactorSystem::from_generators(3, {images}) == elliptic_system(p));
  }
}

TEST_CASE("remarking composes") {
  std::mt19937 rng(9);
  MarkedGraph r = rose(3);
  for (int trial = 0; trial < 10; ++trial) {
    GraphMap f = GraphMap::from_free_map(r.graph_ptr(), oracle::random_automorphism(rng, 3, 5));
    GraphMap g = GraphMap::from_free_map(r.graph_ptr(), oracle::random_automorphism(rng, 3, 5));
    auto p = validate_pair(r, edges(r.graph(), {"z"}));
    CHECK(elliptic_system(remark(remark(p, f), g)) == elliptic_system(remark(p, compose(g, f))));
  }
}

TEST_CASE("pair relation on the reducible periodic example") {
  auto spec = fixture("reducible_periodic");
  auto p = validate_pair(spec.marked, *spec.splitting);
  auto q = remark(p, spec.map);
  auto held = pair_relation_check(spec.map, p, q);
  CHECK(held.status == RelationStatus::Holds);
  REQUIRE(held.witness);
  REQUIRE(held.witness->edges.size() == 1);
  CHECK(held.witness->edges[0].after == spec.marked.graph().parse("y"));
  CHECK(same_splitting(p, q));

  auto wrong = pair_relation_check(spec.map, p, p);
  CHECK(wrong.status == RelationStatus::FailsClause);
  CHECK(wrong.clause == 1);

  auto self = pair_relation_check(GraphMap::identity(spec.marked.graph_ptr()), p, p);
  CHECK(self.status == RelationStatus::Holds);
}

TEST_CASE("pair relation failing on edges and on vertices") {
  MarkedGraph r = rose(3);
  const Graph& g = r.graph();
  GraphMap f(r.graph_ptr(), r.graph_ptr(), {0}, {g.parse("x z"), g.parse("y"), g.parse("z")});
  auto p = validate_pair(r, edges(g, {"y"}));
  auto res = pair_relation_check(f, p, remark(p, f));
  CHECK(res.status == RelationStatus::FailsClause);
  CHECK(res.clause == 3);

  // Collapsing the edge c identifies the two natural vertices of the theta.
  MarkedGraph t = theta();
  auto tg = t.graph_ptr();
  GraphMap collapse(tg, tg, {0, 0}, {tg->parse("a c'"), tg->parse("b c'"), Word{}});
  auto tp = validate_pair(t, {});
  auto vres = pair_relation_check(collapse, tp, tp);
  CHECK(vres.status == RelationStatus::FailsClause);
  CHECK(vres.clause == 2);
}

TEST_CASE("blow-ups of the rank two rose") {
  MarkedGraph r = rose(2);
  auto ups = blow_ups(r);
  // The four directions at the vertex split two and two, with the first
  // direction held in place.
  REQUIRE(ups.size() == 3);
  for (const auto& b : ups) {
    CHECK(b.graph().num_vertices() == 2);
    CHECK(b.graph().num_edges() == 3);
    CHECK(b.graph().rank() == 2);
    const EdgeId fresh = 2;
    for (std::size_t i = 0; i < 2; ++i) {
      Word collapsed;
      for (Letter l : b.marking()[i]) {
        if (edge_of(l) != fresh) collapsed.push_back(l);
      }
      CHECK(oracle::stack_reduce(collapsed) == r.marking()[i]);
    }
  }
}

TEST_CASE("adjacency of one-edge splittings") {
  MarkedGraph r = rose(2);
  const Graph& g = r.graph();
  auto x = one_edge(validate_pair(r, edges(g, {"x"})));
  auto y = one_edge(validate_pair(r, edges(g, {"y"})));
  auto adj = adjacent(x, y);
  CHECK(adj.found);
  REQUIRE(adj.witness);
  CHECK(adj.witness->co_edge == 2);
  CHECK_THROWS_AS(adjacent(x, x), Error);

  // The separating splitting <x> * <y> needs a blow-up of the rose.
  auto bar = std::make_shared<const Graph>(std::vector<std::string>{"p", "q"},
                                           std::vector<EdgeSpec>{{"x", 0, 0}, {"y", 1, 1}, {"e", 0, 1}});
  MarkedGraph barbell(bar, {"x", "y"}, 0, {bar->parse("x"), bar->parse("e y e'")});
  auto sep = one_edge(validate_pair(barbell, edges(*bar, {"x", "y"})));
  CHECK(sep.elliptic.size() == 2);
  auto via = adjacent(x, sep);
  CHECK(via.found);
}

TEST_CASE("distance upper bounds in the free splitting complex") {
  MarkedGraph r = rose(3);
  std::vector<EdgeSet> subsets;
  for (unsigned mask = 0; mask < 7; ++mask) {
    EdgeSet h;
    for (EdgeId e = 0; e < 3; ++e) {
      if (mask >> e & 1) h.insert(e);
    }
    subsets.push_back(h);
  }
  // Within one rose every subset is a valid pair and steps toggle a petal.
  for (const auto& a : subsets) {
    for (const auto& b : subsets) {
      auto d = fs_distance_upper(validate_pair(r, a), validate_pair(r, b));
      REQUIRE(d.distance);
      CHECK(*d.distance == symmetric_difference(a, b));
      std::size_t moves = 0;
      for (const auto& step : d.path) moves += step.move == "collapse" || step.move == "expand";
      CHECK(moves == *d.distance);
    }
  }
  // The theta circle a b' and the rose petal reading x y' are equal.
  MarkedGraph t = theta();
  FreeMap m({parse_word("x y", {"x", "y"}), parse_word("y", {"x", "y"})});
  MarkedGraph rm = rose_with(m);
  auto d = fs_distance_upper(validate_pair(t, edges(t.graph(), {"a", "b"})), validate_pair(rm, edges(rm.graph(), {"x"})));
  REQUIRE(d.distance);
  CHECK(*d.distance == 0);
  CHECK(d.path.back().move == "equal");
}
