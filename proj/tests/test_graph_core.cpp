#include <doctest.h>

#include <cmath>
#include <random>

#include "freesplit/error.hpp"
#include "freesplit/graph_map.hpp"
#include "freesplit/text_format.hpp"
#include "support.hpp"

using namespace freesplit;

namespace {

// Rose X Y Z A B with A -> A s B' s B, B -> B s A s B' s B.
const char* kFillingReducible = R"(VERTICES v
EDGES
X v v
Y v v
Z v v
A v v
B v v
MAP
X X
Y Y
Z Z
A A X Y X Y' Z X Y X Y' Z' B' X Y X Y' Z X Y X Y' Z' B
B B X Y X Y' Z X Y X Y' Z' A X Y X Y' Z X Y X Y' Z' B' X Y X Y' Z X Y X Y' Z' B
)";

const char* kTheta = R"(VERTICES p q
EDGES
a p q
b p q
c p q
MARKING p
x a c'
y b c'
)";

std::shared_ptr<const Graph> rose2() { return std::make_shared<const Graph>(Graph::rose({"x", "y"})); }

GraphMap rose_map(std::shared_ptr<const Graph> g, std::vector<std::string> images) {
  std::vector<Word> w;
  for (auto& s : images) w.push_back(g->parse(s));
  return GraphMap::from_free_map(g, FreeMap(w));
}

}  // namespace

TEST_CASE("tighten cancels and keeps endpoints") {
  auto g = std::make_shared<const Graph>(Graph::rose({"E", "A", "s", "B"}));
  CHECK(tighten(*g, make_path(*g, g->parse("E E'"))).empty());
  CHECK(tighten(*g, make_path(*g, g->parse("A s s' B"))).letters == g->parse("A B"));
  auto p = make_path(*g, g->parse("A s B"));
  CHECK(tighten(*g, p) == p);

  Graph theta({"p", "q"}, {{"a", 0, 1}, {"b", 0, 1}});
  CHECK_THROWS_AS(check_path(theta, EdgePath{0, theta.parse("a a")}), Error);
}

TEST_CASE("canonical cyclic form agrees with the rotation oracle") {
  auto g = rose2();
  CHECK(canonical_cyclic(*g, make_path(*g, g->parse("x y x'"))).letters() == g->parse("y"));
  CHECK(canonical_cyclic(*g, make_path(*g, g->parse("y x"))) ==
        canonical_cyclic(*g, make_path(*g, g->parse("x y"))));
  Word w = g->parse("x y' y x");
  CHECK(canonical_cyclic(*g, make_path(*g, w)).letters() == oracle::canonical_cyclic(w));
  CHECK(oracle::canonical_cyclic(w) == g->parse("x x"));

  std::mt19937 rng(7);
  for (int t = 0; t < 500; ++t) {
    Word u = oracle::random_word(rng, 3, 1 + t % 12);
    auto c = CyclicWord::from_word(u);
    CHECK(c.letters() == oracle::canonical_cyclic(u));
    CHECK(CyclicWord::from_word(c.letters()) == c);
    Word rotated = rotate(u, static_cast<std::size_t>(t) % u.size());
    CHECK(CyclicWord::from_word(rotated) == c);
    CHECK(CyclicWord::from_word(oracle::invert_word(u)) == c);
    CHECK(free_reduce(c.oriented()) == c.oriented());
  }

  Graph theta({"p", "q"}, {{"a", 0, 1}, {"b", 0, 1}});
  CHECK_THROWS_AS(canonical_cyclic(theta, make_path(theta, theta.parse("a"))), Error);
}

TEST_CASE("tighten properties on random paths") {
  auto g = std::make_shared<const Graph>(Graph::rose({"a", "b", "c"}));
  std::mt19937 rng(11);
  std::uniform_int_distribution<Letter> d(0, 5);
  for (int t = 0; t < 400; ++t) {
    Word raw;
    for (int i = 0; i < t % 20; ++i) raw.push_back(d(rng));
    auto p = make_path(*g, raw);
    auto q = tighten(*g, p);
    CHECK(q.letters == oracle::stack_reduce(raw));
    CHECK(tighten(*g, q) == q);
    CHECK(q.length() <= p.length());
  }
}

TEST_CASE("map_path on the filling reducible edges") {
  auto doc = parse_document(kFillingReducible);
  const GraphMap& f = *doc.map;
  const Graph& g = *doc.graph;
  Word sigma = g.parse("X Y X Y' Z X Y X Y' Z'");
  Word fa = g.parse("A");
  for (Word part : {sigma, g.parse("B'"), sigma, g.parse("B")}) fa.insert(fa.end(), part.begin(), part.end());
  CHECK(map_path(f, make_path(g, g.parse("A"))).letters == fa);
  CHECK(map_circuit(f, CyclicWord::from_word(sigma)) == CyclicWord::from_word(sigma));
  CHECK(map_circuit(f, CyclicWord::from_word(g.parse("A"))) == CyclicWord::from_word(fa));

  auto b1 = iterate(f, make_path(g, g.parse("B")), 1);
  auto b2 = iterate(f, make_path(g, g.parse("B")), 2);
  REQUIRE(b2.length() > b1.length());
  CHECK(std::equal(b1.letters.begin(), b1.letters.end(), b2.letters.begin()));
  CHECK(iterate(f, make_path(g, g.parse("B")), 0).letters == g.parse("B"));
  CHECK(b2 == map_path(f, map_path(f, make_path(g, g.parse("B")))));

  auto id = GraphMap::identity(doc.graph);
  CHECK(compose(f, id) == f);
  CHECK(compose(f, f) == power(f, 2));
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    CHECK(compose(f, f).image(e) == iterate(f, make_path(g, {forward(e)}), 2).letters);
  }
}

TEST_CASE("map_path is a homomorphism and iteration adds") {
  auto doc = parse_document(kFillingReducible);
  const GraphMap& f = *doc.map;
  const Graph& g = *doc.graph;
  std::mt19937 rng(3);
  for (int t = 0; t < 60; ++t) {
    Word p = oracle::random_word(rng, 5, 1 + t % 6);
    Word q = oracle::random_word(rng, 5, 1 + t % 5);
    Word pq = p;
    pq.insert(pq.end(), q.begin(), q.end());
    Word lhs = map_path(f, tighten(g, make_path(g, pq))).letters;
    Word rhs = map_path(f, make_path(g, p)).letters;
    append_reduced(rhs, map_path(f, make_path(g, q)).letters);
    CHECK(lhs == rhs);
    unsigned j = t % 2, k = 1;
    CHECK(iterate(f, make_path(g, p), j + k) == iterate(f, iterate(f, make_path(g, p), j), k));
  }
}

TEST_CASE("iterate stops at the length cap") {
  auto doc = parse_document(kFillingReducible);
  try {
    iterate(*doc.map, make_path(*doc.graph, doc.graph->parse("B")), 30, 5000);
    FAIL("expected BudgetExhausted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BudgetExhausted);
  }
}

TEST_CASE("transition matrices and strata") {
  auto doc = parse_document(kFillingReducible);
  const GraphMap& f = *doc.map;
  auto m = transition_matrix(f);
  auto block = m.block({3, 4});
  CHECK(block.rows() == std::vector<std::vector<long long>>{{1, 1}, {2, 3}});
  CHECK(std::abs(pf_eigenvalue(block) - (2 + std::sqrt(3.0))) < 1e-9);
  // Positive block: no cancellation, so the square is exact.
  CHECK(transition_matrix(compose(f, f)).block({3, 4}) == multiply(block, block));

  auto filt = strata(f);
  REQUIRE(filt.strata.size() == 2);
  CHECK(filt.strata[0].kind == StratumKind::FIXED);
  CHECK(filt.strata[0].edges == std::vector<EdgeId>{0, 1, 2});
  CHECK(filt.strata[1].kind == StratumKind::EG);
  CHECK(filt.strata[1].edges == std::vector<EdgeId>{3, 4});
  for (std::size_t i = 0; i < filt.strata.size(); ++i) CHECK(is_invariant_subgraph(f, filt.subgraph(i)));
  for (const auto& s : filt.strata) {
    CHECK((s.kind == StratumKind::EG) == (pf_eigenvalue(m.block(s.edges)) > kEgThreshold));
  }

  auto id = GraphMap::identity(doc.graph);
  auto idm = transition_matrix(id);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) CHECK(idm.at(i, j) == (i == j ? 1 : 0));
  }
  auto idf = strata(id);
  REQUIRE(idf.strata.size() == 1);
  CHECK(idf.strata[0].kind == StratumKind::FIXED);

  CHECK(std::abs(pf_eigenvalue(TransitionMatrix({0, 1}, {1, 0, 0, 1})) - 1.0) < 1e-9);
  CHECK(std::abs(pf_eigenvalue(TransitionMatrix({0, 1}, {0, 1, 1, 0})) - 1.0) < 1e-9);
}

TEST_CASE("linear example generator has unipotent transition matrix") {
  auto g = std::make_shared<const Graph>(Graph::rose({"X", "Y", "Z", "A", "B"}));
  // Y -> Y X^3, Z -> Z w^3 with w = X Y X Y'.
  auto f = rose_map(g, {"X", "Y X X X", "Z X Y X Y' X Y X Y' X Y X Y'", "A", "B"});
  auto m = transition_matrix(f);
  for (std::size_t i = 0; i < 5; ++i) CHECK(m.at(i, i) == 1);
  CHECK(m.at(0, 1) == 3);
  CHECK(m.at(0, 2) == 6);
  CHECK(m.at(1, 2) == 6);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < i; ++j) CHECK(m.at(i, j) == 0);
  }
  for (const auto& s : strata(f).strata) CHECK(s.kind != StratumKind::EG);
}

TEST_CASE("Nielsen paths and invariant subgraphs") {
  auto doc = parse_document(kFillingReducible);
  const GraphMap& f = *doc.map;
  const Graph& g = *doc.graph;
  CHECK(is_nielsen(GraphMap::identity(doc.graph), make_path(g, g.parse("A B X"))));
  CHECK_FALSE(is_nielsen(f, make_path(g, g.parse("A"))));
  CHECK(is_nielsen(f, make_path(g, g.parse("X Y Z"))));
  CHECK(is_invariant_subgraph(f, {0, 1, 2}));
  CHECK_FALSE(is_invariant_subgraph(f, {3}));
  CHECK(is_invariant_subgraph(f, {0, 1, 2, 3, 4}));
  CHECK(invariant_closure(f, {3}) == EdgeSet{0, 1, 2, 3, 4});

  auto lin = rose_map(std::make_shared<const Graph>(Graph::rose({"X", "Y", "Z", "A", "B"})),
                      {"X", "Y X X X", "Z X Y X Y' X Y X Y' X Y X Y'", "A", "B"});
  const Graph& lg = lin.source();
  CHECK(is_nielsen(lin, make_path(lg, lg.parse("Y X Y'"))));

  Graph theta({"p", "q"}, {{"a", 0, 1}, {"b", 0, 1}, {"c", 0, 1}});
  auto tg = std::make_shared<const Graph>(theta);
  GraphMap swap(tg, tg, {1, 0}, {tg->parse("a'"), tg->parse("b'"), tg->parse("c'")});
  CHECK_THROWS_AS(is_nielsen(swap, make_path(theta, theta.parse("a"))), Error);
}

TEST_CASE("outer equality") {
  auto g = rose2();
  auto f = rose_map(g, {"x y", "y"});
  CHECK(outer_equal(f, f).verdict == OuterVerdict::Equal);
  CHECK(outer_equal(f, f).conjugator.empty());
  auto conj = rose_map(g, {"x x y x'", "x y x'"});
  auto r = outer_equal(f, conj);
  CHECK(r.verdict == OuterVerdict::Equal);
  CHECK(r.conjugator == g->parse("x"));
  auto id = GraphMap::identity(g);
  auto d = outer_equal(f, id);
  CHECK(d.verdict == OuterVerdict::Distinct);
  // Same abelianization, different outer classes.
  auto inner = rose_map(g, {"x", "x y x'"});
  CHECK(outer_equal(inner, id).verdict == OuterVerdict::Equal);
  auto g3 = std::make_shared<const Graph>(Graph::rose({"x", "y", "z"}));
  auto partial = rose_map(g3, {"x", "y", "x z x'"});
  CHECK(outer_equal(partial, GraphMap::identity(g3)).verdict == OuterVerdict::Distinct);
  auto y_twist = rose_map(g, {"y x y'", "y"});
  CHECK(outer_equal(y_twist, id).verdict == OuterVerdict::Equal);

  std::mt19937 rng(5);
  for (int t = 0; t < 80; ++t) {
    auto a = oracle::random_automorphism(rng, 3, 8);
    Word u = oracle::random_word(rng, 3, 1 + t % 7);
    std::vector<Word> conj_images;
    for (const auto& img : a.images()) {
      Word w = u;
      append_reduced(w, img);
      append_inverse_reduced(w, u);
      conj_images.push_back(w);
    }
    auto res = outer_equal(a, FreeMap(conj_images));
    REQUIRE(res.verdict == OuterVerdict::Equal);
    for (std::size_t i = 0; i < 3; ++i) {
      Word w = res.conjugator;
      append_reduced(w, a.image(i));
      append_inverse_reduced(w, res.conjugator);
      CHECK(w == conj_images[i]);
    }
  }
}

TEST_CASE("outer_equal reports Distinct only for distinct abelianizations or certified search") {
  std::mt19937 rng(9);
  for (int t = 0; t < 60; ++t) {
    auto a = oracle::random_automorphism(rng, 2, 6);
    auto b = oracle::random_automorphism(rng, 2, 6);
    auto res = outer_equal(a, b);
    bool same_ab = true;
    for (std::size_t i = 0; i < 2; ++i) same_ab = same_ab && oracle::abelian(a.image(i), 2) == oracle::abelian(b.image(i), 2);
    if (!same_ab) CHECK(res.verdict == OuterVerdict::Distinct);
    if (res.verdict == OuterVerdict::Equal) {
      for (std::size_t i = 0; i < 2; ++i) {
        Word w = res.conjugator;
        append_reduced(w, a.image(i));
        append_inverse_reduced(w, res.conjugator);
        CHECK(w == b.image(i));
      }
    }
  }
}

TEST_CASE("inversion round trip") {
  auto g = rose2();
  auto f = rose_map(g, {"x y", "y"});
  auto inv_f = invert_automorphism(f);
  CHECK(inv_f.image(0) == g->parse("x y'"));
  CHECK(inv_f.image(1) == g->parse("y"));
  auto id = GraphMap::identity(g);
  CHECK(invert_automorphism(id) == id);

  auto doc = parse_document(kFillingReducible);
  auto fi = invert_automorphism(*doc.map);
  CHECK(outer_equal(compose(*doc.map, fi), GraphMap::identity(doc.graph)).verdict == OuterVerdict::Equal);
  CHECK(outer_equal(compose(fi, *doc.map), GraphMap::identity(doc.graph)).verdict == OuterVerdict::Equal);

  std::mt19937 rng(21);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 2 + t % 3;
    auto a = oracle::random_automorphism(rng, n, 4 + t % 12);
    auto b = invert(a);
    auto c = compose(a, b);
    CHECK(outer_equal(c, FreeMap::identity(n)).verdict == OuterVerdict::Equal);
  }

  auto not_auto = rose_map(g, {"x x", "y"});
  CHECK_THROWS_AS(invert_automorphism(not_auto), Error);
}

TEST_CASE("marked graphs") {
  auto doc = parse_document(kTheta);
  REQUIRE(doc.marked);
  const MarkedGraph& m = *doc.marked;
  CHECK(m.rank() == 2);
  CHECK(outer_equal(m.round_trip(), FreeMap::identity(2)).verdict == OuterVerdict::Equal);
  Word xy = parse_word("x y", m.basis_names());
  Word path = m.from_rose(xy);
  CHECK(m.to_rose(path) == xy);
  auto c = CyclicWord::from_word(parse_word("x y'", m.basis_names()));
  CHECK(m.class_to_rose(m.class_from_rose(c)) == c);

  Graph bad({"p", "q"}, {{"a", 0, 1}, {"b", 0, 0}});
  auto bg = std::make_shared<const Graph>(bad);
  CHECK_THROWS_AS(MarkedGraph(bg, {"x"}, 0, {bg->parse("b")}), Error);
}

TEST_CASE("text format round trip") {
  for (const char* text : {kFillingReducible, kTheta}) {
    auto doc = parse_document(text);
    std::string printed = print_document(doc);
    CHECK(print_document(parse_document(printed)) == printed);
  }
  auto doc = parse_document(kFillingReducible);
  CHECK(print_document(doc) == kFillingReducible);
  CHECK_THROWS_AS(parse_document("EDGES\na v v\n"), Error);
  CHECK_THROWS_AS(parse_document("VERTICES v\nEDGES\na v w\n"), Error);
  CHECK_THROWS_AS(parse_document("VERTICES v\nEDGES\na v v\nMAP\na q\n"), Error);
}
