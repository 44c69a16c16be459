#include "freesplit/fixtures.hpp"

#include <algorithm>

#include "freesplit/error.hpp"
#include "freesplit/splitting.hpp"
#include "freesplit/text_format.hpp"
#include "freesplit/whitehead.hpp"

namespace freesplit {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Loxodromic: return "Loxodromic";
    case Verdict::BoundedOrbits: return "BoundedOrbits";
    case Verdict::PeriodicVertex: return "PeriodicVertex";
    case Verdict::Unknown: return "Unknown";
  }
  return "?";
}

namespace {

const std::vector<std::string> kFixedNames = {"X", "Y", "Z", "U", "V", "T"};

std::vector<std::string> fixed_names(unsigned m) {
  if (m < 2 || m > kFixedNames.size()) invalid_input("fixed subgraph rank must be between 2 and 6");
  return {kFixedNames.begin(), kFixedNames.begin() + m};
}

struct RoseBuilder {
  std::shared_ptr<const Graph> graph;
  MarkedGraph marked;

  explicit RoseBuilder(const std::vector<std::string>& names)
      : graph(std::make_shared<const Graph>(Graph::rose(names))),
        marked(graph, names, 0, identity_marking(names.size())) {}

  static std::vector<Word> identity_marking(std::size_t n) {
    std::vector<Word> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back({forward(static_cast<std::uint32_t>(i))});
    return out;
  }

  // Missing names map to themselves.
  GraphMap map(const std::vector<std::pair<std::string, std::string>>& images) const {
    std::vector<Word> w;
    for (EdgeId e = 0; e < graph->num_edges(); ++e) w.push_back({forward(e)});
    for (const auto& [name, image] : images) {
      auto e = graph->find_edge(name);
      if (!e) invalid_input("unknown edge " + name);
      w[*e] = graph->parse(image);
    }
    return GraphMap::from_free_map(graph, FreeMap(w));
  }

  EdgeSet edges(const std::vector<std::string>& names) const {
    EdgeSet out;
    for (const auto& n : names) out.insert(*graph->find_edge(n));
    return out;
  }
};

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : " ") + p;
  return out;
}

void check_sigma_fills(const RoseBuilder& rb, const std::vector<std::string>& fixed, const std::string& sigma) {
  Word w = rb.graph->parse(sigma);
  const std::size_t m = fixed.size();
  for (Letter l : w) {
    if (edge_of(l) >= m) fixture_invalid("sigma must lie in the fixed subgraph");
  }
  if (!is_reduced(w) || w.empty()) fixture_invalid("sigma must be a nontrivial reduced loop");
  if (fills({CyclicWord::from_word(w)}, m).kind != FillsKind::Fills) {
    fixture_invalid("sigma does not fill the fixed subgroup");
  }
}

// A -> A s B' s B, B -> B s A s B' s B.
std::vector<std::pair<std::string, std::string>> ab_images(const std::string& a, const std::string& b,
                                                           const std::string& s) {
  return {{a, a + " " + s + " " + b + "' " + s + " " + b},
          {b, b + " " + s + " " + a + " " + s + " " + b + "' " + s + " " + b}};
}

ExampleSpec filling_reducible(const FixtureParams& p) {
  auto fixed = fixed_names(p.m);
  auto names = fixed;
  names.insert(names.end(), {"A", "B"});
  RoseBuilder rb(names);
  std::string sigma = p.sigma.empty() ? catalog_sigma(p.m) : p.sigma;
  check_sigma_fills(rb, fixed, sigma);
  ExampleSpec spec;
  spec.name = "filling_reducible";
  spec.marked = rb.marked;
  spec.map = rb.map(ab_images("A", "B", sigma));
  // B -> B A' s', then A -> A s A B' s' B A' s' s'.
  std::string s_inv;
  {
    Word w = inverse(rb.graph->parse(sigma));
    s_inv = rb.graph->format(w);
  }
  const std::string gb = "B A' " + s_inv;
  const std::string gb_inv = sigma + " A B'";
  spec.inverse = rb.map({{"A", "A " + gb_inv + " " + s_inv + " " + gb + " " + s_inv}, {"B", gb}});
  spec.expected = Verdict::Loxodromic;
  auto h = rb.edges(fixed);
  h.insert(*rb.graph->find_edge("A"));
  spec.splitting = h;
  spec.notes = {"identity on the fixed rose, EG stratum {A, B}", "sigma = " + sigma};
  return spec;
}

ExampleSpec bdd_no_periodic(const FixtureParams& p) {
  auto fixed = fixed_names(p.m);
  auto names = fixed;
  names.insert(names.end(), {"A", "B", "A2", "B2"});
  RoseBuilder rb(names);
  std::string sigma = p.sigma.empty() ? catalog_sigma(p.m) : p.sigma;
  check_sigma_fills(rb, fixed, sigma);
  auto images = ab_images("A", "B", sigma);
  auto more = ab_images("A2", "B2", sigma);
  images.insert(images.end(), more.begin(), more.end());
  ExampleSpec spec;
  spec.name = "bdd_no_periodic";
  spec.marked = rb.marked;
  spec.map = rb.map(images);
  spec.expected = Verdict::BoundedOrbits;
  EdgeSet g1 = rb.edges(fixed);
  Decomposition d;
  d.k1 = g1;
  d.k1.insert({*rb.graph->find_edge("A"), *rb.graph->find_edge("B")});
  d.k2 = g1;
  d.k2.insert({*rb.graph->find_edge("A2"), *rb.graph->find_edge("B2")});
  d.j2 = d.k2;
  d.j3 = g1;
  spec.decomposition = d;
  spec.splitting = d.j3;
  spec.notes = {"two EG strata {A, B} and {A2, B2} over the fixed rose", "sigma = " + sigma};
  return spec;
}

ExampleSpec linear_example(const FixtureParams& p) {
  if (p.m != 3) invalid_input("the linear example has a rank three fixed subgraph");
  RoseBuilder rb({"X", "Y", "Z", "A", "B"});
  auto power = [&rb](const std::string& w, int k) {
    std::vector<std::string> parts;
    std::string unit = w;
    if (k < 0) unit = rb.graph->format(inverse(rb.graph->parse(w)));
    for (int i = 0; i < std::abs(k); ++i) parts.push_back(unit);
    return join(parts);
  };
  const std::string w = "X Y X Y'";
  std::string y = "Y " + power("X", 3 * p.i);
  std::string z = "Z " + power(w, 3 * p.j);
  ExampleSpec spec;
  spec.name = "linear_example";
  spec.marked = rb.marked;
  spec.map = rb.map({{"Y", y}, {"Z", z}});
  std::string sigma = p.sigma.empty() ? catalog_sigma(3) : p.sigma;
  check_sigma_fills(rb, {"X", "Y", "Z"}, sigma);
  spec.companion = rb.map(ab_images("A", "B", sigma));
  spec.expected = Verdict::PeriodicVertex;
  spec.notes = {"upper triangular generator Y -> Y X^(3i), Z -> Z w^(3j), w = X Y X Y'",
                "companion is the filling reducible map with sigma = " + sigma};
  return spec;
}

ExampleSpec divergence() {
  RoseBuilder rb({"x", "y"});
  ExampleSpec spec;
  spec.name = "divergence";
  spec.marked = rb.marked;
  spec.map = rb.map({{"x", "x y"}, {"y", "x"}});
  // Conjugate by the swap of x and y.
  spec.companion = rb.map({{"x", "y"}, {"y", "y x"}});
  spec.splitting = rb.edges({"x"});
  spec.expected = Verdict::Loxodromic;
  spec.notes = {"x -> xy, y -> x and its conjugate by x <-> y; the laminations differ (xx versus yy)"};
  return spec;
}

ExampleSpec reducible_periodic() {
  RoseBuilder rb({"x", "y"});
  ExampleSpec spec;
  spec.name = "reducible_periodic";
  spec.marked = rb.marked;
  spec.map = rb.map({{"x", "x y"}});
  spec.splitting = rb.edges({"y"});
  spec.expected = Verdict::PeriodicVertex;
  spec.notes = {"x -> xy, y -> y fixes the splitting with vertex group <y>"};
  return spec;
}

ExampleSpec surface_stub() {
  RoseBuilder rb({"x", "y"});
  ExampleSpec spec;
  spec.name = "surface_example";
  spec.marked = rb.marked;
  spec.map = GraphMap::identity(rb.graph);
  spec.stub = true;
  spec.notes = {"stub: the mapping class group example needs surface machinery that is not implemented",
                "the map is a placeholder identity and is not classified"};
  return spec;
}

}  // namespace

std::string catalog_sigma(unsigned m) {
  switch (m) {
    case 2: return "X Y X' Y'";
    case 3: return "X Y X Y' Z X Y X Y' Z'";
    case 4: return "X Y X' Y' Z U Z' U'";
    default: break;
  }
  auto names = fixed_names(m);
  std::vector<std::string> parts;
  for (std::size_t i = 0; i + 1 < names.size(); i += 2) {
    parts.insert(parts.end(), {names[i], names[i + 1], names[i] + "'", names[i + 1] + "'"});
  }
  if (names.size() % 2) parts.insert(parts.end(), {names.back(), names[0], names.back(), names[0] + "'"});
  return join(parts);
}

std::vector<std::string> fixture_names() {
  return {"filling_reducible", "bdd_no_periodic", "linear_example", "divergence", "reducible_periodic",
          "surface_example"};
}

std::optional<std::string> decomposition_problem(const GraphMap& f, const Decomposition& d) {
  const Graph& g = f.source();
  EdgeSet all;
  for (EdgeId e = 0; e < g.num_edges(); ++e) all.insert(e);
  EdgeSet uni = d.k1;
  uni.insert(d.k2.begin(), d.k2.end());
  if (uni != all || d.k1 == all || d.k2 == all) return "clause 1: K1 and K2 must be proper and cover the graph";
  if (!is_invariant_subgraph(f, d.k1) || !is_invariant_subgraph(f, d.k2)) return "K1 and K2 must be invariant";
  if (subgraph_core(g, d.k1) != d.k1) return "clause 2: K1 is not a core subgraph";
  std::set<Vertex> in_k1, off_k1;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    auto& side = d.k1.count(e) ? in_k1 : off_k1;
    side.insert(g.edge(e).from);
    side.insert(g.edge(e).to);
  }
  for (Vertex v : in_k1) {
    if (off_k1.count(v) && f.vertex_map()[v] != v) return "clause 2: frontier vertex of K1 is not fixed";
  }
  if (!all_components_noncontractible(g, d.k2)) return "clause 3: K2 has a contractible component";
  if (subgraph_core(g, d.k2) != d.j2) return "clause 4: J2 is not the core of K2";
  if (!is_invariant_subgraph(f, d.j2)) return "clause 4: J2 is not invariant";
  for (EdgeId e : d.k2) {
    if (d.j2.count(e) || f.image(e) == Word{forward(e)}) continue;
    const Word& img = f.image(e);
    auto tail_in_j2 = [&](const Word& w) {
      return !w.empty() && std::all_of(w.begin(), w.end(), [&](Letter l) { return d.j2.count(edge_of(l)) > 0; });
    };
    bool ok = img.size() > 1 && img.front() == forward(e) && tail_in_j2(Word(img.begin() + 1, img.end()));
    Word rev = inverse(img);
    ok = ok || (rev.size() > 1 && rev.front() == barred(e) && tail_in_j2(Word(rev.begin() + 1, rev.end())));
    if (!ok) return "clause 4: edge of K2 outside J2 is not of the form Eu";
  }
  EdgeSet meet;
  std::set_intersection(d.k1.begin(), d.k1.end(), d.j2.begin(), d.j2.end(), std::inserter(meet, meet.end()));
  if (subgraph_core(g, meet) != d.j3) return "J3 is not the core of K1 n J2";
  return std::nullopt;
}

void validate_spec(const ExampleSpec& spec) {
  if (spec.stub) return;
  const GraphMap& f = spec.map;
  if (!(f.source() == spec.marked.graph()) || !f.is_endomorphism()) fixture_invalid("map does not act on the marked graph");
  if (spec.inverse) {
    if (outer_equal(compose(f, *spec.inverse), GraphMap::identity(f.source_ptr())).verdict != OuterVerdict::Equal) {
      fixture_invalid("supplied inverse does not invert the map");
    }
  }
  if (spec.splitting) {
    try {
      validate_pair(spec.marked, *spec.splitting);
    } catch (const Error& e) {
      fixture_invalid(std::string("splitting: ") + e.what());
    }
  }
  if (!spec.decomposition) return;
  if (auto problem = decomposition_problem(f, *spec.decomposition)) fixture_invalid(*problem);
}

ExampleSpec fixture(const std::string& name, const FixtureParams& params) {
  ExampleSpec spec;
  if (name == "filling_reducible") {
    spec = filling_reducible(params);
  } else if (name == "bdd_no_periodic") {
    spec = bdd_no_periodic(params);
  } else if (name == "linear_example") {
    spec = linear_example(params);
  } else if (name == "divergence") {
    spec = divergence();
  } else if (name == "reducible_periodic") {
    spec = reducible_periodic();
  } else if (name == "surface_example") {
    spec = surface_stub();
  } else {
    invalid_input("unknown fixture '" + name + "'");
  }
  validate_spec(spec);
  return spec;
}

ExampleSpec spec_from_document(const Document& doc, const std::string& name) {
  if (!doc.marked) invalid_input("document has no MARKING section");
  if (!doc.map) invalid_input("document has no MAP section");
  ExampleSpec spec;
  spec.name = name;
  spec.marked = *doc.marked;
  spec.map = *doc.map;
  spec.inverse = doc.inverse;
  spec.splitting = doc.subgraph;
  validate_spec(spec);
  return spec;
}

std::vector<Rank2Case> rank2_battery() {
  std::vector<Rank2Case> out;
  RoseBuilder rb({"x", "y"});
  auto rose_case = [&](const std::string& name, std::array<long long, 4> m, const std::string& x,
                       const std::string& y) {
    ExampleSpec spec;
    spec.name = name;
    spec.marked = rb.marked;
    spec.map = rb.map({{"x", x}, {"y", y}});
    spec.splitting = rb.edges({"x"});
    out.push_back({name, m, spec});
  };
  rose_case("cat", {2, 1, 1, 1}, "x x y", "x y");
  rose_case("cat_transpose", {1, 1, 1, 2}, "x y", "x y y");
  rose_case("trace4", {3, 1, 2, 1}, "x y x y x", "x y");
  rose_case("trace4_transpose", {1, 2, 1, 3}, "x y", "x y x y y");
  rose_case("minus_cat", {-2, -1, -1, -1}, "y' x' x'", "y' x'");
  rose_case("golden", {1, 1, 1, 0}, "x y", "x");
  rose_case("shear", {1, 1, 0, 1}, "x", "x y");
  rose_case("minus_identity", {-1, 0, 0, -1}, "x'", "y'");
  rose_case("identity", {1, 0, 0, 1}, "x", "y");
  rose_case("quarter_turn", {0, -1, 1, 0}, "y", "x'");
  rose_case("reflection", {1, 0, 0, -1}, "x", "y'");
  rose_case("minus_shear", {-1, -1, 0, -1}, "x'", "y' x'");
  rose_case("swap", {0, 1, 1, 0}, "y", "x");

  // Finite order elements of trace +-1 act on the theta graph.
  auto theta = std::make_shared<const Graph>(Graph({"p", "q"}, {{"a", 0, 1}, {"b", 0, 1}, {"c", 0, 1}}));
  MarkedGraph tm(theta, {"x", "y"}, 0, {theta->parse("a c'"), theta->parse("b c'")});
  auto theta_case = [&](const std::string& name, std::array<long long, 4> m, std::vector<Vertex> vmap,
                        const std::vector<std::string>& images) {
    std::vector<Word> w;
    for (const auto& s : images) w.push_back(theta->parse(s));
    ExampleSpec spec;
    spec.name = name;
    spec.marked = tm;
    spec.map = GraphMap(theta, theta, vmap, w);
    spec.splitting = EdgeSet{0, 1};
    out.push_back({name, m, spec});
  };
  theta_case("theta_rotation", {-1, -1, 1, 0}, {0, 1}, {"b", "c", "a"});
  theta_case("theta_flip_rotation", {1, 1, -1, 0}, {1, 0}, {"b'", "c'", "a'"});
  for (auto& c : out) validate_spec(c.spec);
  return out;
}

}  // namespace freesplit
