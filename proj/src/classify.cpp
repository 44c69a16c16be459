#include "freesplit/classify.hpp"

#include <numeric>

#include "freesplit/error.hpp"

namespace freesplit {

namespace {

constexpr unsigned kMaxPower = 12;

// Oriented stratum letter in each edge image when the block is a
// permutation matrix.
std::optional<std::vector<std::pair<EdgeId, Letter>>> signed_permutation(const GraphMap& f, const Stratum& s) {
  std::vector<std::pair<EdgeId, Letter>> out;
  std::vector<int> hits(f.source().num_edges(), 0);
  for (EdgeId e : s.edges) {
    std::optional<Letter> only;
    for (Letter l : f.image(e)) {
      if (std::find(s.edges.begin(), s.edges.end(), edge_of(l)) == s.edges.end()) continue;
      if (only) return std::nullopt;
      only = l;
    }
    if (!only) return std::nullopt;
    ++hits[edge_of(*only)];
    out.emplace_back(e, *only);
  }
  for (EdgeId e : s.edges) {
    if (hits[e] != 1) return std::nullopt;
  }
  return out;
}

unsigned signed_order(const std::vector<std::pair<EdgeId, Letter>>& perm) {
  auto image = [&](Letter l) {
    for (const auto& [e, img] : perm) {
      if (e == edge_of(l)) return is_barred(l) ? inv(img) : img;
    }
    return l;
  };
  unsigned order = 1;
  for (const auto& [e, img] : perm) {
    Letter start = forward(e), cur = img;
    unsigned n = 1;
    while (cur != start && n <= 2 * perm.size()) {
      cur = image(cur);
      ++n;
    }
    order = std::lcm(order, n);
  }
  return order;
}

bool same_marking(const MarkedGraph& a, const MarkedGraph& b) {
  return a.graph() == b.graph() && a.base() == b.base() && a.marking() == b.marking();
}

bool is_face(const MarkedGraphPair& from, const MarkedGraphPair& to) {
  if (!same_marking(from.marked, to.marked) || from.co_edge < 2) return false;
  for (const auto& f : faces(from)) {
    if (f.h == to.h) return true;
  }
  return false;
}

GraphMap restricted(const GraphMap& f, const EdgeSet& edges, bool inside) {
  const Graph& g = f.source();
  std::vector<Vertex> vmap(g.num_vertices());
  std::iota(vmap.begin(), vmap.end(), Vertex{0});
  std::vector<Word> images;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    bool moves = (edges.count(e) > 0) == inside;
    images.push_back(moves ? f.image(e) : Word{forward(e)});
    if (moves) {
      vmap[g.edge(e).from] = f.vertex_map()[g.edge(e).from];
      vmap[g.edge(e).to] = f.vertex_map()[g.edge(e).to];
    }
  }
  return GraphMap(f.source_ptr(), f.source_ptr(), vmap, images);
}

MarkedGraphPair pair_on(const MarkedGraph& g, const EdgeSet& h, const std::string& what) {
  try {
    return validate_pair(g, h);
  } catch (const Error& e) {
    invalid_input(what + " does not give a marked graph pair: " + e.what());
  }
}

std::string describe_stratum(const Graph& g, const Stratum& s) {
  std::string out = to_string(s.kind);
  out += " {";
  for (std::size_t i = 0; i < s.edges.size(); ++i) out += (i ? ", " : "") + g.edge(s.edges[i]).name;
  return out + "}";
}

// One-edge splitting with a defined W: the spec's splitting, else the first
// natural edge whose complement is a valid pair.
std::optional<OneEdgeSplitting> tracked_splitting(const ExampleSpec& spec, const WContext& ctx) {
  std::vector<EdgeSet> choices;
  if (spec.splitting) choices.push_back(*spec.splitting);
  const Graph& g = spec.marked.graph();
  for (const auto& chain : natural_edges(g)) {
    EdgeSet h;
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      if (std::find(chain.begin(), chain.end(), e) == chain.end()) h.insert(e);
    }
    choices.push_back(h);
  }
  for (const auto& h : choices) {
    try {
      auto p = validate_pair(spec.marked, h);
      if (p.co_edge != 1) continue;
      auto s = one_edge(p);
      W_of_splitting(ctx, s);
      return s;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InvalidInput && e.kind() != ErrorKind::NotApplicable &&
          e.kind() != ErrorKind::BudgetExhausted) {
        throw;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

unsigned rotationless_power(const GraphMap& f) {
  unsigned p = 1;
  for (const auto& s : strata(f).strata) {
    if (s.kind == StratumKind::EG) continue;
    if (auto perm = signed_permutation(f, s)) p = std::lcm(p, signed_order(*perm));
  }
  // Vertex permutation of the map.
  const auto& vm = f.vertex_map();
  for (Vertex v = 0; v < vm.size(); ++v) {
    Vertex cur = vm[v];
    unsigned n = 1;
    while (cur != v && n <= vm.size()) {
      cur = vm[cur];
      ++n;
    }
    if (cur == v) p = std::lcm(p, n);
  }
  return p <= kMaxPower ? p : 1;
}

PeriodicWitness periodic_vertex_witness(const MarkedGraph& g, const GraphMap& f) {
  auto filt = strata(f);
  if (filt.strata.empty()) invalid_input("map has no edges");
  const Stratum& top = filt.strata.back();
  if (top.kind == StratumKind::EG) not_applicable("top stratum is exponentially growing");
  std::vector<EdgeId> order;
  if (top.edges.size() == 1) order.push_back(top.edges[0]);
  for (std::size_t i = filt.strata.size(); i-- > 0;) {
    if (filt.strata[i].kind == StratumKind::EG) continue;
    for (EdgeId e : filt.strata[i].edges) {
      if (std::find(order.begin(), order.end(), e) == order.end()) order.push_back(e);
    }
  }
  const Graph& graph = f.source();
  std::string last;
  for (EdgeId e : order) {
    EdgeSet h;
    for (EdgeId x = 0; x < graph.num_edges(); ++x) {
      if (x != e) h.insert(x);
    }
    if (!is_invariant_subgraph(f, h)) continue;
    MarkedGraphPair p;
    try {
      p = validate_pair(g, h);
    } catch (const Error& err) {
      last = err.what();
      continue;
    }
    if (p.co_edge != 1) continue;
    auto rel = pair_relation_check(f, p, remark(p, f));
    if (rel.status == RelationStatus::Holds) return {one_edge(p), rel};
    last = rel.reason;
  }
  not_applicable("no invariant one-edge splitting found" + (last.empty() ? "" : ": " + last));
}

BoundedChain bounded_path_witness(const ExampleSpec& spec, unsigned k) {
  if (!spec.decomposition) invalid_input("no decomposition data");
  const GraphMap& f = spec.map;
  const Decomposition& d = *spec.decomposition;
  if (auto problem = decomposition_problem(f, d)) invalid_input(*problem);

  BoundedChain c;
  c.k = k;
  c.f1 = restricted(f, d.k1, true);
  c.f2 = restricted(f, d.k1, false);
  if (!(compose(c.f2, c.f1) == f)) invalid_input("f differs from f2 f1 edgewise");
  const GraphMap f1k = power(c.f1, k), f2k = power(c.f2, k), fk = power(f, k);

  const MarkedGraph& m = spec.marked;
  auto j3 = pair_on(m, d.j3, "J3");
  auto k1 = pair_on(m, d.k1, "K1");
  auto j2 = pair_on(m, d.j2, "J2");
  c.pairs = {j3, k1, remark(k1, f1k), remark(j3, f1k), remark(j2, f1k), remark(j2, fk), remark(j3, fk)};
  c.labels = {"<G, J3>", "<G, K1>", "<G, K1> f1^k", "<G, J3> f1^k", "<G, J2> f1^k", "<G, J2> f^k", "<G, J3> f^k"};

  auto face = [&](std::size_t from, std::size_t to) {
    ChainLink l{ChainLinkKind::Face, from, to, is_face(c.pairs[from], c.pairs[to]), ""};
    if (!l.verified) l.note = "not a face";
    c.links.push_back(l);
  };
  auto equal = [&](std::size_t from, std::size_t to, const GraphMap& h) {
    auto rel = pair_relation_check(h, c.pairs[from], c.pairs[to]);
    ChainLink l{ChainLinkKind::Equal, from, to, rel.status == RelationStatus::Holds, rel.reason};
    c.links.push_back(l);
  };
  face(0, 1);
  equal(1, 2, f1k);
  face(3, 2);
  face(3, 4);
  equal(4, 5, f2k);
  face(6, 5);

  c.moves = 0;
  c.verified = true;
  for (const auto& l : c.links) {
    if (l.kind == ChainLinkKind::Face) ++c.moves;
    c.verified = c.verified && l.verified;
  }
  return c;
}

Classification classify(const ExampleSpec& spec, const ClassifyOptions& options) {
  Classification out;
  if (spec.stub) {
    out.stage = "input";
    out.witness_kind = "none";
    out.reason = "fixture is a stub";
    return out;
  }
  validate_spec(spec);
  out.power = options.power ? options.power : rotationless_power(spec.map);
  const GraphMap g = power(spec.map, out.power);
  const Graph& graph = g.source();

  auto filt = strata(g);
  for (const auto& s : filt.strata) out.strata.push_back(describe_stratum(graph, s));

  std::vector<LaminationApprox> lams;
  try {
    lams = all_laminations(spec.marked, g, options.w.lamination);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BudgetExhausted) throw;
    out.stage = "laminations";
    out.reason = e.what();
    out.witness_kind = "none";
    return out;
  }
  std::vector<FillsVerdict> verdicts(lams.size());
  bool some_fills = false;
  for (std::size_t i = 0; i < lams.size(); ++i) {
    verdicts[i] = lamination_fills(lams[i], options.whitehead);
    out.laminations.push_back(to_string(verdicts[i].kind));
    some_fills = some_fills || verdicts[i].kind == FillsKind::Fills;
  }

  if (some_fills) {
    out.stage = "displacement";
    try {
      std::optional<GraphMap> inv;
      if (spec.inverse) inv = power(*spec.inverse, out.power);
      WContext ctx = build_context(spec.marked, g, inv, options.w);
      auto s = tracked_splitting(spec, ctx);
      if (!s) {
        out.reason = "no one-edge splitting with a defined W";
        out.witness_kind = "none";
        return out;
      }
      estimate_M(ctx, {s->elliptic, apply_power(ctx, s->elliptic, 1), apply_power(ctx, s->elliptic, -1)});
      auto table = displacement_table(ctx, *s, options.range);
      out.m_hat = ctx.m_hat();
      out.tracked = s;
      out.table = table;
      if (!table.slope_exact || !table.raw_within_m) {
        out.witness_kind = "none";
        out.reason = table.slope_exact ? "raw recomputation drifted past M" : "transported table is not exact";
        return out;
      }
      out.lipschitz = lipschitz_check(ctx, adjacent_pairs(spec.marked, options.lipschitz_pairs));
      if (out.lipschitz->violations > 0) {
        out.witness_kind = "none";
        out.reason = std::to_string(out.lipschitz->violations) + " adjacent pairs move W by more than 8 M";
        return out;
      }
      out.verdict = Verdict::Loxodromic;
      out.stage.clear();
      out.witness_kind = "displacement-table";
      if (*out.m_hat > 0) out.distance_lower = static_cast<double>(options.range) / (8.0 * static_cast<double>(*out.m_hat));
    } catch (const Error& e) {
      out.witness_kind = "none";
      out.reason = e.what();
    }
    return out;
  }

  FillsKind joint = FillsKind::ProperFactor;
  if (!lams.empty()) {
    auto jv = laminations_jointly_fill(lams, options.whitehead);
    joint = jv.kind;
    out.joint = to_string(jv.kind);
    if (jv.kind == FillsKind::Unknown) {
      out.stage = "joint-fills";
      out.reason = jv.reason;
      out.witness_kind = "none";
      return out;
    }
  }

  if (joint == FillsKind::ProperFactor) {
    try {
      out.periodic = periodic_vertex_witness(spec.marked, g);
      out.verdict = Verdict::PeriodicVertex;
      out.witness_kind = "invariant-splitting";
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotApplicable) throw;
      out.stage = "periodic-vertex";
      out.reason = e.what();
      out.witness_kind = "none";
    }
    return out;
  }

  if (!spec.decomposition) {
    out.verdict = Verdict::BoundedOrbits;
    out.witness_kind = "by-theorem";
    out.reason = "laminations fill jointly; no decomposition data, so no chain is built";
    return out;
  }
  ExampleSpec powered = spec;
  powered.map = g;
  powered.inverse.reset();
  try {
    out.chain = bounded_path_witness(powered, options.chain_exponent);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InvalidInput) throw;
    out.stage = "bounded-chain";
    out.reason = e.what();
    out.witness_kind = "none";
    return out;
  }
  if (out.chain->verified) {
    out.verdict = Verdict::BoundedOrbits;
    out.witness_kind = "chain";
  } else {
    out.stage = "bounded-chain";
    out.reason = "a chain link failed verification";
    out.witness_kind = "none";
  }
  return out;
}

const char* to_string(Rank2Verdict v) { return v == Rank2Verdict::Loxodromic ? "Loxodromic" : "NotLoxodromic"; }

Rank2Verdict rank2_classify(const std::array<long long, 4>& m) {
  const long long det = m[0] * m[3] - m[1] * m[2];
  const long long tr = m[0] + m[3];
  if (det != 1 && det != -1) invalid_input("determinant must be 1 or -1");
  // Orientation reversing: eigenvalues are real with product -1, hyperbolic
  // unless the trace vanishes.
  if (det == -1) return tr != 0 ? Rank2Verdict::Loxodromic : Rank2Verdict::NotLoxodromic;
  return std::llabs(tr) > 2 ? Rank2Verdict::Loxodromic : Rank2Verdict::NotLoxodromic;
}

}  // namespace freesplit
