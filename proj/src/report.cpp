#include "freesplit/report.hpp"

#include <sstream>

namespace freesplit {

namespace {

Json optional_value(const std::optional<long long>& v) { return v ? Json(*v) : Json(nullptr); }

std::string edge_list(const Graph& g, const EdgeSet& h) {
  std::string out;
  for (EdgeId e : h) out += (out.empty() ? "" : " ") + g.edge(e).name;
  return out;
}

Json pair_json(const MarkedGraphPair& p) {
  return Json{{"co_edge", p.co_edge}, {"h", edge_list(p.graph(), p.h)}, {"text", pair_to_text(p)}};
}

}  // namespace

Json envelope(const std::string& kind, const std::string& subject, const ClassifyOptions& opts) {
  Json params = Json::object();
  for (const auto& [k, v] : settings_of(opts)) params[k] = std::stoll(v);
  return Json{{"schema", kReportSchema}, {"kind", kind}, {"subject", subject}, {"parameters", params}};
}

Json to_json(const FillsVerdict& v, const std::vector<std::string>& names) {
  Json minimized = Json::array();
  for (const auto& c : v.minimized) minimized.push_back(format_word(c.letters(), names));
  Json moves = Json::array();
  for (const auto& m : v.moves) {
    std::string cut;
    for (std::size_t l = 0; l < m.cut.size(); ++l) {
      if (m.cut[l]) cut += (cut.empty() ? "" : " ") + format_word(Word{static_cast<Letter>(l)}, names);
    }
    moves.push_back(Json{{"multiplier", format_word(Word{m.multiplier}, names)}, {"cut", cut}});
  }
  Json j{{"verdict", to_string(v.kind)},
         {"total_length", v.total_length},
         {"minimized", minimized},
         {"moves", moves},
         {"whitehead_graph", v.graph_summary},
         {"reason", v.reason}};
  if (v.kind == FillsKind::ProperFactor) j["witness"] = v.witness.describe(names);
  return j;
}

Json to_json(const WResult& r) {
  Json j{{"defined", r.defined}};
  if (r.defined) {
    j["value"] = r.value;
    j["run_top"] = r.run_top;
    j["first_miss"] = r.first_miss;
  } else {
    j["reason"] = r.reason;
  }
  if (r.forward_ok) j["forward_ok"] = *r.forward_ok;
  return j;
}

Json to_json(const DisplacementTable& t, const std::vector<std::string>& names) {
  Json rows = Json::array();
  for (const auto& r : t.rows) rows.push_back(Json{{"m", r.m}, {"transported", r.transported}, {"raw", optional_value(r.raw)}});
  return Json{{"base", t.base},
              {"witness", format_word(t.witness.letters(), names)},
              {"slope_exact", t.slope_exact},
              {"raw_within_m", t.raw_within_m},
              {"rows", rows}};
}

Json to_json(const LipschitzReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"first", row.first},
                        {"second", row.second},
                        {"w1", optional_value(row.w1)},
                        {"w2", optional_value(row.w2)},
                        {"delta", row.delta},
                        {"within", row.within},
                        {"note", row.note}});
  }
  return Json{{"m_hat", r.m_hat},
              {"bound", 8 * r.m_hat},
              {"checked", r.checked},
              {"violations", r.violations},
              {"skipped", r.skipped},
              {"max_ratio", r.max_ratio},
              {"rows", rows}};
}

Json to_json(const DivergenceReport& r) {
  auto table = [](const std::vector<DivergenceRow>& rows) {
    Json out = Json::array();
    for (const auto& row : rows) out.push_back(Json{{"exponent", row.exponent}, {"value", optional_value(row.value)}});
    return out;
  };
  return Json{{"psi_table", table(r.psi_table)},
              {"phi_table", table(r.phi_table)},
              {"psi_band", r.psi_band},
              {"bounded", r.bounded},
              {"phi_slope", optional_value(r.phi_slope)},
              {"verdict", r.verdict}};
}

Json to_json(const BoundedChain& c) {
  Json pairs = Json::array();
  for (std::size_t i = 0; i < c.pairs.size(); ++i) {
    Json p = pair_json(c.pairs[i]);
    p["label"] = c.labels[i];
    pairs.push_back(p);
  }
  Json links = Json::array();
  for (const auto& l : c.links) {
    links.push_back(Json{{"kind", l.kind == ChainLinkKind::Face ? "face" : "equal"},
                         {"from", l.from},
                         {"to", l.to},
                         {"verified", l.verified},
                         {"note", l.note}});
  }
  return Json{{"k", c.k}, {"moves", c.moves}, {"verified", c.verified}, {"pairs", pairs}, {"links", links}};
}

Json to_json(const PeriodicWitness& p) {
  Json edges = Json::array();
  if (p.relation.witness) {
    const Graph& g = p.splitting.pair.graph();
    for (const auto& m : p.relation.witness->edges) {
      edges.push_back(Json{{"edge", g.edge(m.source).name},
                           {"image", g.format(Word{m.image})},
                           {"before", g.format(m.before)},
                           {"after", g.format(m.after)}});
    }
  }
  const char* status = p.relation.status == RelationStatus::Holds       ? "Holds"
                       : p.relation.status == RelationStatus::FailsClause ? "FailsClause"
                                                                          : "Unknown";
  return Json{{"splitting", pair_json(p.splitting.pair)},
              {"elliptic", p.splitting.elliptic.describe(p.splitting.pair.marked.basis_names())},
              {"relation", status},
              {"edge_matches", edges}};
}

Json to_json(const DistanceResult& d) {
  Json path = Json::array();
  for (const auto& s : d.path) {
    Json p = pair_json(s.pair);
    p["move"] = s.move;
    path.push_back(p);
  }
  return Json{{"distance_upper", d.distance ? Json(*d.distance) : Json(nullptr)}, {"path", path}};
}

Json to_json(const Classification& c) {
  Json j{{"verdict", to_string(c.verdict)},
         {"power", c.power},
         {"witness_kind", c.witness_kind},
         {"stage", c.stage},
         {"reason", c.reason},
         {"strata", c.strata},
         {"laminations", c.laminations},
         {"joint", c.joint}};
  if (c.tracked) {
    const auto& names = c.tracked->pair.marked.basis_names();
    j["tracked_splitting"] = c.tracked->elliptic.describe(names);
    if (c.table) j["displacement"] = to_json(*c.table, names);
  }
  if (c.m_hat) j["m_hat"] = *c.m_hat;
  if (c.lipschitz) {
    j["lipschitz"] = Json{{"bound", 8 * c.lipschitz->m_hat},
                          {"checked", c.lipschitz->checked},
                          {"violations", c.lipschitz->violations},
                          {"skipped", c.lipschitz->skipped},
                          {"max_ratio", c.lipschitz->max_ratio}};
  }
  if (c.distance_lower) j["distance_lower_bound"] = *c.distance_lower;
  if (c.chain) j["chain"] = to_json(*c.chain);
  if (c.periodic) j["periodic"] = to_json(*c.periodic);
  return j;
}

Json classify_report(const ExampleSpec& spec, const ClassifyOptions& opts, const Classification& c) {
  Json j = envelope("classify", spec.name, opts);
  j["notes"] = spec.notes;
  if (spec.expected) j["expected"] = to_string(*spec.expected);
  j["classification"] = to_json(c);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string summary(const ExampleSpec& spec, const Classification& c) {
  std::ostringstream out;
  out << spec.name << ": " << to_string(c.verdict) << "\n";
  out << "  power " << c.power << ", witness " << c.witness_kind << "\n";
  for (const auto& s : c.strata) out << "  stratum " << s << "\n";
  for (std::size_t i = 0; i < c.laminations.size(); ++i) out << "  lamination " << i << " " << c.laminations[i] << "\n";
  if (!c.joint.empty()) out << "  jointly " << c.joint << "\n";
  if (c.table) {
    out << "  W(S) = " << c.table->base << ", M = " << c.m_hat.value_or(0) << ", table";
    for (const auto& r : c.table->rows) out << " " << r.m << ":" << r.transported;
    out << "\n";
  }
  if (c.lipschitz) {
    out << "  adjacent pairs " << c.lipschitz->checked << " checked, " << c.lipschitz->violations
        << " beyond 8 M\n";
  }
  if (c.distance_lower) out << "  d(S, S phi^" << c.table->rows.back().m << ") >= " << *c.distance_lower << "\n";
  if (c.chain) out << "  chain of " << c.chain->moves << " moves, k = " << c.chain->k << "\n";
  if (c.periodic) out << "  invariant splitting " << c.periodic->splitting.elliptic.describe(c.periodic->splitting.pair.marked.basis_names()) << "\n";
  if (!c.stage.empty()) out << "  stopped at " << c.stage << ": " << c.reason << "\n";
  return out.str();
}

}  // namespace freesplit
