// freesplit: classify outer automorphisms by their action on the free
// splitting complex, and expose the pieces of the computation.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "freesplit/classify.hpp"
#include "freesplit/config.hpp"
#include "freesplit/error.hpp"
#include "freesplit/report.hpp"
#include "freesplit/text_format.hpp"

using namespace freesplit;

namespace {

struct Common {
  std::string fixture;
  std::string input;
  std::string config;
  std::string out;
  bool json = false;
  unsigned power = 0;
  std::size_t seg_len = 0;
  unsigned horizon = 0;
  std::size_t budget = 0;
};

void add_common(CLI::App* app, Common& c) {
  auto* fx = app->add_option("--fixture", c.fixture, "Catalog example name");
  auto* in = app->add_option("--input", c.input, "Text document with MARKING and MAP sections");
  fx->excludes(in);
  app->add_option("--config", c.config, "key = value settings file");
  app->add_option("--power", c.power, "Replace the map by this power (0: automatic)");
  app->add_option("--seg-len", c.seg_len, "Length L of the central leaf subwords");
  app->add_option("--horizon", c.horizon, "Forward and backward iteration horizons");
  app->add_option("--budget", c.budget, "Orbit length cap in letters");
  app->add_option("--out", c.out, "Directory for report files");
  app->add_flag("--json", c.json, "Print JSON instead of text");
}

// Defaults, then the config file, then the environment, then flags.
ClassifyOptions options_from(const Common& c) {
  ClassifyOptions opts;
  if (!c.config.empty()) apply_config(opts, read_config(c.config));
  apply_env(opts);
  if (c.power) opts.power = c.power;
  if (c.seg_len) opts.w.attraction.segment_length = c.seg_len;
  if (c.horizon) {
    opts.w.attraction.forward_horizon = c.horizon;
    opts.w.attraction.backward_horizon = c.horizon;
  }
  if (c.budget) opts.w.length_cap = c.budget;
  opts.w.attraction.validate();
  return opts;
}

ExampleSpec load(const Common& c) {
  if (!c.fixture.empty()) return fixture(c.fixture);
  if (!c.input.empty()) {
    std::string name = std::filesystem::path(c.input).stem().string();
    return spec_from_document(read_document(c.input), name);
  }
  invalid_input("give --fixture NAME or --input FILE");
}

void emit(const Common& c, const std::string& file, const Json& j, const std::string& text) {
  std::cout << (c.json ? dump(j) : text);
  if (!c.out.empty()) {
    std::filesystem::create_directories(c.out);
    write_text((std::filesystem::path(c.out) / file).string(), dump(j));
  }
}

std::optional<OneEdgeSplitting> spec_splitting(const ExampleSpec& spec) {
  if (!spec.splitting) return std::nullopt;
  auto p = validate_pair(spec.marked, *spec.splitting);
  if (p.co_edge != 1) return std::nullopt;
  return one_edge(p);
}

int run_classify(const Common& c) {
  auto spec = load(c);
  auto opts = options_from(c);
  auto result = classify(spec, opts);
  emit(c, spec.name + ".classify.json", classify_report(spec, opts, result), summary(spec, result));
  return 0;
}

int run_w(const Common& c, const std::vector<std::string>& classes, int range) {
  auto spec = load(c);
  auto opts = options_from(c);
  GraphMap f = opts.power ? power(spec.map, opts.power) : spec.map;
  std::optional<GraphMap> inv;
  if (spec.inverse) inv = opts.power ? power(*spec.inverse, opts.power) : *spec.inverse;
  WContext ctx = build_context(spec.marked, f, inv, opts.w);
  const auto& names = spec.marked.basis_names();
  Json j = envelope("w", spec.name, opts);
  std::ostringstream text;
  auto s = spec_splitting(spec);
  if (s) {
    estimate_M(ctx, {s->elliptic, apply_power(ctx, s->elliptic, 1), apply_power(ctx, s->elliptic, -1)});
    auto table = displacement_table(ctx, *s, range);
    j["m_hat"] = *ctx.m_hat();
    j["splitting"] = s->elliptic.describe(names);
    j["displacement"] = to_json(table, names);
    text << "W(S) = " << table.base << " for S with vertex groups " << s->elliptic.describe(names) << "\n";
    text << "M = " << *ctx.m_hat() << "\n";
    for (const auto& r : table.rows) {
      text << "  m = " << r.m << ": W(S phi^m) = " << r.transported;
      if (r.raw) text << " (raw " << *r.raw << ")";
      text << "\n";
    }
    text << "slope " << (table.slope_exact ? "exact" : "inexact") << "\n";
  }
  Json values = Json::array();
  for (const auto& w : classes) {
    auto r = w_of(ctx, CyclicWord::from_word(parse_word(w, names)));
    Json row = to_json(r);
    row["class"] = w;
    values.push_back(row);
    text << "w(" << w << ") = " << (r.defined ? std::to_string(r.value) : "undefined: " + r.reason) << "\n";
  }
  j["classes"] = values;
  emit(c, spec.name + ".w.json", j, text.str());
  return 0;
}

int run_leaf(const Common& c, std::size_t show) {
  auto spec = load(c);
  auto opts = options_from(c);
  GraphMap f = opts.power ? power(spec.map, opts.power) : spec.map;
  auto lams = all_laminations(spec.marked, f, opts.w.lamination);
  const Graph& g = f.source();
  Json j = envelope("leaf", spec.name, opts);
  Json list = Json::array();
  std::ostringstream text;
  for (auto& lam : lams) {
    auto v = lamination_fills(lam, opts.whitehead);
    Word seg = lam.defining_segment(std::min(show, lam.deepest().length()));
    Json entry{{"stratum", lam.stratum},
               {"seed", g.edge(lam.seed).name},
               {"depth", lam.depth()},
               {"deepest_length", lam.deepest().length()},
               {"stabilization_depth", lam.stabilization_depth},
               {"central_segment", g.format(seg)},
               {"fills", to_json(v, spec.marked.basis_names())}};
    list.push_back(entry);
    text << "stratum " << lam.stratum << " seed " << g.edge(lam.seed).name << " depth " << lam.depth() << " length "
         << lam.deepest().length() << ": " << to_string(v.kind);
    if (v.kind == FillsKind::ProperFactor) text << " in " << v.witness.describe(spec.marked.basis_names());
    text << "\n  " << g.format(seg) << "\n";
  }
  j["laminations"] = list;
  if (lams.size() > 1) {
    auto joint = laminations_jointly_fill(lams, opts.whitehead);
    j["joint"] = to_json(joint, spec.marked.basis_names());
    text << "jointly: " << to_string(joint.kind) << "\n";
  }
  emit(c, spec.name + ".leaf.json", j, text.str());
  return 0;
}

int run_fills(const Common& c, const std::string& basis, const std::vector<std::string>& classes) {
  std::vector<std::string> names;
  std::istringstream in(basis);
  for (std::string n; in >> n;) names.push_back(n);
  if (names.empty()) invalid_input("--names needs at least one basis letter");
  std::vector<CyclicWord> cs;
  for (const auto& w : classes) cs.push_back(CyclicWord::from_word(parse_word(w, names)));
  ClassifyOptions opts = options_from(c);
  auto v = fills(cs, names.size(), opts.whitehead);
  Json j = envelope("fills", basis, opts);
  j["classes"] = classes;
  j["result"] = to_json(v, names);
  std::ostringstream text;
  text << to_string(v.kind);
  if (v.kind == FillsKind::ProperFactor) text << " in " << v.witness.describe(names);
  if (!v.reason.empty()) text << " (" << v.reason << ")";
  text << "\n";
  emit(c, "fills.json", j, text.str());
  return 0;
}

int run_distance(const Common& c, unsigned k) {
  auto spec = load(c);
  auto opts = options_from(c);
  Json j = envelope("distance", spec.name, opts);
  j["k"] = k;
  std::ostringstream text;
  if (spec.decomposition) {
    auto chain = bounded_path_witness(spec, k);
    j["method"] = "bounded-orbit chain";
    j["distance_upper"] = chain.moves;
    j["chain"] = to_json(chain);
    text << "d(<G, J3>, <G, J3> f^" << k << ") <= " << chain.moves << (chain.verified ? "" : " (unverified)") << "\n";
    for (std::size_t i = 0; i < chain.pairs.size(); ++i) text << "  " << chain.labels[i] << "\n";
  } else {
    auto s = spec_splitting(spec);
    if (!s) invalid_input("fixture has neither decomposition data nor a one-edge splitting");
    auto moved = remark(s->pair, power(spec.map, k));
    auto d = fs_distance_upper(s->pair, moved);
    j["method"] = "search";
    j["result"] = to_json(d);
    text << "d(S, S f^" << k << ") <= " << (d.distance ? std::to_string(*d.distance) : "unknown") << "\n";
  }
  emit(c, spec.name + ".distance.json", j, text.str());
  return 0;
}

int run_report(const Common& c) {
  if (c.out.empty()) invalid_input("report needs --out DIR");
  auto spec = load(c);
  auto opts = options_from(c);
  auto result = classify(spec, opts);
  std::filesystem::create_directories(c.out);
  const auto dir = std::filesystem::path(c.out);
  write_text((dir / (spec.name + ".classify.json")).string(), dump(classify_report(spec, opts, result)));
  write_text((dir / (spec.name + ".summary.txt")).string(), summary(spec, result));
  if (result.chain) {
    write_text((dir / (spec.name + ".chain.json")).string(), dump(to_json(*result.chain)));
  }
  if (result.verdict == Verdict::Loxodromic && result.tracked) {
    GraphMap f = power(spec.map, result.power);
    std::optional<GraphMap> inv;
    if (spec.inverse) inv = power(*spec.inverse, result.power);
    WContext ctx = build_context(spec.marked, f, inv, opts.w);
    const auto& s = *result.tracked;
    estimate_M(ctx, {s.elliptic, apply_power(ctx, s.elliptic, 1), apply_power(ctx, s.elliptic, -1)});
    Json lip = envelope("lipschitz", spec.name, opts);
    lip["result"] = to_json(lipschitz_check(ctx, adjacent_pairs(spec.marked, 40)));
    write_text((dir / (spec.name + ".lipschitz.json")).string(), dump(lip));
  }
  std::cout << summary(spec, result);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free splitting complex classifier"};
  app.require_subcommand(1);

  Common common;
  auto* classify_cmd = app.add_subcommand("classify", "Loxodromic, bounded orbits or periodic vertex, with a witness");
  add_common(classify_cmd, common);

  std::vector<std::string> w_classes;
  int range = 4;
  auto* w_cmd = app.add_subcommand("w", "W of the tracked splitting, its displacement table and w of classes");
  add_common(w_cmd, common);
  w_cmd->add_option("--class", w_classes, "Conjugacy class in basis letters");
  w_cmd->add_option("--range", range, "Displacement table half-width");

  std::size_t show = 64;
  auto* leaf_cmd = app.add_subcommand("leaf", "Lamination leaf segments and filling verdicts");
  add_common(leaf_cmd, common);
  leaf_cmd->add_option("--show", show, "Letters of the central segment to print");

  std::string basis = "x y";
  std::vector<std::string> fill_classes;
  auto* fills_cmd = app.add_subcommand("fills", "Do the classes fill the free group?");
  add_common(fills_cmd, common);
  fills_cmd->add_option("--names", basis, "Basis letters, space separated");
  fills_cmd->add_option("--class", fill_classes, "Conjugacy class in basis letters")->required();

  unsigned k = 1;
  auto* distance_cmd = app.add_subcommand("distance", "Upper bound for the distance from S to S f^k");
  add_common(distance_cmd, common);
  distance_cmd->add_option("--k", k, "Exponent");

  auto* report_cmd = app.add_subcommand("report", "Write every report for an example into --out");
  add_common(report_cmd, common);

  bool list = false;
  std::string show_name;
  auto* fixtures_cmd = app.add_subcommand("fixtures", "Example catalog");
  fixtures_cmd->add_flag("--list", list, "List the catalog");
  fixtures_cmd->add_option("--show", show_name, "Print one example as a text document");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*classify_cmd) return run_classify(common);
    if (*w_cmd) return run_w(common, w_classes, range);
    if (*leaf_cmd) return run_leaf(common, show);
    if (*fills_cmd) return run_fills(common, basis, fill_classes);
    if (*distance_cmd) return run_distance(common, k);
    if (*report_cmd) return run_report(common);
    if (*fixtures_cmd) {
      if (!show_name.empty()) {
        auto spec = fixture(show_name);
        Document doc;
        doc.graph = spec.marked.graph_ptr();
        doc.marked = spec.marked;
        doc.map = spec.map;
        doc.inverse = spec.inverse;
        doc.subgraph = spec.splitting;
        std::cout << print_document(doc);
        return 0;
      }
      for (const auto& name : fixture_names()) {
        auto spec = fixture(name);
        std::cout << name << (spec.expected ? std::string(" [") + to_string(*spec.expected) + "]" : "") << "\n";
        for (const auto& n : spec.notes) std::cout << "  " << n << "\n";
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return e.kind() == ErrorKind::InvalidInput ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
