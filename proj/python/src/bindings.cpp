#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "freesplit/classify.hpp"
#include "freesplit/config.hpp"
#include "freesplit/error.hpp"
#include "freesplit/report.hpp"
#include "freesplit/text_format.hpp"

namespace py = pybind11;
using namespace freesplit;

namespace {

ClassifyOptions options(const std::map<std::string, std::string>& settings) {
  ClassifyOptions opts;
  apply_config(opts, settings);
  return opts;
}

ExampleSpec load(const std::optional<std::string>& name, const std::optional<std::string>& document) {
  if (name && document) invalid_input("give a fixture name or a document, not both");
  if (name) return fixture(*name);
  if (document) return spec_from_document(parse_document(*document), "document");
  invalid_input("give a fixture name or a document");
}

// Reports cross the boundary as JSON text; the package parses them.
std::string classify_json(const std::optional<std::string>& name, const std::optional<std::string>& document,
                          const std::map<std::string, std::string>& settings) {
  auto spec = load(name, document);
  auto opts = options(settings);
  return dump(classify_report(spec, opts, classify(spec, opts)));
}

std::string fills_json(const std::vector<std::string>& classes, const std::vector<std::string>& names) {
  if (names.empty()) invalid_input("at least one basis letter");
  std::vector<CyclicWord> cs;
  for (const auto& w : classes) cs.push_back(CyclicWord::from_word(parse_word(w, names)));
  return dump(to_json(fills(cs, names.size()), names));
}

std::string w_json(const std::string& name, const std::vector<std::string>& classes, int range,
                   const std::map<std::string, std::string>& settings) {
  auto spec = fixture(name);
  auto opts = options(settings);
  WContext ctx = build_context(spec.marked, spec.map, spec.inverse, opts.w);
  const auto& names = spec.marked.basis_names();
  Json j = envelope("w", name, opts);
  if (spec.splitting) {
    auto s = one_edge(validate_pair(spec.marked, *spec.splitting));
    estimate_M(ctx, {s.elliptic, apply_power(ctx, s.elliptic, 1), apply_power(ctx, s.elliptic, -1)});
    j["m_hat"] = *ctx.m_hat();
    j["displacement"] = to_json(displacement_table(ctx, s, range), names);
  }
  Json values = Json::array();
  for (const auto& w : classes) {
    Json row = to_json(w_of(ctx, CyclicWord::from_word(parse_word(w, names))));
    row["class"] = w;
    values.push_back(row);
  }
  j["classes"] = values;
  return dump(j);
}

std::string show_fixture(const std::string& name) {
  auto spec = fixture(name);
  Document doc;
  doc.graph = spec.marked.graph_ptr();
  doc.marked = spec.marked;
  doc.map = spec.map;
  doc.inverse = spec.inverse;
  doc.subgraph = spec.splitting;
  return print_document(doc);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Free splitting complex classifier";
  py::register_exception<Error>(m, "FreesplitError", PyExc_ValueError);

  m.def("fixture_names", &fixture_names);
  m.def("show_fixture", &show_fixture, py::arg("name"));
  m.def("classify_json", &classify_json, py::arg("fixture") = py::none(), py::arg("document") = py::none(),
        py::arg("settings") = std::map<std::string, std::string>{});
  m.def("fills_json", &fills_json, py::arg("classes"), py::arg("names"));
  m.def("w_json", &w_json, py::arg("fixture"), py::arg("classes"), py::arg("range") = 4,
        py::arg("settings") = std::map<std::string, std::string>{});
  m.def(
      "rank2_classify",
      [](const std::array<long long, 4>& matrix) { return std::string(to_string(rank2_classify(matrix))); },
      py::arg("matrix"), "Row-major 2x2 integer matrix of determinant +-1.");
  m.attr("REPORT_SCHEMA") = kReportSchema;
}
