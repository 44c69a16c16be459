#include "freesplit/text_format.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "freesplit/error.hpp"

namespace freesplit {

namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

std::string join(const std::vector<std::string>& v, std::size_t from) {
  std::string out;
  for (std::size_t i = from; i < v.size(); ++i) {
    if (i > from) out += ' ';
    out += v[i];
  }
  return out;
}

using Lines = std::vector<std::vector<std::string>>;

struct Sections {
  std::vector<std::string> vertices;
  Lines edges, marking, map, vmap, inverse, inverse_vmap;
  std::optional<std::string> marking_base;
  std::optional<std::vector<std::string>> h;
};

Sections split(const std::string& text) {
  Sections s;
  std::istringstream in(text);
  std::string line;
  Lines* current = nullptr;
  bool have_vertices = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto tok = tokens(line);
    if (tok.empty()) continue;
    const std::string& head = tok[0];
    if (head == "VERTICES") {
      s.vertices.assign(tok.begin() + 1, tok.end());
      have_vertices = true;
      current = nullptr;
    } else if (head == "EDGES") {
      current = &s.edges;
    } else if (head == "MARKING") {
      if (tok.size() > 2) invalid_input("line " + std::to_string(lineno) + ": MARKING takes one base vertex");
      if (tok.size() == 2) s.marking_base = tok[1];
      current = &s.marking;
    } else if (head == "MAP") {
      current = &s.map;
    } else if (head == "VMAP") {
      current = &s.vmap;
    } else if (head == "INVERSE") {
      current = &s.inverse;
    } else if (head == "INVERSE_VMAP") {
      current = &s.inverse_vmap;
    } else if (head == "H") {
      s.h = std::vector<std::string>(tok.begin() + 1, tok.end());
      current = nullptr;
    } else {
      if (!current) invalid_input("line " + std::to_string(lineno) + ": content outside a section");
      current->push_back(tok);
    }
  }
  if (!have_vertices) invalid_input("missing VERTICES section");
  return s;
}

GraphMap build_map(const std::shared_ptr<const Graph>& g, const Lines& map, const Lines& vmap) {
  const Graph& gr = *g;
  std::vector<std::optional<Word>> images(gr.num_edges());
  for (const auto& line : map) {
    auto e = gr.find_edge(line[0]);
    if (!e) invalid_input("MAP names unknown edge '" + line[0] + "'");
    if (images[*e]) invalid_input("MAP gives edge '" + line[0] + "' twice");
    images[*e] = gr.parse(join(line, 1));
  }
  std::vector<Word> imgs;
  for (EdgeId e = 0; e < gr.num_edges(); ++e) {
    if (!images[e]) invalid_input("MAP misses edge '" + gr.edge_names()[e] + "'");
    imgs.push_back(*images[e]);
  }
  std::vector<std::optional<Vertex>> vm(gr.num_vertices());
  for (const auto& line : vmap) {
    if (line.size() != 2) invalid_input("VMAP lines are 'vertex image'");
    auto a = gr.find_vertex(line[0]);
    auto b = gr.find_vertex(line[1]);
    if (!a || !b) invalid_input("VMAP names an unknown vertex");
    vm[*a] = *b;
  }
  for (EdgeId e = 0; e < gr.num_edges(); ++e) {
    if (imgs[e].empty()) continue;
    Vertex from = gr.edge(e).from, to = gr.edge(e).to;
    if (!vm[from]) vm[from] = gr.origin(imgs[e].front());
    if (!vm[to]) vm[to] = gr.terminus(imgs[e].back());
  }
  std::vector<Vertex> out;
  for (Vertex v = 0; v < gr.num_vertices(); ++v) {
    if (!vm[v]) {
      if (gr.num_vertices() == 1) {
        vm[v] = 0;
      } else {
        invalid_input("vertex image of '" + gr.vertex_names()[v] + "' is not determined; add VMAP");
      }
    }
    out.push_back(*vm[v]);
  }
  return GraphMap(g, g, std::move(out), std::move(imgs));
}

void print_map(std::ostringstream& out, const GraphMap& f, const char* name, const char* vname) {
  const Graph& g = f.source();
  out << name << '\n';
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    out << g.edge_names()[e];
    if (!f.image(e).empty()) out << ' ' << g.format(f.image(e));
    out << '\n';
  }
  if (g.num_vertices() > 1) {
    out << vname << '\n';
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      out << g.vertex_names()[v] << ' ' << g.vertex_names()[f.vertex_map()[v]] << '\n';
    }
  }
}

}  // namespace

Document parse_document(const std::string& text) {
  Sections s = split(text);
  std::vector<EdgeSpec> edges;
  auto vindex = [&](const std::string& name) -> Vertex {
    for (std::size_t i = 0; i < s.vertices.size(); ++i) {
      if (s.vertices[i] == name) return static_cast<Vertex>(i);
    }
    invalid_input("unknown vertex '" + name + "'");
  };
  for (const auto& line : s.edges) {
    if (line.size() != 3) invalid_input("EDGES lines are 'name from to'");
    edges.push_back({line[0], vindex(line[1]), vindex(line[2])});
  }
  Document doc;
  doc.graph = std::make_shared<const Graph>(s.vertices, std::move(edges));
  const Graph& g = *doc.graph;
  if (s.marking_base || !s.marking.empty()) {
    Vertex base = s.marking_base ? vindex(*s.marking_base) : 0;
    std::vector<std::string> names;
    std::vector<Word> images;
    for (const auto& line : s.marking) {
      names.push_back(line[0]);
      images.push_back(g.parse(join(line, 1)));
    }
    doc.marked = MarkedGraph(doc.graph, names, base, images);
  } else if (g.is_rose()) {
    std::vector<Word> images;
    for (EdgeId e = 0; e < g.num_edges(); ++e) images.push_back({forward(e)});
    doc.marked = MarkedGraph(doc.graph, g.edge_names(), 0, images);
  }
  if (!s.map.empty()) doc.map = build_map(doc.graph, s.map, s.vmap);
  if (!s.inverse.empty()) doc.inverse = build_map(doc.graph, s.inverse, s.inverse_vmap);
  if (s.h) {
    EdgeSet h;
    for (const auto& name : *s.h) {
      auto e = g.find_edge(name);
      if (!e) invalid_input("H names unknown edge '" + name + "'");
      h.insert(*e);
    }
    doc.subgraph = h;
  }
  return doc;
}

std::string print_document(const Document& doc) {
  if (!doc.graph) invalid_input("document without a graph");
  const Graph& g = *doc.graph;
  std::ostringstream out;
  out << "VERTICES";
  for (const auto& v : g.vertex_names()) out << ' ' << v;
  out << "\nEDGES\n";
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    out << g.edge_names()[e] << ' ' << g.vertex_names()[g.edge(e).from] << ' '
        << g.vertex_names()[g.edge(e).to] << '\n';
  }
  if (doc.marked && !doc.marked->identity_marked()) {
    const MarkedGraph& m = *doc.marked;
    out << "MARKING " << g.vertex_names()[m.base()] << '\n';
    for (std::size_t i = 0; i < m.rank(); ++i) {
      out << m.basis_names()[i];
      if (!m.marking()[i].empty()) out << ' ' << g.format(m.marking()[i]);
      out << '\n';
    }
  }
  if (doc.map) print_map(out, *doc.map, "MAP", "VMAP");
  if (doc.inverse) print_map(out, *doc.inverse, "INVERSE", "INVERSE_VMAP");
  if (doc.subgraph) {
    out << 'H';
    for (EdgeId e : *doc.subgraph) out << ' ' << g.edge_names()[e];
    out << '\n';
  }
  return out.str();
}

Document read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid_input("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) invalid_input("cannot write '" + path + "'");
  out << text;
}

}  // namespace freesplit
