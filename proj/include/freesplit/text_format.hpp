#pragma once

// Line-based text format for graphs, markings, maps and pairs.
//
//   VERTICES v w
//   EDGES
//   a v w
//   MARKING v          basis element -> closed edge word at v
//   x a c'
//   MAP                edge -> edge word
//   a b
//   VMAP               optional vertex images, "vertex image"
//   INVERSE            optional map representing the inverse
//   H a b              optional subgraph
//
// A trailing apostrophe marks the reversed edge. '#' starts a comment.

#include <optional>
#include <string>

#include "freesplit/graph_map.hpp"

namespace freesplit {

struct Document {
  std::shared_ptr<const Graph> graph;
  std::optional<MarkedGraph> marked;
  std::optional<GraphMap> map;
  std::optional<GraphMap> inverse;
  std::optional<EdgeSet> subgraph;
};

Document parse_document(const std::string& text);
std::string print_document(const Document& doc);

Document read_document(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace freesplit
