#pragma once

// Marked graph pairs, one-edge splittings and moves in the free splitting
// complex.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "freesplit/core_graph.hpp"
#include "freesplit/graph_map.hpp"

namespace freesplit {

// Subgraph helpers. Components are returned as edge sets.
std::vector<EdgeSet> subgraph_components(const Graph& g, const EdgeSet& edges);
std::size_t subgraph_rank(const Graph& g, const EdgeSet& edges);
// Largest subgraph without valence-one vertices.
EdgeSet subgraph_core(const Graph& g, const EdgeSet& edges);
bool all_components_noncontractible(const Graph& g, const EdgeSet& edges);
// Natural edges: maximal chains of edges through valence-two vertices.
std::vector<EdgeSet> natural_edges(const Graph& g);
bool is_natural_subgraph(const Graph& g, const EdgeSet& edges);
std::vector<Vertex> natural_vertices(const Graph& g);

struct MarkedGraphPair {
  MarkedGraph marked;
  EdgeSet h;
  std::size_t co_edge = 0;
  const Graph& graph() const { return marked.graph(); }
};

// Throws InvalidInput naming the violated clause.
MarkedGraphPair validate_pair(const MarkedGraph& g, const EdgeSet& h);

// Pairs (G, H') with H a proper subset of H' and H' a proper natural
// subgraph with non-contractible components.
std::vector<MarkedGraphPair> faces(const MarkedGraphPair& p);
// The reverse relation inside the same marked graph.
std::vector<MarkedGraphPair> cofaces(const MarkedGraphPair& p);

// Vertex group system [H] in rose coordinates.
FreeFactorSystem elliptic_system(const MarkedGraphPair& p);

struct OneEdgeSplitting {
  MarkedGraphPair pair;
  FreeFactorSystem elliptic;
};
OneEdgeSplitting one_edge(const MarkedGraphPair& p);  // throws unless co-edge 1
bool equivalent_one_edge(const OneEdgeSplitting& a, const OneEdgeSplitting& b);

// Equality key for the splitting of a pair: the elliptic system at co-edge
// one, the sorted keys of its one-edge collapses otherwise.
using SplittingKey = std::vector<std::vector<std::int64_t>>;
SplittingKey splitting_key(const MarkedGraphPair& p);
bool same_splitting(const MarkedGraphPair& a, const MarkedGraphPair& b);

// Marking precomposed with f: the elliptic system moves by the inverse of
// the outer class of f.
MarkedGraphPair remark(const MarkedGraphPair& p, const GraphMap& f);

struct EdgeMatch {
  EdgeId source;
  Letter image;  // oriented edge of the target outside H'
  Word before, after;
};

struct PairRelationWitness {
  GraphMap map;
  std::vector<std::pair<Vertex, Vertex>> vertices;
  std::vector<EdgeMatch> edges;
};

enum class RelationStatus { Holds, FailsClause, Unknown };

struct RelationResult {
  RelationStatus status = RelationStatus::Unknown;
  int clause = 0;  // failing clause for FailsClause
  std::string reason;
  std::optional<PairRelationWitness> witness;
};

RelationResult pair_relation_check(const GraphMap& h, const MarkedGraphPair& p1, const MarkedGraphPair& p2,
                                   std::size_t budget = 100000);

// One-vertex blow-ups: the star of a vertex of valence >= 4 split into two
// sets of size >= 2 joined by a new edge, marking carried along.
std::vector<MarkedGraph> blow_ups(const MarkedGraph& g);

struct SearchBudget {
  std::size_t max_graphs = 64;
  std::size_t max_nodes = 20000;
};

struct Adjacency {
  bool found = false;
  std::optional<MarkedGraphPair> witness;  // co-edge two pair
};

// Throws InvalidInput when the inputs are equivalent.
Adjacency adjacent(const OneEdgeSplitting& a, const OneEdgeSplitting& b, const SearchBudget& budget = {});

// Pairs of one-edge splittings that are the two faces of a co-edge two pair
// on g or one of its blow-ups, at most `limit` of them, each pair of systems once.
std::vector<std::pair<OneEdgeSplitting, OneEdgeSplitting>> adjacent_pairs(const MarkedGraph& g, std::size_t limit);

struct PathStep {
  std::string move;  // "start", "collapse", "expand", "equal"
  MarkedGraphPair pair;
};

struct DistanceResult {
  std::optional<std::size_t> distance;
  std::vector<PathStep> path;
};

// Breadth-first search in the barycentric subdivision over pairs on the
// marked graphs of both inputs plus `extra`. Collapses and expansions cost
// one, equal splittings on different markings cost nothing.
DistanceResult fs_distance_upper(const MarkedGraphPair& a, const MarkedGraphPair& b, const SearchBudget& budget = {},
                                 const std::vector<MarkedGraph>& extra = {});

std::string pair_to_text(const MarkedGraphPair& p);

}  // namespace freesplit
