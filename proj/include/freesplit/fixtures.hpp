#pragma once

// Catalog of worked examples, validated on load.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "freesplit/graph_map.hpp"

namespace freesplit {

enum class Verdict { Loxodromic, BoundedOrbits, PeriodicVertex, Unknown };
const char* to_string(Verdict v);

// Edge sets for the bounded-orbit chain: K1, K2 invariant with G = K1 u K2,
// J2 the core of K2, J3 the core of K1 n J2.
struct Decomposition {
  EdgeSet k1, k2, j2, j3;
};

struct ExampleSpec {
  std::string name;
  MarkedGraph marked;
  GraphMap map;
  std::optional<GraphMap> inverse;
  std::optional<Decomposition> decomposition;
  std::optional<Verdict> expected;
  // Second map on the same graph: the representative being acted on for
  // the linear example, the conjugate for the divergence pair.
  std::optional<GraphMap> companion;
  // Subgraph of a one-edge splitting used by reports.
  std::optional<EdgeSet> splitting;
  std::vector<std::string> notes;
  bool stub = false;
};

struct FixtureParams {
  unsigned m = 3;      // rank of the fixed subgraph
  std::string sigma;   // empty: catalog word
  int i = 1, j = 0;    // linear example exponents
};

std::vector<std::string> fixture_names();
// Throws InvalidInput for an unknown name, FixtureInvalid if a load-time
// check fails.
ExampleSpec fixture(const std::string& name, const FixtureParams& params = {});

// Spec from a parsed text document: marking and map required, inverse and
// subgraph (the tracked splitting) optional. Validated like a fixture.
struct Document;
ExampleSpec spec_from_document(const Document& doc, const std::string& name);

// Catalog loop in the fixed subgraph; fills it.
std::string catalog_sigma(unsigned m);

// First violated decomposition clause, if any.
std::optional<std::string> decomposition_problem(const GraphMap& f, const Decomposition& d);

// Checks claimed invariant subgraphs and the decomposition clauses. Throws
// FixtureInvalid.
void validate_spec(const ExampleSpec& spec);

struct Rank2Case {
  std::string name;
  std::array<long long, 4> matrix;  // row-major abelianization
  ExampleSpec spec;
};

// GL2(Z) battery realized as maps on the rose or the theta graph.
std::vector<Rank2Case> rank2_battery();

}  // namespace freesplit
