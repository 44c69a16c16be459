#pragma once

// Loxodromic / bounded orbits / periodic vertex classification with
// verified witnesses, and the trace test in rank two.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "freesplit/fixtures.hpp"
#include "freesplit/splitting.hpp"
#include "freesplit/w_projection.hpp"

namespace freesplit {

// Least p <= 12 that makes every permutation stratum act trivially on its
// oriented edges; 1 when none exists.
unsigned rotationless_power(const GraphMap& f);

struct PeriodicWitness {
  OneEdgeSplitting splitting;
  RelationResult relation;
};

// Invariant one-edge splitting for f, the top stratum's edge first. Throws
// NotApplicable if the top stratum is EG or no candidate edge works.
PeriodicWitness periodic_vertex_witness(const MarkedGraph& g, const GraphMap& f);

enum class ChainLinkKind { Face, Equal };

struct ChainLink {
  ChainLinkKind kind = ChainLinkKind::Face;
  std::size_t from = 0, to = 0;  // indices into BoundedChain::pairs
  bool verified = false;
  std::string note;
};

// Seven pair serializations, five vertices once the two equalities are
// identified: J3 -> K1 = K1^{f1^k} <- J3^{f1^k} -> J2^{f1^k} = J2^{f^k} <- J3^{f^k}.
struct BoundedChain {
  unsigned k = 0;
  GraphMap f1, f2;
  std::vector<MarkedGraphPair> pairs;
  std::vector<std::string> labels;
  std::vector<ChainLink> links;
  std::size_t moves = 0;  // face links
  bool verified = false;
};

// Throws InvalidInput naming the violated decomposition clause.
BoundedChain bounded_path_witness(const ExampleSpec& spec, unsigned k);

struct ClassifyOptions {
  unsigned power = 0;  // 0: rotationless_power
  WParams w;
  int range = 4;       // displacement table over [-range, range]
  unsigned chain_exponent = 3;
  std::size_t lipschitz_pairs = 40;  // adjacent pairs checked for a loxodromic witness
  WhiteheadBudget whitehead;
};

struct Classification {
  Verdict verdict = Verdict::Unknown;
  unsigned power = 1;
  std::string stage;         // failing stage for Unknown
  std::string witness_kind;  // "displacement-table", "chain", "by-theorem", "invariant-splitting", "none"
  std::string reason;
  std::vector<std::string> strata;
  std::vector<std::string> laminations;  // verdict per EG stratum
  std::string joint;
  std::optional<DisplacementTable> table;
  std::optional<long long> m_hat;
  std::optional<LipschitzReport> lipschitz;
  // range / (8 M): lower bound for the distance from S to S^{phi^range}.
  std::optional<double> distance_lower;
  std::optional<OneEdgeSplitting> tracked;
  std::optional<BoundedChain> chain;
  std::optional<PeriodicWitness> periodic;
};

Classification classify(const ExampleSpec& spec, const ClassifyOptions& options = {});

enum class Rank2Verdict { Loxodromic, NotLoxodromic };
const char* to_string(Rank2Verdict v);

// Row-major 2x2 integer matrix. Throws InvalidInput unless |det| = 1.
Rank2Verdict rank2_classify(const std::array<long long, 4>& m);

}  // namespace freesplit
