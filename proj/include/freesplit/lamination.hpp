#pragma once

// Finite approximations of attracting laminations.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "freesplit/graph_map.hpp"
#include "freesplit/whitehead.hpp"

namespace freesplit {

struct AttractionParams {
  std::size_t segment_length = 64;  // L
  unsigned forward_horizon = 40;    // h+
  unsigned backward_horizon = 40;   // h-
  unsigned stability = 3;           // s
  void validate() const;
};

struct LaminationOptions {
  std::size_t min_depth = 6;
  std::size_t max_depth = 64;
  std::size_t min_length = 1024;    // keep iterating until the seed image is this long
  std::size_t max_length = 300000;  // stop once exceeded
  std::size_t length_cap = kDefaultLengthCap;
};

struct LaminationApprox {
  MarkedGraph marked;
  GraphMap map;
  std::size_t stratum = 0;
  std::vector<EdgeId> stratum_edges;
  EdgeId seed = 0;
  std::vector<EdgePath> segments;  // segments[k] = f^k_#(seed)
  std::size_t stabilization_depth = 0;  // set by lamination_fills, 0 if none

  std::size_t depth() const { return segments.empty() ? 0 : segments.size() - 1; }
  const EdgePath& deepest() const { return segments.back(); }
  // Length-L subword of the deepest segment centred on the seed occurrence
  // closest to its middle.
  Word defining_segment(std::size_t length) const;
  // Segments in rose coordinates.
  Word rose_segment(std::size_t k) const;
};

EdgePath leaf_segment(const GraphMap& f, EdgeId e, unsigned k, std::size_t cap = kDefaultLengthCap);

// Throws InvalidInput unless the stratum is EG.
LaminationApprox lamination_approx(const MarkedGraph& g, const GraphMap& f, std::size_t stratum,
                                   const LaminationOptions& opts = {});
// One approximation per EG stratum, bottom first.
std::vector<LaminationApprox> all_laminations(const MarkedGraph& g, const GraphMap& f,
                                              const LaminationOptions& opts = {});

// Does the circuit contain the segment in either orientation?
bool contains_segment(const CyclicWord& c, const Word& segment);

struct Attraction {
  bool attracted = false;
  unsigned first_index = 0;
};

Attraction weakly_attracted(const GraphMap& f, const CyclicWord& c, const LaminationApprox& lam,
                            const AttractionParams& params, std::size_t cap = kDefaultLengthCap);

FillsVerdict lamination_fills(LaminationApprox& lam, const WhiteheadBudget& budget = {});
FillsVerdict laminations_jointly_fill(std::vector<LaminationApprox>& lams, const WhiteheadBudget& budget = {});

// log of the growth of stratum crossings of the deepest segment under g.
double pf_estimate(const GraphMap& g, const LaminationApprox& lam, std::size_t depth);

}  // namespace freesplit
