#pragma once

// The integer projection w / W from conjugacy classes, free factor systems
// and one-edge splittings, for an outer automorphism with a filling
// attracting lamination.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "freesplit/lamination.hpp"
#include "freesplit/splitting.hpp"

namespace freesplit {

// Rose automorphism realized by f on a marked graph, up to an inner
// automorphism.
FreeMap rose_automorphism(const MarkedGraph& g, const GraphMap& f);

struct WParams {
  AttractionParams attraction;
  std::size_t candidate_length = 3;  // l
  std::size_t length_cap = 4000000;
  LaminationOptions lamination;
};

struct WResult {
  bool defined = false;
  long long value = 0;
  std::string reason;  // why undefined
  // Exponents of the scan: the run into U- and the first miss above it.
  int run_top = 0;
  int first_miss = 0;
  // Forward side: phi^i(c) in U+ for i >= -w + M when M is set.
  std::optional<bool> forward_ok;
};

class WContext;
struct WCache;

// Orbit of one class under the automorphism, cached by exponent.
class ClassOrbit {
 public:
  ClassOrbit(const WContext& ctx, CyclicWord c) : ctx_(&ctx) { at_.emplace(0, std::move(c)); }
  // phi^i(c). Throws BudgetExhausted past the length cap.
  const CyclicWord& at(int i);

 private:
  const WContext* ctx_;
  std::map<int, CyclicWord> at_;
};

class WContext {
 public:
  const MarkedGraph& marked() const { return *marked_; }
  std::size_t rank() const { return phi_.rank(); }
  const FreeMap& phi() const { return phi_; }
  const FreeMap& phi_inverse() const { return phi_inv_; }
  const LaminationApprox& plus() const { return *plus_; }
  const LaminationApprox& minus() const { return *minus_; }
  const Word& segment_plus() const { return seg_plus_; }
  const Word& segment_minus() const { return seg_minus_; }
  const WParams& params() const { return params_; }
  std::optional<long long> m_hat() const { return m_hat_; }
  void set_m_hat(long long m) { m_hat_ = m; }

  CyclicWord forward(const CyclicWord& c) const;
  CyclicWord backward(const CyclicWord& c) const;

 private:
  friend WResult w_of(const WContext&, const CyclicWord&);
  friend WContext build_context(const MarkedGraph&, const GraphMap&, const std::optional<GraphMap>&, const WParams&);

  std::shared_ptr<const MarkedGraph> marked_;
  FreeMap phi_, phi_inv_;
  std::shared_ptr<const Graph> rose_;
  GraphMap forward_map_, backward_map_;
  std::shared_ptr<LaminationApprox> plus_, minus_;
  Word seg_plus_, seg_minus_;
  WParams params_;
  std::optional<long long> m_hat_;
  std::shared_ptr<WCache> cache_;
};

// The inverse, when given, is a map on the same marked graph. Throws
// InvalidInput if no lamination of f fills or the inverse is wrong.
WContext build_context(const MarkedGraph& g, const GraphMap& f, const std::optional<GraphMap>& inverse = std::nullopt,
                       const WParams& params = {});

enum class Side { Plus, Minus };
// Classes in rose coordinates.
bool in_U(const WContext& ctx, const CyclicWord& c, Side side);

// Throws BudgetExhausted past the length cap.
WResult w_of(const WContext& ctx, const CyclicWord& c);
WResult w_of(const WContext& ctx, ClassOrbit& orbit);

// Exponent i >= -w(c) from which phi^i(c) stays in U+ for s + 1 steps, minus
// (-w(c)). Empty when not reached within the forward horizon.
std::optional<long long> forward_lag(const WContext& ctx, ClassOrbit& orbit, const WResult& w);

struct WValue {
  long long value = 0;
  CyclicWord witness;
  std::size_t candidates = 0;
  std::size_t defined = 0;
  int shift = 0;             // transported by phi^shift
  bool sample_min = true;    // minimum over the candidate sample only
};

// Minimum of w over the candidate classes of ffs. Throws NotApplicable when
// no candidate has a defined value.
WValue W_of_ffs(const WContext& ctx, const FreeFactorSystem& ffs);
// W(phi^m F) evaluated on transported candidates: W(F) + m.
WValue W_transported(const WContext& ctx, const FreeFactorSystem& ffs, int m);
WValue W_of_splitting(const WContext& ctx, const OneEdgeSplitting& s);
// W(S^{phi^m}) = W(S) - m on transported candidates.
WValue W_of_splitting(const WContext& ctx, const OneEdgeSplitting& s, int m);

// phi^k applied to every component of ffs, k of either sign.
FreeFactorSystem apply_power(const WContext& ctx, const FreeFactorSystem& ffs, int k);

struct MEstimate {
  long long m_hat = 0;
  long long max_spread = 0;
  long long max_lag = 0;
  std::size_t systems = 0;
  std::size_t classes = 0;
};

// Largest spread of w inside one system and largest forward lag over the
// sample. Stores the result in ctx. Throws NotApplicable on an empty sample.
MEstimate estimate_M(WContext& ctx, const std::vector<FreeFactorSystem>& sample);

struct DisplacementRow {
  int m = 0;
  long long transported = 0;
  std::optional<long long> raw;  // recomputed on phi^{-m} F(S) directly
};

struct DisplacementTable {
  long long base = 0;  // W(S)
  CyclicWord witness;
  std::vector<DisplacementRow> rows;
  bool slope_exact = false;     // transported values are W(S) - m
  bool raw_within_m = true;     // every raw value within M of the transported one
};

DisplacementTable displacement_table(const WContext& ctx, const OneEdgeSplitting& s, int range,
                                     const std::vector<int>& raw_at = {-2, 2});

struct LipschitzRow {
  std::string first, second;
  std::optional<long long> w1, w2;
  long long delta = 0;
  bool within = false;
  std::string note;
};

struct LipschitzReport {
  long long m_hat = 0;
  std::vector<LipschitzRow> rows;
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::size_t skipped = 0;
  double max_ratio = 0;  // |dW| / M
};

// Pairs must be adjacent; the bound is 8 M.
LipschitzReport lipschitz_check(const WContext& ctx,
                                const std::vector<std::pair<OneEdgeSplitting, OneEdgeSplitting>>& pairs);

struct DivergenceRow {
  int exponent = 0;
  std::optional<long long> value;
};

struct DivergenceReport {
  std::vector<DivergenceRow> psi_table;
  std::vector<DivergenceRow> phi_table;
  long long psi_band = 0;  // max - min over the psi table
  bool bounded = false;    // psi band <= 2 M and no exact nonzero slope
  std::optional<long long> phi_slope;  // exact common difference when linear
  std::string verdict;     // "Bounded", "Unbounded" or "Unknown"
};

// Tables l -> W(psi^l F(T)) and l -> W(phi^l F(T)) for l in [first, last],
// with candidates of F(T) carried along. psi acts on the rose.
DivergenceReport divergence_check(const WContext& ctx, const FreeMap& psi, const OneEdgeSplitting& t, int first,
                                  int last);

}  // namespace freesplit
