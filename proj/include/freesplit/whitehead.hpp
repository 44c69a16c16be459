#pragma once

// Whitehead graphs, peak reduction and the fills test.

#include <cstddef>
#include <string>
#include <vector>

#include "freesplit/core_graph.hpp"
#include "freesplit/free_map.hpp"

namespace freesplit {

// Multigraph on the 2n letters. A turn (u, v) read in a word contributes
// the edge {u, v^-1}.
class WhiteheadGraph {
 public:
  explicit WhiteheadGraph(std::size_t rank = 0) : rank_(rank), weight_(4 * rank * rank, 0) {}

  std::size_t rank() const noexcept { return rank_; }
  std::size_t num_vertices() const noexcept { return 2 * rank_; }
  long long weight(Letter u, Letter v) const { return weight_[u * num_vertices() + v]; }
  long long degree(Letter u) const;
  long long num_edges() const;

  void add_turn(Letter u, Letter v);

  // Component id per vertex, numbered in first-seen order.
  std::vector<std::size_t> components() const;
  bool connected() const;
  bool has_cut_vertex() const;
  // Vertices whose removal disconnects the rest.
  std::size_t cut_vertex_count() const;
  std::string summary() const;

 private:
  void add_edge(Letter a, Letter b);

  std::size_t rank_;
  std::vector<long long> weight_;
};

WhiteheadGraph whitehead_graph(const std::vector<CyclicWord>& classes, std::size_t rank);
// Interior turns of finite words (no wrap-around turn).
WhiteheadGraph turn_graph(const std::vector<Word>& words, std::size_t rank);

struct WhiteheadMove {
  Letter multiplier = 0;
  std::vector<bool> cut;  // letters of A
  friend bool operator==(const WhiteheadMove&, const WhiteheadMove&) = default;
};

FreeMap move_automorphism(std::size_t rank, const WhiteheadMove& m);
// (A - a + a^-1, a^-1).
WhiteheadMove inverse_move(const WhiteheadMove& m);

// Minimum cut separating a from a^-1, with the smallest source side.
// Applying (side, a) changes total cyclic length by capacity - degree(a).
struct MinCut {
  WhiteheadMove move;
  long long capacity = 0;
};
MinCut min_cut(const WhiteheadGraph& g, Letter a);

struct WhiteheadBudget {
  std::size_t max_moves = 100000;
  std::size_t max_letters = 10000;
};

struct Minimized {
  std::vector<CyclicWord> classes;  // images of the inputs, same order
  std::size_t total_length = 0;
  std::vector<WhiteheadMove> moves;  // applied first to last
  FreeMap automorphism;              // composite of the moves
  FreeMap inverse;
};

// Greedy peak reduction: at each step the multiplier with the largest
// decrease wins, ties to the smaller letter. Throws BudgetExhausted.
Minimized whitehead_minimize(const std::vector<CyclicWord>& classes, std::size_t rank,
                             const WhiteheadBudget& budget = {});

enum class FillsKind { Fills, ProperFactor, Unknown };
const char* to_string(FillsKind k);

struct FillsVerdict {
  FillsKind kind = FillsKind::Unknown;
  std::vector<CyclicWord> minimized;
  std::size_t total_length = 0;
  std::vector<WhiteheadMove> moves;
  std::string graph_summary;
  FreeFactorSystem witness;  // ProperFactor only
  std::string reason;
};

struct SupportResult {
  bool known = false;
  FreeFactorSystem support;
  std::string reason;
  // Top-level minimization data.
  Minimized top;
};

SupportResult free_factor_support(const std::vector<CyclicWord>& classes, std::size_t rank,
                                  const WhiteheadBudget& budget = {});
FillsVerdict fills(const std::vector<CyclicWord>& classes, std::size_t rank, const WhiteheadBudget& budget = {});

}  // namespace freesplit
