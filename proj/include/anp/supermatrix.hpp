#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anp/error.hpp"
#include "anp/judgments.hpp"
#include "anp/matrix.hpp"
#include "anp/network.hpp"

namespace anp {

enum class SupermatrixState { unweighted, weighted, limit };
std::string_view to_string(SupermatrixState state);

struct ConvergenceOptions {
  double tolerance = 1e-10;            // max-norm between successive powers
  std::uint64_t max_power = 1u << 20;  // reached by repeated squaring
};

struct ConvergenceInfo {
  std::size_t iterations = 0;  // squarings performed
  std::uint64_t power = 1;     // exponent of the returned power
  double residual = 0.0;
  bool cesaro_used = false;
};

/// Block matrix of priority vectors. Row = dependent element, column =
/// control node, both in DecisionNetwork::node_order().
struct Supermatrix {
  std::vector<std::string> index;
  std::vector<std::string> clusters;  // owning cluster of each index entry
  Matrix entries;
  SupermatrixState state = SupermatrixState::unweighted;
  ConvergenceInfo convergence;  // meaningful in the limit state

  std::size_t order() const noexcept { return index.size(); }
  std::optional<std::size_t> position(std::string_view id) const;
  /// Entry at (row node, column node); throws InvalidArgument on unknown ids.
  double at(std::string_view row, std::string_view column) const;
};

/// Source cluster -> (target cluster -> weight).
struct ClusterWeights {
  std::map<std::string, std::map<std::string, double>> by_source;
  /// Source clusters whose weights came from an explicit comparison matrix.
  std::map<std::string, PriorityVector> derived;
  std::map<std::string, ConsistencyVerdict> verdicts;

  double weight(const std::string& source, const std::string& target) const;
};

struct SolveOptions {
  RciTable rci = RciTable::saaty1980();
  ConsistencyPolicy policy = ConsistencyPolicy::saaty1994;
  bool strict = false;
  ConvergenceOptions convergence;
};

/// Raised in strict mode when any judged matrix fails screening.
class ConsistencyError : public Error {
 public:
  explicit ConsistencyError(std::vector<std::string> failing_slots);
  const std::vector<std::string>& failing_slots() const noexcept { return slots_; }

 private:
  std::vector<std::string> slots_;
};

struct SlotEvaluation {
  JudgmentSlot slot;
  std::vector<std::string> elements;
  std::optional<ComparisonMatrix> matrix;  // absent for single-element slots
  PriorityVector priorities;
  ConsistencyVerdict verdict;
};

/// Eigenvectors and verdicts of every declared slot, in edge order. Slots
/// with one element get weight 1. Throws IncompleteModel on unrated slots.
std::vector<SlotEvaluation> evaluate_slots(const DecisionNetwork& net, const SolveOptions& opts);

Supermatrix assemble_unweighted(const DecisionNetwork& net,
                                const std::map<JudgmentSlot, PriorityVector>& eigenvectors);

ClusterWeights derive_cluster_weights(const DecisionNetwork& net, const SolveOptions& opts = {});

/// Scales each block by its cluster weight and renormalises nonzero columns
/// to 1. All-zero columns become the node's own unit column.
Supermatrix weight(const Supermatrix& unweighted, const ClusterWeights& cw);

/// Limit of powers by repeated squaring, falling back to the Cesaro mean
/// over one period when even and odd powers settle apart (period 2).
Supermatrix limit(const Supermatrix& weighted, const ConvergenceOptions& opts = {});

struct AlternativeWeight {
  std::string id;
  std::string label;
  double limit_weight = 0.0;
  double normalized = 0.0;  // within the alternatives clusters
};

struct RankingReport {
  std::vector<AlternativeWeight> ranking;  // descending, ties by id
  std::vector<double> raw_limit_column;
  std::string source_column;
  ConvergenceInfo convergence;

  std::vector<std::string> order() const;
  const AlternativeWeight* find(std::string_view id) const;
};

RankingReport rank(const Supermatrix& limit_matrix, const DecisionNetwork& net);

/// Classical AHP synthesis over a strict goal -> ... -> alternatives chain.
RankingReport solve_hierarchy(const DecisionNetwork& net, const SolveOptions& opts = {});

struct Solution {
  std::vector<SlotEvaluation> slots;
  ClusterWeights cluster_weights;
  Supermatrix unweighted;
  Supermatrix weighted;
  Supermatrix limit_matrix;
  RankingReport ranking;

  std::vector<std::string> failing_slots() const;
};

/// The full pipeline. Throws ConsistencyError in strict mode.
Solution solve(const DecisionNetwork& net, const SolveOptions& opts = {});

struct JudgmentOverride {
  JudgmentSlot slot;
  std::string row;
  std::string col;
  SaatyJudgment value;
};

/// Applies overrides to a copy of the network. Throws InvalidOverride.
DecisionNetwork apply_overrides(const DecisionNetwork& net,
                                const std::vector<JudgmentOverride>& overrides,
                                ScaleMode mode = ScaleMode::strict);

struct RankingDelta {
  std::string id;
  double weight_delta = 0.0;
  double normalized_delta = 0.0;
  int rank_delta = 0;  // positive = moved up
};

struct WhatIfReport {
  RankingReport baseline;
  RankingReport perturbed;
  std::vector<RankingDelta> delta;  // baseline ranking order
};

WhatIfReport whatif(const DecisionNetwork& net, const std::vector<JudgmentOverride>& overrides,
                    const SolveOptions& opts = {});

}  // namespace anp
