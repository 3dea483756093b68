#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace anp {

enum class ScaleMode { strict, relaxed };

/// A pairwise preference ratio a_ij, stored as a reduced positive fraction.
///
/// Strict mode admits only the fundamental 1..9 scale and its reciprocals;
/// relaxed mode admits any positive rational.
class SaatyJudgment {
 public:
  SaatyJudgment() = default;
  SaatyJudgment(std::int64_t numerator, std::int64_t denominator);

  static SaatyJudgment parse(std::string_view text, ScaleMode mode = ScaleMode::strict);
  static SaatyJudgment intensity(int k) { return SaatyJudgment(k, 1); }

  std::int64_t numerator() const noexcept { return num_; }
  std::int64_t denominator() const noexcept { return den_; }
  double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  SaatyJudgment reciprocal() const noexcept { return SaatyJudgment(den_, num_); }

  /// True iff the ratio is k or 1/k for an integer 1 <= k <= 9.
  bool on_scale() const noexcept;

  /// Canonical text form: "k" or "p/q".
  std::string to_string() const;

  friend bool operator==(const SaatyJudgment&, const SaatyJudgment&) = default;

 private:
  std::int64_t num_ = 1;
  std::int64_t den_ = 1;
};

/// The 17 admissible strict-scale values, ordered 1/9 .. 9.
std::vector<SaatyJudgment> saaty_scale();

struct PairJudgment {
  std::size_t row;
  std::size_t col;
  SaatyJudgment value;
};

/// Positive reciprocal n x n matrix. Only build_matrix constructs one, so the
/// diagonal is 1 and a_ji = 1/a_ij exactly.
class ComparisonMatrix {
 public:
  std::size_t order() const noexcept { return order_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  const SaatyJudgment& judgment(std::size_t i, std::size_t j) const { return cells_[i * order_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return cells_[i * order_ + j].value(); }

  /// Row-major dense values.
  std::vector<double> values() const;

  /// Judgments above the diagonal in (0,1), (0,2), ..., (n-2,n-1) order.
  std::vector<PairJudgment> upper_triangle() const;

  /// Returns a copy with a_ij (and its reciprocal) replaced.
  ComparisonMatrix with_judgment(std::size_t i, std::size_t j, SaatyJudgment value) const;
  ComparisonMatrix with_labels(std::vector<std::string> labels) const;

  /// Index of a label, if present.
  std::optional<std::size_t> index_of(std::string_view label) const;

  friend bool operator==(const ComparisonMatrix&, const ComparisonMatrix&) = default;

 private:
  friend ComparisonMatrix build_matrix(std::size_t, std::span<const PairJudgment>,
                                       std::vector<std::string>, ScaleMode);
  std::size_t order_ = 0;
  std::vector<std::string> labels_;
  std::vector<SaatyJudgment> cells_;
};

/// Builds a reciprocal matrix from its strict upper triangle. Every pair
/// (i, j) with i < j < order must appear exactly once. Labels default to
/// "0".."n-1" when empty.
ComparisonMatrix build_matrix(std::size_t order, std::span<const PairJudgment> upper,
                              std::vector<std::string> labels = {},
                              ScaleMode mode = ScaleMode::strict);

/// Random consistency index by matrix order.
class RciTable {
 public:
  explicit RciTable(std::map<std::size_t, double> values);

  /// Saaty's 1980 values for orders 1..10.
  static RciTable saaty1980();

  /// Throws UnsupportedOrder when n is outside the table.
  double at(std::size_t n) const;
  std::size_t max_order() const noexcept { return values_.rbegin()->first; }
  const std::map<std::size_t, double>& values() const noexcept { return values_; }

 private:
  std::map<std::size_t, double> values_;
};

struct PriorityVector {
  std::vector<double> weights;
  double lambda_max = 0.0;
  double ci = 0.0;
  double cr = 0.0;
  bool consistent = true;  // cr < 0.1
  std::size_t iterations = 0;
};

struct ConsistencyIndex {
  double ci;
  double cr;
};

inline constexpr double kEigenTolerance = 1e-12;
inline constexpr std::size_t kEigenIterationCap = 10'000;

/// Normalised Perron vector by power iteration on the matrix itself.
PriorityVector principal_eigenvector(const ComparisonMatrix& m,
                                     const RciTable& rci = RciTable::saaty1980());

ConsistencyIndex consistency_ratio(double lambda_max, std::size_t n,
                                   const RciTable& rci = RciTable::saaty1980());

enum class ConsistencyPolicy { saaty1994, uniform };
enum class Verdict { pass, warn, fail };

std::string_view to_string(ConsistencyPolicy policy);
std::string_view to_string(Verdict verdict);
std::optional<ConsistencyPolicy> parse_policy(std::string_view text);
std::optional<Verdict> parse_verdict(std::string_view text);

struct ConsistencyVerdict {
  Verdict verdict = Verdict::pass;
  double threshold = 0.0;
  double cr = 0.0;
};

/// CR ceiling for an n x n matrix: 0.05 / 0.08 / 0.1 under saaty1994,
/// 0.1 everywhere under uniform.
double consistency_threshold(std::size_t n, ConsistencyPolicy policy);

/// A CR at or below the threshold passes. Exceeding it is Fail under
/// saaty1994 and Warn under uniform.
ConsistencyVerdict screen_consistency(const PriorityVector& pv, std::size_t n,
                                      ConsistencyPolicy policy);

}  // namespace anp
