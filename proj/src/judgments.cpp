#include "anp/judgments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "anp/error.hpp"

namespace anp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateJudgment: return "DuplicateJudgment";
    case ErrorCode::IncompleteJudgments: return "IncompleteJudgments";
    case ErrorCode::InvalidScaleValue: return "InvalidScaleValue";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::SlotShapeMismatch: return "SlotShapeMismatch";
    case ErrorCode::UnknownSlot: return "UnknownSlot";
    case ErrorCode::IncompleteModel: return "IncompleteModel";
    case ErrorCode::NotAHierarchy: return "NotAHierarchy";
    case ErrorCode::InvalidOverride: return "InvalidOverride";
    case ErrorCode::ConsistencyFailure: return "ConsistencyFailure";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::IntegrityFailure: return "IntegrityFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// SaatyJudgment

SaatyJudgment::SaatyJudgment(std::int64_t numerator, std::int64_t denominator) {
  if (numerator <= 0 || denominator <= 0) {
    throw Error(ErrorCode::InvalidScaleValue,
                "judgment must be positive, got " + std::to_string(numerator) + "/" +
                    std::to_string(denominator));
  }
  const auto g = std::gcd(numerator, denominator);
  num_ = numerator / g;
  den_ = denominator / g;
}

namespace {

std::optional<std::int64_t> parse_int(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) return std::nullopt;
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

SaatyJudgment SaatyJudgment::parse(std::string_view text, ScaleMode mode) {
  const auto slash = text.find('/');
  std::optional<std::int64_t> num, den;
  if (slash == std::string_view::npos) {
    num = parse_int(text);
    den = 1;
  } else {
    num = parse_int(text.substr(0, slash));
    den = parse_int(text.substr(slash + 1));
  }
  if (!num || !den || *num <= 0 || *den <= 0) {
    throw Error(ErrorCode::InvalidScaleValue, "not a positive rational: '" + std::string(text) + "'");
  }
  SaatyJudgment j(*num, *den);
  if (mode == ScaleMode::strict && !j.on_scale()) {
    throw Error(ErrorCode::InvalidScaleValue,
                "'" + std::string(text) + "' is not on the 1..9 scale (use k or 1/k, 1 <= k <= 9)");
  }
  return j;
}

bool SaatyJudgment::on_scale() const noexcept {
  return (den_ == 1 && num_ >= 1 && num_ <= 9) || (num_ == 1 && den_ >= 1 && den_ <= 9);
}

std::string SaatyJudgment::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::vector<SaatyJudgment> saaty_scale() {
  std::vector<SaatyJudgment> out;
  for (int k = 9; k >= 2; --k) out.emplace_back(1, k);
  for (int k = 1; k <= 9; ++k) out.emplace_back(k, 1);
  return out;
}

// ---------------------------------------------------------------------------
// ComparisonMatrix

std::vector<double> ComparisonMatrix::values() const {
  std::vector<double> out(cells_.size());
  std::transform(cells_.begin(), cells_.end(), out.begin(),
                 [](const SaatyJudgment& j) { return j.value(); });
  return out;
}

std::vector<PairJudgment> ComparisonMatrix::upper_triangle() const {
  std::vector<PairJudgment> out;
  out.reserve(order_ * (order_ - 1) / 2);
  for (std::size_t i = 0; i < order_; ++i)
    for (std::size_t j = i + 1; j < order_; ++j) out.push_back({i, j, judgment(i, j)});
  return out;
}

ComparisonMatrix ComparisonMatrix::with_judgment(std::size_t i, std::size_t j,
                                                 SaatyJudgment value) const {
  if (i >= order_ || j >= order_ || i == j) {
    throw Error(ErrorCode::InvalidArgument, "pair out of range");
  }
  ComparisonMatrix copy = *this;
  copy.cells_[i * order_ + j] = value;
  copy.cells_[j * order_ + i] = value.reciprocal();
  return copy;
}

ComparisonMatrix ComparisonMatrix::with_labels(std::vector<std::string> labels) const {
  if (labels.size() != order_) {
    throw Error(ErrorCode::SlotShapeMismatch, "label count does not match matrix order");
  }
  ComparisonMatrix copy = *this;
  copy.labels_ = std::move(labels);
  return copy;
}

std::optional<std::size_t> ComparisonMatrix::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return i;
  return std::nullopt;
}

ComparisonMatrix build_matrix(std::size_t order, std::span<const PairJudgment> upper,
                              std::vector<std::string> labels, ScaleMode mode) {
  if (order < 2) {
    throw Error(ErrorCode::InvalidArgument, "comparison matrix order must be at least 2");
  }
  if (labels.empty()) {
    for (std::size_t i = 0; i < order; ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != order) {
    throw Error(ErrorCode::InvalidArgument, "label count does not match matrix order");
  }

  std::vector<bool> seen(order * order, false);
  ComparisonMatrix m;
  m.order_ = order;
  m.labels_ = std::move(labels);
  m.cells_.assign(order * order, SaatyJudgment{});

  for (const auto& p : upper) {
    if (p.row >= p.col || p.col >= order) {
      throw Error(ErrorCode::InvalidArgument, "pair (" + std::to_string(p.row) + "," +
                                                  std::to_string(p.col) +
                                                  ") is not in the strict upper triangle");
    }
    if (mode == ScaleMode::strict && !p.value.on_scale()) {
      throw Error(ErrorCode::InvalidScaleValue,
                  "(" + m.labels_[p.row] + "," + m.labels_[p.col] + ") = " + p.value.to_string());
    }
    const std::size_t k = p.row * order + p.col;
    if (seen[k]) {
      throw Error(ErrorCode::DuplicateJudgment,
                  "(" + m.labels_[p.row] + "," + m.labels_[p.col] + ") given twice");
    }
    seen[k] = true;
    m.cells_[k] = p.value;
    m.cells_[p.col * order + p.row] = p.value.reciprocal();
  }

  for (std::size_t i = 0; i < order; ++i) {
    for (std::size_t j = i + 1; j < order; ++j) {
      if (!seen[i * order + j]) {
        throw Error(ErrorCode::IncompleteJudgments,
                    "missing judgment (" + m.labels_[i] + "," + m.labels_[j] + ")");
      }
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Consistency

RciTable::RciTable(std::map<std::size_t, double> values) : values_(std::move(values)) {
  if (values_.empty() || !values_.contains(1) || !values_.contains(2) || values_.at(1) != 0.0 ||
      values_.at(2) != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "RCI table must define orders 1 and 2 as 0");
  }
  for (const auto& [n, v] : values_) {
    if (n >= 3 && !(v > 0.0)) {
      throw Error(ErrorCode::InvalidArgument,
                  "RCI for order " + std::to_string(n) + " must be positive");
    }
  }
}

RciTable RciTable::saaty1980() {
  return RciTable({{1, 0.0},
                   {2, 0.0},
                   {3, 0.58},
                   {4, 0.90},
                   {5, 1.12},
                   {6, 1.24},
                   {7, 1.32},
                   {8, 1.41},
                   {9, 1.45},
                   {10, 1.49}});
}

double RciTable::at(std::size_t n) const {
  auto it = values_.find(n);
  if (it == values_.end()) {
    throw Error(ErrorCode::UnsupportedOrder,
                "no random consistency index for order " + std::to_string(n));
  }
  return it->second;
}

ConsistencyIndex consistency_ratio(double lambda_max, std::size_t n, const RciTable& rci) {
  if (n < 2) throw Error(ErrorCode::UnsupportedOrder, "order must be at least 2");
  const double rci_n = rci.at(n);
  double ci = (lambda_max - static_cast<double>(n)) / static_cast<double>(n - 1);
  // Rounding can leave a consistent matrix a hair below n.
  if (ci < 0.0 && ci > -1e-9) ci = 0.0;
  const double cr = rci_n > 0.0 ? ci / rci_n : 0.0;
  return {ci, cr};
}

PriorityVector principal_eigenvector(const ComparisonMatrix& m, const RciTable& rci) {
  const std::size_t n = m.order();
  // Validate the order before iterating.
  rci.at(n);
  const std::vector<double> a = m.values();

  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  std::vector<double> y(n);
  double lambda = 0.0;
  std::size_t it = 0;
  bool converged = false;
  while (it < kEigenIterationCap) {
    ++it;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += a[i * n + j] * x[j];
      y[i] = s;
    }
    // x sums to 1, so the 1-norm of Ax is the Rayleigh-like eigenvalue estimate.
    lambda = std::accumulate(y.begin(), y.end(), 0.0);
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] /= lambda;
      diff = std::max(diff, std::abs(y[i] - x[i]));
    }
    x.swap(y);
    if (diff < kEigenTolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw Error(ErrorCode::ConvergenceFailure,
                "power iteration did not converge in " + std::to_string(kEigenIterationCap) +
                    " iterations");
  }

  // Final eigenvalue from the converged vector.
  double lam = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) lam += a[i * n + j] * x[j];

  PriorityVector pv;
  pv.weights = std::move(x);
  pv.lambda_max = lam;
  const auto [ci, cr] = consistency_ratio(lam, n, rci);
  pv.ci = ci;
  pv.cr = cr;
  pv.consistent = cr < 0.1;
  pv.iterations = it;
  return pv;
}

std::string_view to_string(ConsistencyPolicy policy) {
  return policy == ConsistencyPolicy::saaty1994 ? "saaty1994" : "uniform";
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::pass: return "pass";
    case Verdict::warn: return "warn";
    case Verdict::fail: return "fail";
  }
  return "pass";
}

std::optional<ConsistencyPolicy> parse_policy(std::string_view text) {
  if (text == "saaty1994") return ConsistencyPolicy::saaty1994;
  if (text == "uniform") return ConsistencyPolicy::uniform;
  return std::nullopt;
}

std::optional<Verdict> parse_verdict(std::string_view text) {
  if (text == "pass") return Verdict::pass;
  if (text == "warn") return Verdict::warn;
  if (text == "fail") return Verdict::fail;
  return std::nullopt;
}

double consistency_threshold(std::size_t n, ConsistencyPolicy policy) {
  if (policy == ConsistencyPolicy::uniform) return 0.1;
  if (n == 3) return 0.05;
  if (n == 4) return 0.08;
  return 0.1;
}

ConsistencyVerdict screen_consistency(const PriorityVector& pv, std::size_t n,
                                      ConsistencyPolicy policy) {
  ConsistencyVerdict v;
  v.cr = pv.cr;
  v.threshold = consistency_threshold(n, policy);
  if (n <= 2 || pv.cr <= v.threshold) {
    v.verdict = Verdict::pass;
  } else {
    v.verdict = policy == ConsistencyPolicy::saaty1994 ? Verdict::fail : Verdict::warn;
  }
  return v;
}

}  // namespace anp
