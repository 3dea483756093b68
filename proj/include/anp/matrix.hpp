#pragma once

#include <cstddef>
#include <vector>

namespace anp {

/// Dense row-major square matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  std::vector<double> column(std::size_t c) const {
    std::vector<double> out(n_);
    for (std::size_t r = 0; r < n_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  double column_sum(std::size_t c) const {
    double s = 0.0;
    for (std::size_t r = 0; r < n_; ++r) s += (*this)(r, c);
    return s;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Largest absolute elementwise difference.
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace anp
