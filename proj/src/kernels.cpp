#include "anp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "anp/error.hpp"

namespace anp {

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double d = 0.0;
  const auto& x = a.data();
  const auto& y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

namespace kernels {
namespace {

void check_square(const Matrix& a, const Matrix& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "matrix size mismatch");
}

// One output row; shared by the serial and parallel paths so the summation
// order never differs.
inline void multiply_row(const Matrix& a, const Matrix& b, Matrix& c, std::size_t i) {
  const std::size_t n = a.size();
  const double* arow = a.data().data() + i * n;
  const double* bdata = b.data().data();
  double* crow = c.data().data() + i * n;
  for (std::size_t j = 0; j < n; ++j) crow[j] = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double aik = arow[k];
    if (aik == 0.0) continue;
    const double* brow = bdata + k * n;
    for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
  }
}

inline double dot_row(const Matrix& a, std::span<const double> v, std::size_t i) {
  const std::size_t n = a.size();
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += a(i, k) * v[k];
  return s;
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  check_square(a, b);
  const auto n = static_cast<std::ptrdiff_t>(a.size());
  Matrix c(a.size());
#pragma omp parallel for schedule(static) if (n >= 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) multiply_row(a, b, c, static_cast<std::size_t>(i));
  return c;
}

std::vector<double> multiply(const Matrix& a, std::span<const double> v) {
  const auto n = static_cast<std::ptrdiff_t>(a.size());
  std::vector<double> out(a.size());
#pragma omp parallel for schedule(static) if (n >= 256)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = dot_row(a, v, static_cast<std::size_t>(i));
  return out;
}

std::vector<PriorityVector> eigenvectors(std::span<const ComparisonMatrix> matrices,
                                         const RciTable& rci) {
  const auto count = static_cast<std::ptrdiff_t>(matrices.size());
  std::vector<PriorityVector> out(matrices.size());
  // Exceptions must not cross the parallel region; keep the first by index.
  std::vector<std::exception_ptr> errors(matrices.size());
#pragma omp parallel for schedule(dynamic) if (count >= 4)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = principal_eigenvector(matrices[k], rci);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

namespace reference {

Matrix multiply(const Matrix& a, const Matrix& b) {
  check_square(a, b);
  Matrix c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) multiply_row(a, b, c, i);
  return c;
}

std::vector<double> multiply(const Matrix& a, std::span<const double> v) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = dot_row(a, v, i);
  return out;
}

std::vector<PriorityVector> eigenvectors(std::span<const ComparisonMatrix> matrices,
                                         const RciTable& rci) {
  std::vector<PriorityVector> out;
  out.reserve(matrices.size());
  for (const auto& m : matrices) out.push_back(principal_eigenvector(m, rci));
  return out;
}

}  // namespace reference
}  // namespace kernels
}  // namespace anp
