#pragma once

#include <span>
#include <vector>

#include "anp/judgments.hpp"
#include "anp/matrix.hpp"

// Data-parallel kernels used by the supermatrix pipeline.
//
// Each kernel has an OpenMP implementation in anp::kernels and a plain serial
// twin in anp::kernels::reference. Both compute every output element with the
// same reduction order, so results are bitwise identical regardless of the
// thread count.
namespace anp::kernels {

Matrix multiply(const Matrix& a, const Matrix& b);

/// a * v for a column vector v.
std::vector<double> multiply(const Matrix& a, std::span<const double> v);

/// principal_eigenvector over a batch of independent matrices.
std::vector<PriorityVector> eigenvectors(std::span<const ComparisonMatrix> matrices,
                                         const RciTable& rci);

int max_threads();

namespace reference {

Matrix multiply(const Matrix& a, const Matrix& b);
std::vector<double> multiply(const Matrix& a, std::span<const double> v);
std::vector<PriorityVector> eigenvectors(std::span<const ComparisonMatrix> matrices,
                                         const RciTable& rci);

}  // namespace reference
}  // namespace anp::kernels
