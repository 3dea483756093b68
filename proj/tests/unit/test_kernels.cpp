#include <omp.h>

#include "anp/kernels.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace anp;

namespace {

Matrix random_stochastic(anp::testing::Rng& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution zero(0.3);
  Matrix m(n);
  for (std::size_t c = 0; c < n; ++c) {
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) total += m(r, c) = zero(rng) ? 0.0 : u(rng);
    if (total == 0.0) m(c, c) = total = 1.0;
    for (std::size_t r = 0; r < n; ++r) m(r, c) /= total;
  }
  return m;
}

}  // namespace

TEST_CASE("parallel multiply is bitwise equal to the reference") {
  for (int threads : {1, 2, 4}) {
    omp_set_num_threads(threads);
    anp::testing::Rng rng(threads);
    for (std::size_t n : {3, 17, 64, 150}) {
      const auto a = random_stochastic(rng, n);
      const auto b = random_stochastic(rng, n);
      CHECK(kernels::multiply(a, b) == kernels::reference::multiply(a, b));
      const auto v = b.column(0);
      CHECK(kernels::multiply(a, v) == kernels::reference::multiply(a, v));
    }
  }
}

TEST_CASE("batched eigenvectors equal the reference") {
  anp::testing::Rng rng(11);
  std::vector<ComparisonMatrix> batch;
  for (int k = 0; k < 40; ++k)
    batch.push_back(anp::testing::random_matrix(rng, std::uniform_int_distribution<std::size_t>(2, 10)(rng)));
  const auto rci = RciTable::saaty1980();
  for (int threads : {1, 3}) {
    omp_set_num_threads(threads);
    const auto par = kernels::eigenvectors(batch, rci);
    const auto ref = kernels::reference::eigenvectors(batch, rci);
    REQUIRE(par.size() == ref.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
      CHECK(par[i].weights == ref[i].weights);
      CHECK(par[i].cr == ref[i].cr);
    }
  }
}

TEST_CASE("batched eigenvectors rethrow the first failure") {
  anp::testing::Rng rng(5);
  std::vector<ComparisonMatrix> batch;
  for (std::size_t n : {3, 4, 11, 5, 12}) batch.push_back(anp::testing::random_matrix(rng, n));
  try {
    kernels::eigenvectors(batch, RciTable::saaty1980());
    FAIL("expected UnsupportedOrder");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedOrder);
    CHECK(std::string(e.what()).find("11") != std::string::npos);
  }
}

TEST_CASE("identity is neutral") {
  anp::testing::Rng rng(2);
  const auto a = random_stochastic(rng, 70);
  CHECK(kernels::multiply(a, Matrix::identity(70)) == a);
  CHECK(max_abs_diff(a, a) == 0.0);
}
