#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "rblab/kernels.hpp"

using namespace rblab::kernels;

namespace {

// Textbook column-major matvec.
std::vector<double> matvec_oracle(const std::vector<double>& a, const std::vector<double>& x, size_t rows) {
  std::vector<double> y(rows, 0.0);
  for (size_t c = 0; c < x.size(); ++c)
    for (size_t r = 0; r < rows; ++r) y[r] += a[c * rows + r] * x[c];
  return y;
}

}  // namespace

// Property: every kernel variant matches the oracle for ragged sizes.
TEST(KernelsProperty, MatvecMatchesOracle) {
  std::mt19937_64 rng(91);
  std::normal_distribution<double> n(0.0, 1.0);
  for (size_t rows : {1u, 3u, 4u, 7u, 16u, 33u}) {
    for (size_t cols : {1u, 2u, 5u, 16u}) {
      std::vector<double> a(rows * cols), x(cols);
      for (auto& v : a) v = n(rng);
      for (auto& v : x) v = n(rng);
      const auto want = matvec_oracle(a, x, rows);
      std::vector<double> ys(rows), yd(rows);
      real_matvec_scalar(a, x, ys);
      real_matvec(a, x, yd);
      for (size_t r = 0; r < rows; ++r) {
        EXPECT_NEAR(ys[r], want[r], 1e-12);
        EXPECT_NEAR(yd[r], want[r], 1e-12);
      }
#if defined(RBLAB_HAVE_AVX2_KERNELS)
      if (avx2_active()) {
        std::vector<double> yv(rows);
        real_matvec_avx2(a, x, yv);
        for (size_t r = 0; r < rows; ++r) EXPECT_NEAR(yv[r], ys[r], 1e-12);
      }
#endif
    }
  }
}

TEST(KernelsProperty, AxpyMatchesOracle) {
  std::mt19937_64 rng(92);
  std::normal_distribution<double> n(0.0, 1.0);
  for (size_t len : {0u, 1u, 2u, 3u, 8u, 31u}) {
    std::vector<std::complex<double>> x(len), y0(len);
    for (auto& v : x) v = {n(rng), n(rng)};
    for (auto& v : y0) v = {n(rng), n(rng)};
    const std::complex<double> alpha(n(rng), n(rng));
    auto ys = y0, yd = y0;
    complex_axpy_scalar(alpha, x, ys);
    complex_axpy(alpha, x, yd);
    for (size_t k = 0; k < len; ++k) {
      EXPECT_LT(std::abs(ys[k] - (y0[k] + alpha * x[k])), 1e-13);
      EXPECT_LT(std::abs(yd[k] - ys[k]), 1e-13);
    }
#if defined(RBLAB_HAVE_AVX2_KERNELS)
    if (avx2_active()) {
      auto yv = y0;
      complex_axpy_avx2(alpha, x, yv);
      for (size_t k = 0; k < len; ++k) EXPECT_LT(std::abs(yv[k] - ys[k]), 1e-13);
    }
#endif
  }
}
