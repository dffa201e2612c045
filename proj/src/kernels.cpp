#include "rblab/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

#if defined(RBLAB_HAVE_AVX2_KERNELS)
#include <immintrin.h>
#endif

namespace rblab::kernels {

namespace {

void check_matvec(std::span<const double> a, std::span<const double> x, std::span<double> y) {
  if (a.size() != x.size() * y.size()) throw std::invalid_argument("real_matvec: shape mismatch");
}

}  // namespace

void real_matvec_scalar(std::span<const double> a, std::span<const double> x, std::span<double> y) {
  check_matvec(a, x, y);
  const size_t rows = y.size();
  for (size_t i = 0; i < rows; ++i) y[i] = 0.0;
  for (size_t j = 0; j < x.size(); ++j) {
    const double xj = x[j];
    const double* col = a.data() + j * rows;
    for (size_t i = 0; i < rows; ++i) y[i] += col[i] * xj;
  }
}

void complex_axpy_scalar(std::complex<double> alpha, std::span<const std::complex<double>> x,
                         std::span<std::complex<double>> y) {
  if (x.size() != y.size()) throw std::invalid_argument("complex_axpy: length mismatch");
  for (size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

#if defined(RBLAB_HAVE_AVX2_KERNELS)

__attribute__((target("avx2"))) void real_matvec_avx2(std::span<const double> a, std::span<const double> x,
                                                          std::span<double> y) {
  check_matvec(a, x, y);
  const size_t rows = y.size();
  const size_t vec_rows = rows - rows % 4;
  for (size_t i = 0; i < rows; ++i) y[i] = 0.0;
  for (size_t j = 0; j < x.size(); ++j) {
    const double xj = x[j];
    const __m256d xv = _mm256_set1_pd(xj);
    const double* col = a.data() + j * rows;
    size_t i = 0;
    for (; i < vec_rows; i += 4) {
      // Separate multiply and add keep results bitwise equal to the scalar path.
      const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(col + i), xv);
      _mm256_storeu_pd(y.data() + i, _mm256_add_pd(_mm256_loadu_pd(y.data() + i), prod));
    }
    for (; i < rows; ++i) y[i] += col[i] * xj;
  }
}

__attribute__((target("avx2"))) void complex_axpy_avx2(std::complex<double> alpha,
                                                           std::span<const std::complex<double>> x,
                                                           std::span<std::complex<double>> y) {
  if (x.size() != y.size()) throw std::invalid_argument("complex_axpy: length mismatch");
  const size_t n = x.size();
  const size_t vec_n = n - n % 2;
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  auto* xd = reinterpret_cast<const double*>(x.data());
  auto* yd = reinterpret_cast<double*>(y.data());
  size_t i = 0;
  for (; i < vec_n; i += 2) {
    // Lanes hold (re0, im0, re1, im1); swapped lanes give (im0, re0, im1, re1).
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d xs = _mm256_permute_pd(xv, 0b0101);
    const __m256d t1 = _mm256_mul_pd(ar, xv);
    const __m256d t2 = _mm256_mul_pd(ai, xs);
    const __m256d prod = _mm256_addsub_pd(t1, t2);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * i), prod));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

#endif

bool avx2_active() {
#if defined(RBLAB_HAVE_AVX2_KERNELS)
  static const bool active = [] {
    const char* env = std::getenv("RBLAB_DISABLE_SIMD");
    if (env != nullptr && std::strcmp(env, "0") != 0) return false;
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  return active;
#else
  return false;
#endif
}

void real_matvec(std::span<const double> a, std::span<const double> x, std::span<double> y) {
#if defined(RBLAB_HAVE_AVX2_KERNELS)
  if (avx2_active()) return real_matvec_avx2(a, x, y);
#endif
  real_matvec_scalar(a, x, y);
}

void complex_axpy(std::complex<double> alpha, std::span<const std::complex<double>> x,
                  std::span<std::complex<double>> y) {
#if defined(RBLAB_HAVE_AVX2_KERNELS)
  if (avx2_active()) return complex_axpy_avx2(alpha, x, y);
#endif
  complex_axpy_scalar(alpha, x, y);
}

}  // namespace rblab::kernels
