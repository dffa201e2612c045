#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace rblab::kernels {

// y = A x for a column-major rows x cols matrix A. y must not alias x.
void real_matvec_scalar(std::span<const double> a, std::span<const double> x, std::span<double> y);
// y += alpha x.
void complex_axpy_scalar(std::complex<double> alpha, std::span<const std::complex<double>> x,
                         std::span<std::complex<double>> y);

#if defined(RBLAB_HAVE_AVX2_KERNELS)
void real_matvec_avx2(std::span<const double> a, std::span<const double> x, std::span<double> y);
void complex_axpy_avx2(std::complex<double> alpha, std::span<const std::complex<double>> x,
                       std::span<std::complex<double>> y);
#endif

// True when AVX2 variants are compiled in and the running CPU supports them.
bool avx2_active();

// Dispatching entry points used by the library.
void real_matvec(std::span<const double> a, std::span<const double> x, std::span<double> y);
void complex_axpy(std::complex<double> alpha, std::span<const std::complex<double>> x,
                  std::span<std::complex<double>> y);

}  // namespace rblab::kernels
