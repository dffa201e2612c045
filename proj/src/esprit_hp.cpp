#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <fmt/format.h>

#include "rblab/poles.hpp"

namespace rblab {

namespace {

using Real = boost::multiprecision::cpp_bin_float_50;
using Complex = std::complex<Real>;
using HMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

}  // namespace

// Same algorithm as esprit(): the signal subspace comes from a column-pivoted
// QR (exact data has rank n, so the leading n columns of Q span it) and the
// shift operator is diagonalized at working precision before rounding.
PoleSet esprit_exact(const PoleSet& truth, int M, int L, int n) {
  if (L < 1 || L >= M) throw DomainError(fmt::format("esprit_exact: need 1 <= L < M, got L = {}, M = {}", L, M));
  if (n < 1 || n > std::min(L, M - L + 1)) throw DomainError("esprit_exact: n exceeds min(L, M-L+1)");
  const bool weighted = truth.coefficients.size() == truth.poles.size();
  std::vector<Real> y(static_cast<size_t>(M + 1), Real(0));
  for (size_t i = 0; i < truth.poles.size(); ++i) {
    const Complex z(Real(truth.poles[i].real()), Real(truth.poles[i].imag()));
    const Complex a = weighted ? Complex(Real(truth.coefficients[i].real()), Real(truth.coefficients[i].imag()))
                               : Complex(Real(1) / Real(truth.poles.size()));
    Complex zm(Real(1));
    for (int m = 0; m <= M; ++m) {
      y[static_cast<size_t>(m)] += (a * zm).real();
      zm *= z;
    }
  }
  HMat h(L + 1, M - L + 1);
  for (int j = 0; j <= L; ++j)
    for (int k = 0; k <= M - L; ++k) h(j, k) = y[static_cast<size_t>(j + k)];
  Eigen::ColPivHouseholderQR<HMat> qr(h);
  qr.setThreshold(Real("1e-40"));
  if (qr.rank() < n) throw DomainError(fmt::format("esprit_exact: Hankel rank {} is below the requested {} poles",
                                                   static_cast<long>(qr.rank()), n));
  const HMat q = HMat(qr.householderQ()).leftCols(n);
  const HMat up = q.topRows(L);
  const HMat down = q.bottomRows(L);
  const HMat psi = up.colPivHouseholderQr().solve(down);
  Eigen::EigenSolver<HMat> es(psi, false);
  if (es.info() != Eigen::Success) throw NumericError("esprit_exact: eigendecomposition failed");
  PoleSet out;
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto z = es.eigenvalues()(k);
    out.poles.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  }
  sort_poles(out);
  return out;
}

}  // namespace rblab
