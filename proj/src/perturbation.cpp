#include <fmt/format.h>

#include "rblab/decay.hpp"

namespace rblab {

double sep(const CMat& a1, const CMat& a2) {
  if (a1.rows() != a1.cols() || a2.rows() != a2.cols()) throw DomainError("sep: square matrices required");
  const auto p = a1.rows();
  const auto q = a2.rows();
  // vec(A1 Z - Z A2) = (1_q (x) A1 - A2^T (x) 1_p) vec(Z).
  const CMat sylvester = kron(CMat(CMat::Identity(q, q)), a1) - kron(CMat(a2.transpose()), CMat(CMat::Identity(p, p)));
  return min_singular_value(sylvester);
}

double bauer_fike_radius(const CMat& a, const CMat& e) {
  Eigen::ComplexEigenSolver<CMat> es(a);
  if (es.info() != Eigen::Success) throw NumericError("bauer_fike_radius: eigendecomposition failed");
  const double kappa = condition_number(es.eigenvectors());
  if (!(kappa < 1e12)) throw DomainError(fmt::format("bauer_fike_radius: matrix is not diagonalizable (kappa {:.3e})", kappa));
  return kappa * spectral_norm(e);
}

EigvecPerturbation eigvec_perturb_estimate(const CMat& a, const CMat& e, const CVec& x1) {
  const auto n = a.rows();
  if (x1.size() != n || e.rows() != n) throw DomainError("eigvec_perturb_estimate: shape mismatch");
  const CVec x = x1 / x1.norm();
  // Columns 2..n of the Householder Q of x span its orthogonal complement.
  const CMat xm = x;
  Eigen::HouseholderQR<CMat> qr(xm);
  const CMat q = qr.householderQ() * CMat::Identity(n, n);
  const CMat x2 = q.rightCols(n - 1);
  const cplx a1 = x.dot(a * x);
  const CMat a2 = x2.adjoint() * a * x2;
  const CMat resolvent = (a1 * CMat::Identity(n - 1, n - 1) - a2).inverse();
  EigvecPerturbation out;
  out.r1 = x + x2 * resolvent * x2.adjoint() * e * x;
  const Eigen::RowVectorXcd l = x.adjoint() + x.adjoint() * e * x2 * resolvent * x2.adjoint();
  out.l1 = l.adjoint();
  return out;
}

}  // namespace rblab
