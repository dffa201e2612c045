#include "rblab/linalg.hpp"

#include <cmath>

namespace rblab {

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

RMat kron(const RMat& a, const RMat& b) {
  RMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVec vec(const CMat& a) {
  return Eigen::Map<const CVec>(a.data(), a.size());
}

CMat unvec(const CVec& v, Eigen::Index rows) {
  if (rows <= 0 || v.size() % rows != 0) throw DomainError("unvec: size mismatch");
  return Eigen::Map<const CMat>(v.data(), rows, v.size() / rows);
}

CMat partial_trace_first(const CMat& m, Eigen::Index da, Eigen::Index db) {
  if (m.rows() != da * db || m.cols() != da * db)
    throw DomainError("partial_trace_first: shape mismatch");
  CMat out = CMat::Zero(db, db);
  for (Eigen::Index a = 0; a < da; ++a) out += m.block(a * db, a * db, db, db);
  return out;
}

CMat partial_trace_second(const CMat& m, Eigen::Index da, Eigen::Index db) {
  if (m.rows() != da * db || m.cols() != da * db)
    throw DomainError("partial_trace_second: shape mismatch");
  CMat out(da, da);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j)
      out(i, j) = m.block(i * db, j * db, db, db).trace();
  return out;
}

double spectral_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues()(0);
}

double trace_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues().sum();
}

double min_singular_value(const CMat& m) {
  Eigen::JacobiSVD<CMat> svd(m);
  const auto& s = svd.singularValues();
  return s(s.size() - 1);
}

double condition_number(const CMat& m) {
  Eigen::JacobiSVD<CMat> svd(m);
  const auto& s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

double min_hermitian_eigenvalue(const CMat& m) {
  CMat h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

CMat ginibre(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  CMat g(rows, cols);
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = n01(rng);
      const double im = n01(rng);
      g(i, j) = cplx(re * s, im * s);
    }
  return g;
}

CMat haar_unitary(int d, std::mt19937_64& rng) {
  CMat z = ginibre(d, d, rng);
  Eigen::HouseholderQR<CMat> qr(z);
  CMat q = qr.householderQ();
  CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const cplx diag = r(j, j);
    const double mag = std::abs(diag);
    if (mag > 0) q.col(j) *= diag / mag;
  }
  return q;
}

CVec haar_state(int d, std::mt19937_64& rng) {
  CMat g = ginibre(d, 1, rng);
  CVec v = g.col(0);
  return v / v.norm();
}

CMat canonical_phase(const CMat& u) {
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    const cplx z = u.data()[k];
    if (std::abs(z) > 1e-6) return u * (std::conj(z) / std::abs(z));
  }
  return u;
}

}  // namespace rblab
