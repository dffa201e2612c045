#include "rblab/superop.hpp"

namespace rblab {

SuperOp::SuperOp(int d, CMat mat) : dim_(d), mat_(std::move(mat)) {
  if (d < 1 || mat_.rows() != d * d || mat_.cols() != d * d)
    throw DomainError("SuperOp: matrix must be d^2 x d^2");
}

SuperOp SuperOp::identity(int d) { return SuperOp(d, CMat::Identity(d * d, d * d)); }

SuperOp SuperOp::zero(int d) { return SuperOp(d, CMat::Zero(d * d, d * d)); }

SuperOp SuperOp::from_liouville(int d, const CMat& liouville) {
  const auto& b = OperatorBasis::of(d).change();
  return SuperOp(d, b.adjoint() * liouville * b);
}

SuperOp SuperOp::from_kraus(std::span<const CMat> kraus) {
  if (kraus.empty()) throw DomainError("from_kraus: empty Kraus list");
  const auto d = kraus.front().rows();
  CMat s = CMat::Zero(d * d, d * d);
  for (const auto& k : kraus) {
    if (k.rows() != d || k.cols() != d)
      throw DomainError("from_kraus: Kraus operators must be square with equal dimension");
    // vec(K X K^dag) = (conj(K) (x) K) vec(X).
    s += kron(CMat(k.conjugate()), k);
  }
  return from_liouville(static_cast<int>(d), s);
}

SuperOp SuperOp::from_unitary(const CMat& u) {
  return from_kraus(std::span<const CMat>(&u, 1));
}

CMat SuperOp::liouville() const {
  const auto& b = OperatorBasis::of(dim_).change();
  return b * mat_ * b.adjoint();
}

CMat SuperOp::apply(const CMat& op) const {
  if (op.rows() != dim_ || op.cols() != dim_) throw DomainError("SuperOp::apply: shape mismatch");
  return from_coeffs(mat_ * to_coeffs(op), dim_);
}

cplx SuperOp::expectation(const CMat& effect, const CMat& state) const {
  return to_coeffs(effect).dot(mat_ * to_coeffs(state));
}

bool SuperOp::is_trace_preserving(double tol) const {
  // Only b_0 has nonzero trace, so TP iff row 0 is e_0^T.
  RVec e0 = RVec::Zero(mat_.cols());
  e0(0) = 1.0;
  return (mat_.row(0).transpose() - e0.cast<cplx>()).cwiseAbs().maxCoeff() <= tol;
}

bool SuperOp::is_hermiticity_preserving(double tol) const {
  return mat_.imag().cwiseAbs().maxCoeff() <= tol;
}

SuperOp SuperOp::adjoint() const { return SuperOp(dim_, mat_.adjoint()); }

SuperOp SuperOp::inverse() const {
  Eigen::FullPivLU<CMat> lu(mat_);
  if (!lu.isInvertible()) throw DomainError("SuperOp::inverse: map is singular");
  return SuperOp(dim_, lu.inverse());
}

SuperOp& SuperOp::operator+=(const SuperOp& o) {
  if (o.dim_ != dim_) throw DomainError("SuperOp: dimension mismatch");
  mat_ += o.mat_;
  return *this;
}

SuperOp& SuperOp::operator-=(const SuperOp& o) {
  if (o.dim_ != dim_) throw DomainError("SuperOp: dimension mismatch");
  mat_ -= o.mat_;
  return *this;
}

SuperOp& SuperOp::operator*=(cplx s) {
  mat_ *= s;
  return *this;
}

SuperOp operator*(const SuperOp& a, const SuperOp& b) {
  if (a.dim() != b.dim()) throw DomainError("SuperOp: dimension mismatch");
  return SuperOp(a.dim(), a.mat() * b.mat());
}

SuperOp operator+(SuperOp a, const SuperOp& b) { return a += b; }
SuperOp operator-(SuperOp a, const SuperOp& b) { return a -= b; }
SuperOp operator*(cplx s, SuperOp a) { return a *= s; }

CMat to_choi(const SuperOp& op) {
  const int d = op.dim();
  const CMat s = op.liouville();
  CMat j(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int jj = 0; jj < d; ++jj)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) j(i * d + a, jj * d + b) = s(a + b * d, i + jj * d);
  return j;
}

SuperOp from_choi(const CMat& choi, int d) {
  if (choi.rows() != d * d || choi.cols() != d * d) throw DomainError("from_choi: shape mismatch");
  CMat s(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int jj = 0; jj < d; ++jj)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) s(a + b * d, i + jj * d) = choi(i * d + a, jj * d + b);
  return SuperOp::from_liouville(d, s);
}

bool is_cp(const CMat& choi, double tol) { return min_hermitian_eigenvalue(choi) >= -tol; }

double entanglement_fidelity(const SuperOp& a, const SuperOp& b) {
  if (a.dim() != b.dim()) throw DomainError("entanglement_fidelity: dimension mismatch");
  const double d2 = static_cast<double>(a.dim()) * a.dim();
  return (b.mat().adjoint() * a.mat()).trace().real() / d2;
}

double avg_fidelity(const SuperOp& a, const SuperOp& b) {
  const double d = a.dim();
  return (d * entanglement_fidelity(a, b) + 1.0) / (d + 1.0);
}

SuperOp depolarizing(int d, double p) {
  CMat m = CMat::Identity(d * d, d * d) * (1.0 - p);
  m(0, 0) = 1.0;
  return SuperOp(d, m);
}

}  // namespace rblab
