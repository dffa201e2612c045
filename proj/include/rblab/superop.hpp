#pragma once

#include <span>
#include <vector>

#include "rblab/linalg.hpp"

namespace rblab {

// Orthonormal Hermitian operator basis {b_k} on C^d.
//
// d = 2^q: normalized Pauli strings P/sqrt(d), index k = sum_j k_j 4^(q-1-j)
// with qubit 0 most significant and single-qubit order (I, X, Y, Z).
// Otherwise: generalized Gell-Mann, b_0 = 1/sqrt(d), then for every pair
// j < k the symmetric and antisymmetric off-diagonal elements, then the
// diagonal elements h_l, l = 1..d-1.
class OperatorBasis {
 public:
  // Shared immutable instance; thread-safe.
  static const OperatorBasis& of(int d);

  int dim() const { return dim_; }
  const CMat& element(int k) const { return elements_[static_cast<size_t>(k)]; }
  // Columns are vec(b_k); unitary.
  const CMat& change() const { return change_; }
  bool is_pauli() const { return pauli_; }

 private:
  explicit OperatorBasis(int d);
  int dim_;
  bool pauli_;
  std::vector<CMat> elements_;
  CMat change_;
};

const CMat& pauli_matrix(int k);  // k in 0..3 -> I, X, Y, Z (unnormalized)
CMat pauli_string(int index, int qubits);  // unnormalized tensor product
bool is_power_of_two(int d);

// Coefficients rho_k = Tr[b_k^dag rho].
CVec to_coeffs(const CMat& op);
CMat from_coeffs(const CVec& coeffs, int d);

// Linear map on d x d operators in the operator basis:
// mat(j, k) = Tr[b_j^dag E(b_k)].
class SuperOp {
 public:
  SuperOp() = default;
  SuperOp(int d, CMat mat);

  static SuperOp identity(int d);
  static SuperOp zero(int d);
  static SuperOp from_kraus(std::span<const CMat> kraus);
  static SuperOp from_unitary(const CMat& u);
  // S with vec(E(X)) = S vec(X) in column-stacking order.
  static SuperOp from_liouville(int d, const CMat& liouville);

  int dim() const { return dim_; }
  const CMat& mat() const { return mat_; }
  CMat liouville() const;

  CMat apply(const CMat& op) const;
  // <<effect| E |state>> = Tr[effect^dag E(state)].
  cplx expectation(const CMat& effect, const CMat& state) const;

  bool is_trace_preserving(double tol = 1e-10) const;
  bool is_hermiticity_preserving(double tol = 1e-10) const;
  // Real part of mat; the transfer matrix of a Hermiticity-preserving map.
  RMat transfer_matrix() const { return mat_.real(); }

  SuperOp adjoint() const;  // Heisenberg-picture dual map
  SuperOp inverse() const;

  SuperOp& operator+=(const SuperOp& o);
  SuperOp& operator-=(const SuperOp& o);
  SuperOp& operator*=(cplx s);

 private:
  int dim_ = 0;
  CMat mat_;
};

SuperOp operator*(const SuperOp& a, const SuperOp& b);  // composition a after b
SuperOp operator+(SuperOp a, const SuperOp& b);
SuperOp operator-(SuperOp a, const SuperOp& b);
SuperOp operator*(cplx s, SuperOp a);

// Choi matrix J = sum_ij |i><j| (x) E(|i><j|), input factor first.
CMat to_choi(const SuperOp& op);
SuperOp from_choi(const CMat& choi, int d);
bool is_cp(const CMat& choi, double tol = 1e-9);
inline bool is_cp(const SuperOp& op, double tol = 1e-9) { return is_cp(to_choi(op), tol); }

// F_e = Re Tr[b^dag a] / d^2.
double entanglement_fidelity(const SuperOp& a, const SuperOp& b);
// F_avg = (d F_e + 1) / (d + 1).
double avg_fidelity(const SuperOp& a, const SuperOp& b);

// Qubit-count-agnostic depolarizing channel rho -> (1-p) rho + p Tr(rho) 1/d.
SuperOp depolarizing(int d, double p);

}  // namespace rblab
