#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "rblab/superop.hpp"

namespace rblab {

namespace {

const std::array<CMat, 4>& paulis() {
  static const std::array<CMat, 4> p = [] {
    std::array<CMat, 4> out;
    const cplx i(0.0, 1.0);
    out[0] = CMat::Identity(2, 2);
    out[1] = CMat(2, 2);
    out[1] << 0.0, 1.0, 1.0, 0.0;
    out[2] = CMat(2, 2);
    out[2] << 0.0, -i, i, 0.0;
    out[3] = CMat(2, 2);
    out[3] << 1.0, 0.0, 0.0, -1.0;
    return out;
  }();
  return p;
}

}  // namespace

const CMat& pauli_matrix(int k) {
  if (k < 0 || k > 3) throw DomainError("pauli_matrix: index out of range");
  return paulis()[static_cast<size_t>(k)];
}

bool is_power_of_two(int d) { return d > 0 && (d & (d - 1)) == 0; }

CMat pauli_string(int index, int qubits) {
  CMat out = CMat::Identity(1, 1);
  for (int j = 0; j < qubits; ++j) {
    const int shift = 2 * (qubits - 1 - j);
    out = kron(out, pauli_matrix((index >> shift) & 3));
  }
  return out;
}

OperatorBasis::OperatorBasis(int d) : dim_(d), pauli_(is_power_of_two(d)) {
  if (d < 1) throw DomainError("OperatorBasis: dimension must be positive");
  const int n = d * d;
  elements_.reserve(static_cast<size_t>(n));
  if (pauli_) {
    int q = 0;
    while ((1 << q) < d) ++q;
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (int k = 0; k < n; ++k) elements_.push_back(s * pauli_string(k, q));
  } else {
    const cplx i(0.0, 1.0);
    const double r2 = 1.0 / std::sqrt(2.0);
    elements_.push_back(CMat::Identity(d, d) / std::sqrt(static_cast<double>(d)));
    for (int j = 0; j < d; ++j)
      for (int k = j + 1; k < d; ++k) {
        CMat sym = CMat::Zero(d, d);
        sym(j, k) = r2;
        sym(k, j) = r2;
        elements_.push_back(sym);
        CMat asym = CMat::Zero(d, d);
        asym(j, k) = -i * r2;
        asym(k, j) = i * r2;
        elements_.push_back(asym);
      }
    for (int l = 1; l < d; ++l) {
      CMat h = CMat::Zero(d, d);
      const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
      for (int j = 0; j < l; ++j) h(j, j) = norm;
      h(l, l) = -l * norm;
      elements_.push_back(h);
    }
  }
  change_.resize(n, n);
  for (int k = 0; k < n; ++k) change_.col(k) = vec(elements_[static_cast<size_t>(k)]);
}

const OperatorBasis& OperatorBasis::of(int d) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<OperatorBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(d);
  if (it == cache.end())
    it = cache.emplace(d, std::unique_ptr<OperatorBasis>(new OperatorBasis(d))).first;
  return *it->second;
}

CVec to_coeffs(const CMat& op) {
  if (op.rows() != op.cols()) throw DomainError("to_coeffs: operator must be square");
  const auto& basis = OperatorBasis::of(static_cast<int>(op.rows()));
  return basis.change().adjoint() * vec(op);
}

CMat from_coeffs(const CVec& coeffs, int d) {
  if (coeffs.size() != d * d) throw DomainError("from_coeffs: length must be d^2");
  const auto& basis = OperatorBasis::of(d);
  return unvec(basis.change() * coeffs, d);
}

}  // namespace rblab
