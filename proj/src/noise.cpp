#include <cmath>

#include <fmt/format.h>

#include "rblab/rbsim.hpp"

namespace rblab {

namespace {

void require_qubit(const GroupBundle& bundle, const char* who) {
  if (bundle.group->hilbert_dim() != 2) throw DomainError(fmt::format("{}: single-qubit group required", who));
}

CMat rotation(const Eigen::Vector3d& axis, double theta) {
  const Eigen::Vector3d n = axis.normalized();
  const cplx i(0.0, 1.0);
  CMat gen = n(0) * pauli_matrix(1) + n(1) * pauli_matrix(2) + n(2) * pauli_matrix(3);
  return std::cos(theta / 2) * CMat::Identity(2, 2) - i * std::sin(theta / 2) * gen;
}

// Rotation axis of a single-qubit unitary with the angle taken in [0, pi].
Eigen::Vector3d rotation_axis(const CMat& u) {
  CMat v = u / std::sqrt(u.determinant());
  if (v.trace().real() < 0.0) v = -v;
  const cplx i(0.0, 1.0);
  Eigen::Vector3d n;
  for (int k = 0; k < 3; ++k) n(k) = (0.5 * i * (v * pauli_matrix(k + 1)).trace()).real();
  if (n.norm() < 1e-9) return Eigen::Vector3d::UnitZ();
  // For pi rotations both signs are valid; make the first nonzero component positive.
  if (std::abs(v.trace().real()) < 1e-9) {
    for (int k = 0; k < 3; ++k)
      if (std::abs(n(k)) > 1e-9) {
        if (n(k) < 0) n = -n;
        break;
      }
  }
  return n.normalized();
}

ImplementationMap checked(ImplementationMap phi, const char* who) {
  if (!phi.is_cp()) throw DomainError(fmt::format("{}: some phi(g) is not completely positive", who));
  if (!phi.is_trace_nonincreasing()) throw DomainError(fmt::format("{}: some phi(g) increases trace", who));
  return phi;
}

}  // namespace

ImplementationMap gate_independent(const GroupBundle& bundle, const SuperOp& lambda) {
  const auto omega = ImplementationMap::from_representation(bundle.omega);
  std::vector<SuperOp> maps;
  for (const auto& w : omega.maps()) maps.push_back(lambda * w);
  return checked(ImplementationMap(bundle.group, std::move(maps)), "gate_independent");
}

ImplementationMap overrotation_own_axis(const GroupBundle& bundle, double theta) {
  require_qubit(bundle, "overrotation_own_axis");
  std::vector<SuperOp> maps;
  for (int g = 0; g < bundle.group->order(); ++g) {
    const CMat& u = bundle.group->unitary(g);
    maps.push_back(SuperOp::from_unitary(rotation(rotation_axis(u), theta) * u));
  }
  return checked(ImplementationMap(bundle.group, std::move(maps)), "overrotation_own_axis");
}

ImplementationMap overrotation_fixed_axis(const GroupBundle& bundle, const Eigen::Vector3d& axis,
                                          const std::vector<double>& angles) {
  require_qubit(bundle, "overrotation_fixed_axis");
  if (static_cast<int>(angles.size()) != bundle.group->order())
    throw DomainError("overrotation_fixed_axis: one angle per group element required");
  if (axis.norm() == 0.0) throw DomainError("overrotation_fixed_axis: zero axis");
  std::vector<SuperOp> maps;
  for (int g = 0; g < bundle.group->order(); ++g)
    maps.push_back(SuperOp::from_unitary(rotation(axis, angles[static_cast<size_t>(g)]) * bundle.group->unitary(g)));
  return checked(ImplementationMap(bundle.group, std::move(maps)), "overrotation_fixed_axis");
}

SuperOp damping_t(double gamma) {
  if (gamma < 0.0 || gamma > 1.0) throw DomainError("damping_t: gamma outside [0, 1]");
  CMat t = CMat::Zero(4, 4);
  t(0, 0) = 1.0;
  t(1, 1) = std::sqrt(gamma);
  t(2, 2) = std::sqrt(gamma);
  t(3, 0) = 1.0 - gamma;
  t(3, 3) = gamma;
  return SuperOp(2, t);
}

SuperOp m1_alpha(double alpha) {
  CMat m = CMat::Identity(4, 4);
  m(1, 1) = alpha;
  return SuperOp(2, m);
}

SuperOp m2_alpha(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("m2_alpha: alpha must be positive");
  CMat m = CMat::Identity(4, 4);
  m(3, 3) = 1.0 / alpha;
  return SuperOp(2, m);
}

ImplementationMap counterexample_ix_a(const GroupBundle& bundle, double alpha, double gamma) {
  require_qubit(bundle, "counterexample_ix_a");
  if (!(alpha > 0.0) || alpha > 1.0) throw DomainError("counterexample_ix_a: alpha outside (0, 1]");
  const SuperOp left = damping_t(gamma) * m1_alpha(alpha);
  const SuperOp right = m2_alpha(alpha);
  std::vector<SuperOp> maps;
  for (int g = 0; g < bundle.group->order(); ++g) maps.push_back(left * SuperOp(2, bundle.omega(g)) * right);
  return checked(ImplementationMap(bundle.group, std::move(maps)), "counterexample_ix_a");
}

RMat leak_stochastic_matrix(int d, int levels, double mu) {
  if (levels < 1 || levels >= d) throw DomainError("leak_stochastic_matrix: need 1 <= L < d");
  if (mu < 0.0 || mu > 1.0) throw DomainError("leak_stochastic_matrix: mu outside [0, 1]");
  RMat s = RMat::Identity(d, d);
  for (int i = 0; i + 1 < levels; ++i) {
    s(i, i) = mu;
    s(i, i + 1) = 1.0 - mu;
  }
  return s;
}

SuperOp leak_channel(int d, int levels, double mu) {
  const RMat s = leak_stochastic_matrix(d, levels, mu);
  // Lambda(|i><j|) = delta_ij sum_k S(i,k) |k><k| on the first L levels, zero elsewhere.
  CMat liou = CMat::Zero(d * d, d * d);
  for (int i = 0; i < levels; ++i)
    for (int k = 0; k < d; ++k) liou(k + k * d, i + i * d) = s(i, k);
  return SuperOp::from_liouville(d, liou);
}

ImplementationMap stochastic_leak(const GroupBundle& bundle, int levels, double mu) {
  const int d = bundle.group->hilbert_dim();
  const SuperOp lambda = leak_channel(d, levels, mu);
  CMat q = CMat::Identity(d, d);
  for (int i = 0; i < levels; ++i) q(i, i) = 0.0;
  std::vector<SuperOp> maps;
  for (int g = 0; g < bundle.group->order(); ++g) {
    const CMat k = bundle.group->unitary(g) * q;
    maps.push_back(lambda + SuperOp::from_kraus(std::span<const CMat>(&k, 1)));
  }
  return checked(ImplementationMap(bundle.group, std::move(maps)), "stochastic_leak");
}

}  // namespace rblab
