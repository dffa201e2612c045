#pragma once

// Hand-rolled random generators for property tests. Every generator takes an
// explicit engine so that failures replay from the printed seed.

#include <random>
#include <vector>

#include "rblab/fourier.hpp"
#include "rblab/linalg.hpp"
#include "rblab/superop.hpp"

namespace rbtest {

using rblab::CMat;
using rblab::CVec;
using rblab::cplx;
using rblab::SuperOp;

// Random CPTP map with `rank` Kraus operators: K_k = G_k S^-1/2, S = sum G^dag G.
inline std::vector<CMat> random_kraus(int d, int rank, std::mt19937_64& rng) {
  std::vector<CMat> g;
  CMat s = CMat::Zero(d, d);
  for (int k = 0; k < rank; ++k) {
    g.push_back(rblab::ginibre(d, d, rng));
    s += g.back().adjoint() * g.back();
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(s);
  const CMat inv_sqrt = es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                        es.eigenvectors().adjoint();
  for (auto& k : g) k = k * inv_sqrt;
  return g;
}

inline SuperOp random_channel(int d, int rank, std::mt19937_64& rng) {
  const auto k = random_kraus(d, rank, rng);
  return SuperOp::from_kraus(k);
}

// Convex mixture (1 - t) id + t E with E a random channel: close to identity for small t.
inline SuperOp near_identity_channel(int d, double t, std::mt19937_64& rng) {
  return SuperOp(d, (1.0 - t) * SuperOp::identity(d).mat() + t * random_channel(d, 2, rng).mat());
}

// Random CP trace-non-increasing map: a channel scaled by s in (0.5, 1].
inline SuperOp random_cp_map(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.5, 1.0);
  return SuperOp(d, u(rng) * random_channel(d, 2, rng).mat());
}

// Random mixed state from a Ginibre matrix.
inline CMat random_state(int d, std::mt19937_64& rng) {
  const CMat g = rblab::ginibre(d, d, rng);
  const CMat r = g * g.adjoint();
  return r / r.trace().real();
}

// Random effect 0 <= E <= 1.
inline CMat random_effect(int d, std::mt19937_64& rng) {
  const CMat g = rblab::ginibre(d, d, rng);
  const CMat h = g * g.adjoint();
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  return h / es.eigenvalues().maxCoeff();
}

inline CMat random_operator(int d, std::mt19937_64& rng) { return rblab::ginibre(d, d, rng); }

// phi(g) = N_g omega(g) with independent near-identity channels N_g.
inline rblab::ImplementationMap random_implementation(const rblab::GroupBundle& b, double t, std::mt19937_64& rng) {
  const int d = b.group->hilbert_dim();
  std::vector<SuperOp> maps;
  for (int g = 0; g < b.group->order(); ++g)
    maps.push_back(near_identity_channel(d, t, rng) * SuperOp(d, b.omega(g)));
  return rblab::ImplementationMap(b.group, std::move(maps));
}

// Independent random CP maps per element (far from omega).
inline rblab::ImplementationMap random_cp_implementation(const rblab::GroupBundle& b, std::mt19937_64& rng) {
  const int d = b.group->hilbert_dim();
  std::vector<SuperOp> maps;
  for (int g = 0; g < b.group->order(); ++g) maps.push_back(random_cp_map(d, rng));
  return rblab::ImplementationMap(b.group, std::move(maps));
}

inline std::vector<double> random_distribution(int order, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> nu(static_cast<size_t>(order));
  double s = 0.0;
  for (auto& x : nu) s += (x = u(rng));
  for (auto& x : nu) x /= s;
  return nu;
}

// Invertible matrix 1 + eps G.
inline CMat random_gauge(int n, double eps, std::mt19937_64& rng) {
  return CMat::Identity(n, n) + eps * rblab::ginibre(n, n, rng);
}

}  // namespace rbtest
