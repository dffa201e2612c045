#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support/generators.hpp"
#include "rblab/decay.hpp"
#include "rblab/diamond.hpp"

using namespace rblab;

namespace {

RBConfig survival_config(const GroupBundle& b, ImplementationMap phi, std::vector<int> lengths) {
  const int d = b.group->hilbert_dim();
  RBConfig c{.phi = std::move(phi)};
  c.rho0 = basis_state(d, 0);
  c.povm = survival_povm(d);
  c.schedule = SamplingSchedule::single(uniform_distribution(b.group->order()));
  c.lengths = std::move(lengths);
  return c;
}

std::vector<int> range(int lo, int hi) {
  std::vector<int> out;
  for (int m = lo; m <= hi; ++m) out.push_back(m);
  return out;
}

// Right eigenvector of a for the eigenvalue closest to target, scaled so <x|r> = 1.
CVec eigenvector_near(const CMat& a, cplx target, const CVec& x) {
  Eigen::ComplexEigenSolver<CMat> es(a);
  Eigen::Index best = 0;
  (es.eigenvalues().array() - target).abs().minCoeff(&best);
  const CVec r = es.eigenvectors().col(best);
  return r / x.dot(r);
}

}  // namespace

TEST(UniformBound, ClosedForm) {
  const double d = 0.05;
  EXPECT_NEAR(uniform_bound(d, 3), 8.0 * std::pow(d * (1 + 2 * d / (1 - 5 * d)), 3), 1e-15);
  EXPECT_DOUBLE_EQ(uniform_bound(d, 0), 8.0);
  EXPECT_TRUE(std::isinf(uniform_bound(0.2, 1)));
  EXPECT_TRUE(std::isinf(uniform_bound(0.3, 4)));
}

TEST(DiamondDistance, IdealIsZeroAndDepolarizingIsAnalytic) {
  const auto b = build_clifford_1q();
  const auto omega = ImplementationMap::from_representation(b.omega);
  const auto zero = mean_diamond_distance(omega, omega);
  EXPECT_NEAR(zero.delta, 0.0, 1e-8);
  EXPECT_TRUE(zero.within_hypothesis);
  const double p = 0.04;
  // ||omega(g) - Lambda omega(g)|| = ||id - Lambda|| = 2 p (1 - 1/d^2) for every g.
  const auto dist = mean_diamond_distance(gate_independent(b, depolarizing(2, p)), omega);
  EXPECT_NEAR(dist.delta, 1.5 * p, 1e-6);
  for (double v : dist.per_element) EXPECT_NEAR(v, 1.5 * p, 1e-6);
  EXPECT_NEAR(weighted_distance(dist, peaked(24, 3)), 1.5 * p, 1e-6);
}

TEST(DominantSubspace, DiagonalExample) {
  CMat a = CMat::Zero(4, 4);
  a.diagonal() << 0.3, 0.99, -0.5, 0.97;
  const auto blk = dominant_subspace(a, 2);
  EXPECT_NEAR(std::abs(blk.eigenvalues(0) - 0.99), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(blk.eigenvalues(1) - 0.97), 0.0, 1e-14);
  EXPECT_EQ(blk.subdominant.size(), 2);
  EXPECT_LT((blk.l1.adjoint() * blk.r1 - CMat::Identity(2, 2)).norm(), 1e-12);
  EXPECT_LT((blk.l1.adjoint() * a * blk.r1 - blk.m).norm(), 1e-12);
  CMat tie = CMat::Zero(3, 3);
  tie.diagonal() << 0.9, 0.9, 0.1;
  EXPECT_THROW(dominant_subspace(tie, 1), DomainError);
}

// Property: the dominant basis spans an invariant subspace for random matrices.
TEST(DominantSubspaceProperty, InvariantSubspace) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const CMat a = ginibre(6, 6, rng);
    const int n = 1 + trial % 3;
    const auto blk = dominant_subspace(a, n);
    EXPECT_LT((a * blk.r1 - blk.r1 * blk.m).norm(), 1e-10);
    EXPECT_LT((blk.l1.adjoint() * a - blk.m * blk.l1.adjoint()).norm(), 1e-10);
    double min_dom = 1e300, max_sub = 0.0;
    for (Eigen::Index i = 0; i < blk.eigenvalues.size(); ++i) min_dom = std::min(min_dom, std::abs(blk.eigenvalues(i)));
    for (Eigen::Index i = 0; i < blk.subdominant.size(); ++i) max_sub = std::max(max_sub, std::abs(blk.subdominant(i)));
    EXPECT_GE(min_dom, max_sub);
  }
}

TEST(DecayAnalysis, DepolarizingIsExactlySingleExponential) {
  const auto b = build_clifford_1q();
  const double p = 0.03;
  const auto c = survival_config(b, gate_independent(b, depolarizing(2, p)), range(0, 40));
  const ExactEngine eng(c, clifford_1q_catalog(b));
  const DecayAnalysis an(eng, b.omega);
  for (int m : c.lengths) {
    EXPECT_NEAR(an.residual(0, m), 0.0, 1e-14);
    EXPECT_NEAR(an.model(0, m), 0.5 + 0.5 * std::pow(1 - p, m + 1), 1e-13);
  }
}

// Property: model + residual reproduces the exact data for any offset.
TEST(DecayAnalysisProperty, ModelPlusResidualIsExact) {
  std::mt19937_64 rng(42);
  const auto b = build_clifford_1q();
  for (int trial = 0; trial < 6; ++trial) {
    auto c = survival_config(b, rbtest::random_implementation(b, 0.05, rng), range(0, 25));
    c.rho0 = rbtest::random_state(2, rng);
    const ExactEngine eng(c, clifford_1q_catalog(b));
    for (int offset : {0, 3}) {
      const DecayAnalysis an(eng, b.omega, offset);
      for (int m = offset; m <= 25; ++m)
        EXPECT_NEAR(an.model(0, m) + an.residual(0, m), an.exact(0, m), 1e-12) << trial << " " << offset << " " << m;
    }
  }
}

// Property: for random gate-dependent noise with delta <= 1/9 the residual obeys
// 8 (delta [1 + 2 delta / (1 - 5 delta)])^m at every length.
TEST(DecayBoundProperty, UniformBoundHoldsForRandomNoise) {
  std::mt19937_64 rng(43);
  for (const auto& b : {build_clifford_1q(), build_pauli_group(1)}) {
    const auto cat = b.group->order() == 24 ? clifford_1q_catalog(b) : pauli_catalog(b);
    const auto omega = ImplementationMap::from_representation(b.omega);
    for (int trial = 0; trial < 4; ++trial) {
      const double t = 0.005 + 0.01 * trial;
      auto c = survival_config(b, rbtest::random_implementation(b, t, rng), range(1, 30));
      c.rho0 = rbtest::random_state(2, rng);
      const ExactEngine eng(c, cat);
      const auto dist = mean_diamond_distance(c.phi, omega);
      ASSERT_LE(dist.delta, 1.0 / 9.0);
      const auto rep = verify_uniform_bound(eng, b.omega, dist);
      EXPECT_TRUE(rep.hypothesis_ok);
      EXPECT_TRUE(rep.pass) << "t=" << t << " delta=" << dist.delta;
      EXPECT_LT(rep.consistency, 1e-12);
      for (const auto& row : rep.rows) EXPECT_LE(row.residual, row.bound);
    }
  }
}

TEST(DecayBound, NonuniformRequiresSingleDistribution) {
  const auto b = build_clifford_1q();
  auto c = survival_config(b, overrotation_own_axis(b, 0.01), range(1, 20));
  c.schedule = SamplingSchedule::single(mixture(peaked(24, 0), 0.02));
  const ExactEngine eng(c, clifford_1q_catalog(b));
  const auto dist = mean_diamond_distance(c.phi, ImplementationMap::from_representation(b.omega));
  const auto rep = verify_nonuniform_bound(eng, b.omega, dist);
  EXPECT_NEAR(rep.delta_prime, 0.02 * (2.0 - 2.0 / 24), 1e-12);
  EXPECT_TRUE(rep.hypothesis_ok);
  EXPECT_TRUE(rep.pass);
  EXPECT_THROW(verify_uniform_bound(eng, b.omega, dist), DomainError);
  c.schedule = interleaved_schedule(24, 1);
  const ExactEngine eng2(c, clifford_1q_catalog(b));
  EXPECT_THROW(verify_nonuniform_bound(eng2, b.omega, dist), DomainError);
}

TEST(Mixing, ConvolutionPowers) {
  const auto b = build_clifford_1q();
  const auto& g = *b.group;
  EXPECT_EQ(convolve_power(uniform_distribution(24), 0, g), peaked(24, g.identity()));
  const auto u = uniform_distribution(24);
  const auto cu = convolve_dist(u, peaked(24, 5), g);
  for (double v : cu) EXPECT_NEAR(v, 1.0 / 24, 1e-15);
  // Point masses convolve to the point mass at the product.
  EXPECT_EQ(convolve_dist(peaked(24, 3), peaked(24, 7), g), peaked(24, g.mul(3, 7)));
}

TEST(Mixing, MixingTimes) {
  const auto b = build_clifford_1q();
  const auto& g = *b.group;
  EXPECT_EQ(m_mix(uniform_distribution(24), 0.01, g), 0);
  int h = -1, hs = -1, s = -1;
  for (int k = 0; k < 24; ++k) {
    if (g.element_name(k) == "H") h = k;
    if (g.element_name(k) == "H.S") hs = k;
    if (g.element_name(k) == "S") s = k;
  }
  ASSERT_GE(h, 0);
  ASSERT_GE(hs, 0);
  ASSERT_GE(s, 0);
  const auto nu = generator_supported(24, {h, hs}, {1.0, 1.0});
  const int k = m_mix(nu, 0.05, g);
  EXPECT_GT(k, 1);
  EXPECT_LE(l1_to_uniform(convolve_power(nu, k, g)), 0.05);
  EXPECT_GT(l1_to_uniform(convolve_power(nu, k - 1, g)), 0.05);
  // S alone generates Z4: a proper subgroup.
  EXPECT_THROW(m_mix(peaked(24, s), 0.05, g), DomainError);
}

TEST(Mixing, PeriodicWalkIsRejected) {
  // On the Pauli group, X and Y generate everything but products of odd length stay off {I, Z}.
  const auto b = build_pauli_group(1);
  const auto nu = generator_supported(4, {1, 2}, {1.0, 1.0});
  EXPECT_THROW(m_mix(nu, 0.1, *b.group), DomainError);
}

TEST(SubsetBound, GeneratorSubsetPasses) {
  const auto b = build_clifford_1q();
  const auto& g = *b.group;
  int h = -1, hs = -1;
  for (int k = 0; k < 24; ++k) {
    if (g.element_name(k) == "H") h = k;
    if (g.element_name(k) == "H.S") hs = k;
  }
  auto c = survival_config(b, overrotation_own_axis(b, 0.003), range(25, 45));
  c.schedule = SamplingSchedule::single(generator_supported(24, {h, hs}, {1.0, 1.0}));
  const ExactEngine eng(c, clifford_1q_catalog(b));
  const auto dist = mean_diamond_distance(c.phi, ImplementationMap::from_representation(b.omega));
  const double dp = 0.01;
  const int mix = m_mix(c.schedule.cycle.front(), dp, g);
  const auto rep = verify_subset_bound(eng, b.omega, dist, mix);
  EXPECT_EQ(rep.m_mix, mix);
  EXPECT_NEAR(rep.delta, mix * weighted_distance(dist, c.schedule.cycle.front()), 1e-15);
  EXPECT_LE(rep.delta_prime, dp);
  EXPECT_TRUE(rep.hypothesis_ok);
  EXPECT_TRUE(rep.pass);
  for (const auto& row : rep.rows) EXPECT_DOUBLE_EQ(row.bound, 4.0 * (rep.delta + rep.delta_prime));
  EXPECT_THROW(verify_subset_bound(eng, b.omega, dist, 0), DomainError);
}

TEST(Perturbation, SepOfDiagonalMatrices) {
  CMat a1 = CMat::Zero(2, 2), a2 = CMat::Zero(3, 3);
  a1.diagonal() << 1.0, 0.5;
  a2.diagonal() << 0.1, 0.45, -0.3;
  EXPECT_NEAR(sep(a1, a2), 0.05, 1e-12);
}

TEST(Perturbation, BauerFikeForNormalMatrix) {
  std::mt19937_64 rng(44);
  const CMat u = haar_unitary(4, rng);
  CMat d = CMat::Zero(4, 4);
  d.diagonal() << 1.0, 0.5, 0.2, -0.1;
  const CMat e = 1e-3 * ginibre(4, 4, rng);
  EXPECT_NEAR(bauer_fike_radius(u * d * u.adjoint(), e), spectral_norm(e), 1e-9);
  CMat jordan = CMat::Zero(2, 2);
  jordan(0, 1) = 1.0;
  EXPECT_THROW(bauer_fike_radius(jordan, e.topLeftCorner(2, 2)), DomainError);
}

// Oracle: exact eigenvectors of A + E; the first-order estimate errs by O(||E||^2).
TEST(Perturbation, FirstOrderEigenvectorsAreSecondOrderAccurate) {
  std::mt19937_64 rng(45);
  const CMat u = haar_unitary(4, rng);
  CMat d = CMat::Zero(4, 4);
  d.diagonal() << 1.0, 0.6, 0.3, -0.2;
  const CMat a = u * d * u.adjoint();
  const CVec x = u.col(0);
  const CMat e0 = ginibre(4, 4, rng);
  double prev = 0.0;
  for (double s : {1e-2, 5e-3, 2.5e-3}) {
    const CMat e = s * e0;
    const auto est = eigvec_perturb_estimate(a, e, x);
    const CVec r = eigenvector_near(a + e, 1.0, x);
    const CVec l = eigenvector_near((a + e).adjoint(), 1.0, x);
    const double err = std::max((est.r1 - r).norm(), (est.l1 - l).norm());
    EXPECT_LT(err, 50 * s * s);
    if (prev > 0.0) EXPECT_NEAR(prev / err, 4.0, 0.6);
    prev = err;
  }
}
