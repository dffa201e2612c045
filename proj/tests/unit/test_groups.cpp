#include <gtest/gtest.h>

#include <random>
#include <set>

#include "rblab/fourier.hpp"
#include "rblab/groups.hpp"
#include "rblab/irreps.hpp"

using namespace rblab;

namespace {

// Closure oracle: every product is found again, independent of the Cayley table.
void expect_group_axioms(const FiniteGroup& g, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, g.order() - 1);
  const CMat id = CMat::Identity(g.hilbert_dim(), g.hilbert_dim());
  EXPECT_LT((canonical_phase(g.unitary(g.identity())) - id).norm(), 1e-12);
  for (int s = 0; s < samples; ++s) {
    const int a = pick(rng), b = pick(rng);
    const auto found = g.find(g.unitary(a) * g.unitary(b));
    ASSERT_TRUE(found.has_value());
    EXPECT_EQ(*found, g.mul(a, b));
    EXPECT_EQ(g.mul(a, g.inv(a)), g.identity());
    EXPECT_EQ(g.mul(g.inv(a), a), g.identity());
  }
}

void expect_homomorphism(const Representation& rep, int samples, std::uint64_t seed) {
  const auto& g = *rep.group();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, g.order() - 1);
  for (int s = 0; s < samples; ++s) {
    const int a = pick(rng), b = pick(rng);
    EXPECT_LT((rep(a) * rep(b) - rep(g.mul(a, b))).cwiseAbs().maxCoeff(), 1e-10);
  }
}

}  // namespace

TEST(Groups, PauliOrdersAndAxioms) {
  for (int q = 1; q <= 3; ++q) {
    const auto b = build_pauli_group(q);
    EXPECT_EQ(b.group->order(), 1 << (2 * q));
    EXPECT_EQ(b.group->hilbert_dim(), 1 << q);
    expect_group_axioms(*b.group, 200, 1 + q);
    expect_homomorphism(b.omega, 50, 10 + q);
    // Pauli-index order: element k is the normalized Pauli string k.
    for (int k = 0; k < b.group->order(); ++k)
      EXPECT_LT((b.group->unitary(k) - canonical_phase(pauli_string(k, q))).norm(), 1e-12);
  }
  EXPECT_THROW(build_pauli_group(0), DomainError);
  EXPECT_THROW(build_pauli_group(4), DomainError);
}

TEST(Groups, SingleQubitClifford) {
  const auto b = build_clifford_1q();
  EXPECT_EQ(b.group->order(), 24);
  EXPECT_TRUE(b.group->has_cayley());
  expect_group_axioms(*b.group, 500, 3);
  expect_homomorphism(b.omega, 200, 4);
  // Every omega(g) is a signed permutation of the Pauli axes.
  for (int g = 0; g < 24; ++g) {
    const RMat r = b.omega(g).real();
    EXPECT_LT(b.omega(g).imag().norm(), 1e-12);
    EXPECT_NEAR(r(0, 0), 1.0, 1e-12);
    for (int i = 1; i < 4; ++i) EXPECT_NEAR(r.row(i).cwiseAbs().sum(), 1.0, 1e-12);
  }
}

TEST(Groups, GenerateGroupFromHadamardAndPhase) {
  const double r = 1.0 / std::sqrt(2.0);
  CMat h(2, 2);
  h << r, r, r, -r;
  CMat s = CMat::Identity(2, 2);
  s(1, 1) = cplx(0.0, 1.0);
  const auto g = generate_group("c1", {h, s}, {"H", "S"}, true);
  EXPECT_EQ(g->order(), 24);
  const auto t = generate_group("z8", {[] {
                                  CMat t = CMat::Identity(2, 2);
                                  t(1, 1) = std::polar(1.0, M_PI / 4);
                                  return t;
                                }()},
                                {"T"}, true);
  EXPECT_EQ(t->order(), 8);
}

TEST(Groups, TwoQubitClifford) {
  const auto b = build_clifford_2q();
  EXPECT_EQ(b.group->order(), 11520);
  EXPECT_FALSE(b.group->has_cayley());
  expect_group_axioms(*b.group, 100, 5);
  expect_homomorphism(b.omega, 50, 6);
}

TEST(Groups, PauliLabels) {
  EXPECT_EQ(pauli_label(0, 1), "I");
  EXPECT_EQ(pauli_label(6, 2), "XY");
  EXPECT_EQ(pauli_label(63, 3), "ZZZ");
}

TEST(Irreps, PauliCatalogIsCompleteAndOrthonormal) {
  for (int q = 1; q <= 2; ++q) {
    const auto b = build_pauli_group(q);
    const auto cat = pauli_catalog(b);
    EXPECT_TRUE(cat.complete());
    EXPECT_EQ(cat.size(), static_cast<size_t>(b.group->order()));
    for (size_t a = 0; a < cat.size(); ++a)
      for (size_t c = 0; c < cat.size(); ++c)
        EXPECT_LT(std::abs(character_inner(cat[a].character, cat[c].character) - cplx(a == c ? 1.0 : 0.0)), 1e-12);
    EXPECT_EQ(cat[cat.index_of("trivial")].dim, 1);
  }
}

TEST(Irreps, CliffordCatalogDimensions) {
  const auto b = build_clifford_1q();
  const auto cat = clifford_1q_catalog(b);
  EXPECT_TRUE(cat.complete());
  EXPECT_TRUE(cat.has_matrices());
  std::multiset<int> dims;
  int sum_sq = 0;
  for (const auto& irrep : cat.irreps()) {
    dims.insert(irrep.dim);
    sum_sq += irrep.dim * irrep.dim;
  }
  EXPECT_EQ(sum_sq, 24);
  EXPECT_EQ(dims, (std::multiset<int>{1, 1, 2, 3, 3}));
  EXPECT_EQ(cat[cat.index_of("adjoint")].dim, 3);
  EXPECT_THROW(cat.index_of("nonexistent"), DomainError);
}

// Property: every catalog irrep is a unitary homomorphism whose trace is its character.
TEST(IrrepsProperty, MatricesAreUnitaryHomomorphisms) {
  const auto b = build_clifford_1q();
  const auto cat = clifford_1q_catalog(b);
  const auto& g = *b.group;
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> pick(0, g.order() - 1);
  for (const auto& irrep : cat.irreps()) {
    for (int s = 0; s < 100; ++s) {
      const int a = pick(rng), c = pick(rng);
      const auto& ma = irrep.matrices[static_cast<size_t>(a)];
      EXPECT_LT((ma * irrep.matrices[static_cast<size_t>(c)] - irrep.matrices[static_cast<size_t>(g.mul(a, c))])
                    .cwiseAbs()
                    .maxCoeff(),
                1e-10)
          << irrep.label;
      EXPECT_LT((ma * ma.adjoint() - CMat::Identity(irrep.dim, irrep.dim)).norm(), 1e-10);
      EXPECT_LT(std::abs(ma.trace() - irrep.character[static_cast<size_t>(a)]), 1e-10);
    }
  }
}

TEST(Irreps, RegularDecompositionMatchesCliffordCatalog) {
  const auto b = build_clifford_1q();
  const auto reg = decompose_regular(b.group, 13);
  const auto cat = clifford_1q_catalog(b);
  EXPECT_TRUE(reg.complete());
  ASSERT_EQ(reg.size(), cat.size());
  // Each regular-decomposition irrep has a character equal to exactly one catalog irrep.
  for (const auto& irrep : reg.irreps()) {
    int matches = 0;
    for (const auto& ref : cat.irreps())
      if (std::abs(character_inner(irrep.character, ref.character) - 1.0) < 1e-8) ++matches;
    EXPECT_EQ(matches, 1);
  }
}

TEST(Irreps, CliffordOmegaSplitsIntoTrivialAndAdjoint) {
  const auto b = build_clifford_1q();
  const auto cat = clifford_1q_catalog(b);
  const auto sectors = irrep_projectors(b.omega, cat);
  CMat sum = CMat::Zero(4, 4);
  int total = 0;
  for (const auto& s : sectors) {
    EXPECT_LT((s.projector * s.projector - s.projector).norm(), 1e-12);
    sum += s.projector;
    total += s.multiplicity * cat[s.irrep].dim;
    const auto& label = cat[s.irrep].label;
    if (label == "trivial" || label == "adjoint")
      EXPECT_EQ(s.multiplicity, 1) << label;
    else
      EXPECT_EQ(s.multiplicity, 0) << label;
  }
  EXPECT_EQ(total, 4);
  EXPECT_LT((sum - CMat::Identity(4, 4)).norm(), 1e-12);
}

TEST(Irreps, PauliOmegaIsMultiplicityFree) {
  const auto b = build_pauli_group(2);
  const auto sectors = irrep_projectors(b.omega, pauli_catalog(b));
  for (const auto& s : sectors) EXPECT_EQ(s.multiplicity, 1);
}

TEST(Irreps, TwoQubitCliffordMultiplicityFreeCatalog) {
  const auto b = build_clifford_2q();
  const auto cat = multiplicity_free_catalog(b.omega);
  ASSERT_EQ(cat.size(), 2u);
  EXPECT_EQ(cat[0].label, "trivial");
  EXPECT_EQ(cat[0].dim, 1);
  EXPECT_EQ(cat[1].dim, 15);
  EXPECT_FALSE(cat.complete());
}

TEST(Fourier, IdealBlocksAreProjectorsWithMultiplicityTrace) {
  const auto b = build_clifford_1q();
  const auto cat = clifford_1q_catalog(b);
  const auto omega = ImplementationMap::from_representation(b.omega);
  const auto sectors = irrep_projectors(b.omega, cat);
  for (const auto& blk : fourier_transform(omega, cat)) {
    EXPECT_LT((blk.mat * blk.mat - blk.mat).norm(), 1e-12);
    EXPECT_NEAR(blk.mat.trace().real(), sectors[blk.irrep].multiplicity, 1e-12);
  }
}

// Property: the inverse transform recovers phi for random implementations.
TEST(FourierProperty, InverseTransformRoundTrip) {
  std::mt19937_64 rng(21);
  for (const auto& b : {build_pauli_group(1), build_clifford_1q()}) {
    const auto cat = b.group->order() == 4 ? pauli_catalog(b) : clifford_1q_catalog(b);
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<SuperOp> maps;
      for (int g = 0; g < b.group->order(); ++g) maps.push_back(SuperOp(2, ginibre(4, 4, rng)));
      const ImplementationMap phi(b.group, maps);
      const auto blocks = fourier_transform(phi, cat);
      for (int g = 0; g < b.group->order(); ++g)
        EXPECT_LT((inverse_fourier(blocks, cat, g).mat() - phi(g).mat()).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

// Property: F(phi * psi) = F(phi) F(psi) and Parseval holds.
TEST(FourierProperty, ConvolutionTheoremAndParseval) {
  std::mt19937_64 rng(22);
  const auto b = build_clifford_1q();
  const auto cat = clifford_1q_catalog(b);
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<SuperOp> ma, mb;
    for (int g = 0; g < 24; ++g) {
      ma.push_back(SuperOp(2, ginibre(4, 4, rng)));
      mb.push_back(SuperOp(2, ginibre(4, 4, rng)));
    }
    const ImplementationMap phi(b.group, ma), psi(b.group, mb);
    const auto conv = fourier_transform(convolve(phi, psi), cat);
    const auto fa = fourier_transform(phi, cat);
    const auto fb = fourier_transform(psi, cat);
    for (size_t k = 0; k < cat.size(); ++k)
      EXPECT_LT((conv[k].mat - fa[k].mat * fb[k].mat).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(parseval_check(phi, psi, cat), 1e-11);
  }
}

// Oracle: literal convolution sum at one element.
TEST(Fourier, ConvolutionMatchesLiteralSum) {
  std::mt19937_64 rng(23);
  const auto b = build_pauli_group(1);
  std::vector<SuperOp> ma, mb;
  for (int g = 0; g < 4; ++g) {
    ma.push_back(SuperOp(2, ginibre(4, 4, rng)));
    mb.push_back(SuperOp(2, ginibre(4, 4, rng)));
  }
  const ImplementationMap phi(b.group, ma), psi(b.group, mb);
  const auto conv = convolve(phi, psi);
  const auto& g = *b.group;
  for (int x = 0; x < 4; ++x) {
    CMat ref = CMat::Zero(4, 4);
    for (int h = 0; h < 4; ++h) ref += ma[g.mul(x, g.inv(h))].mat() * mb[h].mat();
    EXPECT_LT((conv(x).mat() - ref / 4.0).norm(), 1e-12);
  }
}

TEST(Fourier, WeightedUniformIsIdentityOperation) {
  std::mt19937_64 rng(24);
  const auto b = build_clifford_1q();
  std::vector<SuperOp> maps;
  for (int g = 0; g < 24; ++g) maps.push_back(SuperOp(2, ginibre(4, 4, rng)));
  const ImplementationMap phi(b.group, maps);
  const auto w = weighted(phi, std::vector<double>(24, 1.0 / 24));
  for (int g = 0; g < 24; ++g) EXPECT_LT((w(g).mat() - phi(g).mat()).norm(), 1e-12);
}

TEST(Fourier, IdealNormsAreOne) {
  const auto b = build_pauli_group(1);
  const auto n = fourier_norms(ImplementationMap::from_representation(b.omega));
  EXPECT_NEAR(n.max_norm, 1.0, 1e-6);
  EXPECT_NEAR(n.m_norm, 1.0, 1e-6);
}
