#pragma once

#include <string>
#include <vector>

#include "rblab/rbsim.hpp"

namespace rblab {

// ---- Diamond distances ------------------------------------------------------

struct DiamondDistance {
  double delta = 0.0;                // |G|^-1 sum_g ||omega(g) - phi(g)||_diamond
  std::vector<double> per_element;   // ||omega(g) - phi(g)||_diamond
  bool within_hypothesis = false;    // delta <= 1/9
};

DiamondDistance mean_diamond_distance(const ImplementationMap& phi, const ImplementationMap& omega);
// sum_g nu(g) d_g for per-element distances d_g.
double weighted_distance(const DiamondDistance& dist, const Distribution& nu);

// 8 (delta [1 + 2 delta / (1 - 5 delta)])^m; +inf when delta >= 1/5.
double uniform_bound(double delta, int m);

// ---- Dominant subspaces -----------------------------------------------------

struct DominantBlock {
  size_t irrep = 0;
  int multiplicity = 0;   // n_lambda
  CVec eigenvalues;       // the n_lambda dominant eigenvalues
  CVec subdominant;       // all remaining eigenvalues
  CMat m;                 // L1^dag F R1, n_lambda x n_lambda
  CMat r1;                // right basis of the dominant invariant subspace
  CMat l1;                // left basis, L1^dag R1 = 1
};

// Dominant n eigenvalues by modulus with ties ordered by (-|z|, -Re z, -Im z).
// Throws DomainError if the n-th and (n+1)-th moduli differ by at most 1e-10.
DominantBlock dominant_subspace(const CMat& block, int count);

// Per-irrep dominant restrictions of a set of Fourier blocks; n_lambda comes
// from the multiplicities of omega.
std::vector<DominantBlock> dominant_decays(const std::vector<FourierBlock>& blocks,
                                           const std::vector<IrrepSector>& sectors);

// ---- Decay model of exact RB data --------------------------------------------

// For an engine with a single sampling distribution nu, splits
//   p(i, m) = sum_lambda Tr(A_lambda M_lambda^(m - offset)) + residual(i, m)
// with M_lambda the dominant restriction of F(phi_nu)[sigma_lambda]. The
// residual is evaluated through the subdominant part of each block, so it
// keeps full relative precision far below the scale of p.
class DecayAnalysis {
 public:
  DecayAnalysis(const ExactEngine& engine, const Representation& omega, int offset = 0);

  const std::vector<DominantBlock>& blocks() const { return blocks_; }
  // A_lambda for POVM outcome i, one matrix per irrep (empty when n_lambda = 0).
  const std::vector<CMat>& spam(int povm_index) const { return spam_[static_cast<size_t>(povm_index)]; }
  int offset() const { return offset_; }

  double exact(int povm_index, int m) const { return engine_.probability(povm_index, m); }
  double model(int povm_index, int m) const;
  double residual(int povm_index, int m) const;

 private:
  ExactEngine engine_;
  int offset_;
  std::vector<DominantBlock> blocks_;
  std::vector<CMat> deflated_;                 // F - R1 M L1^dag per irrep
  std::vector<CMat> prefix_;                   // F(phi) per irrep
  std::vector<CMat> seeds_;                    // F(phi_nu)^offset (e_c (x) rho) per irrep
  std::vector<std::vector<CMat>> spam_;        // [povm][irrep]
};

struct BoundRow {
  int m = 0;
  double p_exact = 0.0;
  double p_model = 0.0;
  double residual = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct BoundReport {
  std::string kind;            // "uniform", "nonuniform" or "subset"
  double delta = 0.0;
  double delta_prime = 0.0;
  int m_mix = 0;
  bool hypothesis_ok = false;  // theorem hypotheses hold
  bool pass = false;           // residual <= bound for every reported m
  // max_m |p_exact - p_model - residual|: agreement of the two evaluation routes.
  double consistency = 0.0;
  std::vector<BoundRow> rows;
};

// Uniform sampling; bound 8(delta[1 + 2 delta/(1 - 5 delta)])^m.
BoundReport verify_uniform_bound(const ExactEngine& engine, const Representation& omega, const DiamondDistance& dist,
                                 int povm_index = 0);
// Single non-uniform nu; delta' = l1_to_uniform(nu); bound as above with delta + delta'.
BoundReport verify_nonuniform_bound(const ExactEngine& engine, const Representation& omega,
                                    const DiamondDistance& dist, int povm_index = 0);
// Subset RB: delta = m_mix sum_g nu(g) ||omega(g) - phi(g)||, delta' = l1(nu^{*m_mix}),
// model M^(m - m_mix), bound 4(delta + delta').
BoundReport verify_subset_bound(const ExactEngine& engine, const Representation& omega, const DiamondDistance& dist,
                                int m_mix, int povm_index = 0);

// ---- Mixing ----------------------------------------------------------------

Distribution convolve_dist(const Distribution& nu, const Distribution& mu, const FiniteGroup& group);
// nu^{*k}; nu^{*0} is the point mass at the identity.
Distribution convolve_power(const Distribution& nu, int k, const FiniteGroup& group);
// 0 when nu itself is within delta' of uniform, otherwise the smallest k >= 1
// with l1(nu^{*k}) <= delta'. Throws DomainError when the support generates a
// proper subgroup or when the walk has not mixed after 10^4 steps (periodic walk).
int m_mix(const Distribution& nu, double delta_prime, const FiniteGroup& group);

// ---- Perturbation utilities -------------------------------------------------

// Smallest singular value of Z -> A1 Z - Z A2 (Frobenius norm).
double sep(const CMat& a1, const CMat& a2);
// kappa(S) ||E||_2 for A = S diag S^-1; throws DomainError if A is not diagonalizable.
double bauer_fike_radius(const CMat& a, const CMat& e);

struct EigvecPerturbation {
  CVec r1;
  CVec l1;
};
// First-order perturbed right/left eigenvectors of A + E from the unit
// eigenvector x1 of A: r1 = x1 + X2 (a1 - A2)^-1 X2^dag E x1 and
// l1^dag = x1^dag + x1^dag E X2 (a1 - A2)^-1 X2^dag, X2 spanning x1's complement.
EigvecPerturbation eigvec_perturb_estimate(const CMat& a, const CMat& e, const CVec& x1);

}  // namespace rblab
