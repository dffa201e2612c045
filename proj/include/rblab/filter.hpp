#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <string>
#include <vector>

#include "rblab/rbsim.hpp"

namespace rblab {

// Filter for one irrep lambda of the reference representation omega with the
// ideal SPAM pair (rho0, {Pi_i}). Invariant: |normalization| >= 1e-12.
class FilterSpec {
 public:
  FilterSpec(const Representation& omega, const IrrepCatalog& catalog, const std::string& label, const CMat& rho0,
             const std::vector<CMat>& povm);

  const std::string& label() const { return label_; }
  size_t irrep() const { return irrep_; }
  const CMat& projector() const { return projector_; }
  int outcomes() const { return static_cast<int>(effects_.size()); }
  // alpha(g, i) = <<Pi_i| P conj(omega)(g) |rho0>>.
  cplx value(int g, int i) const;
  // N = |G|^-1 sum_{g,i} alpha(g, i) <<Pi_i| omega(g) |rho0>>.
  cplx normalization() const { return normalization_; }

 private:
  Representation omega_;
  std::string label_;
  size_t irrep_ = 0;
  CMat projector_;
  CVec rho0_;
  std::vector<CVec> effects_;
  cplx normalization_;
};

// Literal double sum over group and POVM (reference for normalization()).
cplx normalization_double_sum(const FilterSpec& spec, const Representation& omega, const CMat& rho0,
                              const std::vector<CMat>& povm);

// For a POVM Pi_i = (d/|I|) |chi_i><chi_i| whose states form a 2-design:
// N = d / (|I| (d+1)) [Tr P(rho0) + Tr(rho0 P(rho0))].
double threedesign_normalization(const CMat& projector, const CMat& rho0, int povm_size);
// The form (1/|I|) [d^2/(d^2-1) Tr(rho0 P(rho0)) + Tr P(rho0)], kept to document
// that it disagrees with the direct sum.
double threedesign_normalization_printed(const CMat& projector, const CMat& rho0, int povm_size);

// k(m) = |G|^-1 sum_{g_end} sum_i N^-1 alpha(g_end, i) p(i, m, g_end) from the exact engine.
cplx filtered_data(const ExactEngine& engine, const FilterSpec& spec, int m);
// Same filter applied to data whose visibility is restricted to the sector of
// other_projector: p'(i, m, g) = <<E_M^dag(Pi_i)| P' S_m(g) |E_SP(rho0)>>.
cplx filtered_cross_data(const ExactEngine& engine, const FilterSpec& spec, const CMat& other_projector, int m);

struct FilterEstimate {
  double k_hat = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(samples)
  double sample_variance = 0.0;
  long long samples = 0;
};

struct FilterSampling {
  long long samples = 1000;
  std::uint64_t seed = 1;
  // false: draw m + 1 uniform gates and take g_end as their product.
  // true: draw g_end, m uniform gates and an explicit inversion gate.
  bool explicit_inversion = false;
  int threads = 0;  // 0 reads RBLAB_THREADS
};

// Monte Carlo estimator: per sample one ending gate, one sequence and one
// POVM outcome; the sample value is Re[N^-1 alpha(g_end, i)] (0 on loss).
// Requires uniform sampling in config.schedule.
FilterEstimate estimate_filtered(const RBConfig& config, const FilterSpec& spec, int m, const FilterSampling& opts);
// Per-sample values (in sample order) for covariance studies.
std::vector<double> filtered_samples(const RBConfig& config, const FilterSpec& spec, int m,
                                     const FilterSampling& opts);

// POVM {C|x><x|C^dag / |Cl_q|} over the q-qubit Clifford group (q <= 2);
// effect index i = C * 2^q + x.
struct ThreeDesignPovm {
  GroupBundle clifford;
  std::vector<CMat> effects;
  int qubits = 0;

  int size() const { return static_cast<int>(effects.size()); }
  // |chi_i> = C|x>.
  CVec state(int i) const;
};
ThreeDesignPovm threedesign_povm(int qubits);

struct MomentCheck {
  double second = 0.0;       // mean over psi of |I|^-1 sum_i |<chi_i|psi>|^4
  double second_haar = 0.0;  // 2 / (d (d+1))
  double third = 0.0;        // mean over psi of |I|^-1 sum_i |<chi_i|psi>|^6
  double third_haar = 0.0;   // 6 / (d (d+1) (d+2))
  double max_dev_second = 0.0;  // worst single-psi deviation from the Haar value
  double max_dev_third = 0.0;
  long long draws = 0;
};
// Draws Haar-random |psi>; each is averaged exactly over the POVM states.
MomentCheck povm_moments(const ThreeDesignPovm& povm, long long draws, std::uint64_t seed);

// ---- Linear cross-entropy benchmarking ---------------------------------------

struct XebNoise {
  SuperOp gate;                  // Lambda applied after every gate
  std::optional<SuperOp> spam_prep;
  std::optional<SuperOp> spam_meas;
};

// F_XEB,m = d int dU_1..dU_m sum_x |<x|U|0>|^2 <x| E_M(noisy circuit)(E_SP(rho0)) |x>
// evaluated in closed form from the Haar second moment and the twirl of Lambda.
double xeb_exact(int qubits, const XebNoise& noise, int m);
// Trivial and adjoint Fourier eigenvalues of the Haar twirl of Lambda.
std::pair<double, double> xeb_twirl_eigenvalues(const SuperOp& lambda);

struct XebEstimate {
  double f_hat = 0.0;
  double std_error = 0.0;
  long long samples = 0;
};
// Monte Carlo over Haar circuits with exact per-circuit output distributions.
XebEstimate xeb_monte_carlo(int qubits, const XebNoise& noise, int m, long long samples, std::uint64_t seed);

struct XebNormalization {
  double value = 0.0;      // d * mean of sum_x |<x|U|j>|^4 over samples and columns j
  double expected = 0.0;   // 2d / (d+1)
  double std_error = 0.0;
  double raw_integral = 0.0;  // value / d, the Haar integral of sum_x |<x|U|0>|^4
  long long samples = 0;
};
XebNormalization xeb_normalization(int qubits, long long samples, std::uint64_t seed);

struct DecayFit {
  double rate = 0.0;        // pole other than the constant
  double constant = 0.0;    // coefficient of the constant pole
  double amplitude = 0.0;   // coefficient of rate^m
  double residual = 0.0;    // max |data - model|
};
// Fits y(m) = A + B z^m on consecutive lengths m0, m0+1, ... via two-pole ESPRIT.
DecayFit fit_constant_plus_exponential(const std::vector<double>& y, int m0);
// Fits y(m) = B z^m by least squares on log|y| (consecutive lengths).
DecayFit fit_single_exponential(const std::vector<double>& y, int m0);
// Least-squares fit of y(m) = A + B z^m on arbitrary distinct lengths with
// z in [0, 1]: A, B are linear for fixed z and z is found by Brent's method.
DecayFit fit_rb_decay(const std::vector<int>& lengths, const std::vector<double>& y);

}  // namespace rblab
