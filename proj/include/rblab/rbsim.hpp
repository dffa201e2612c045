#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Geometry>

#include "rblab/fourier.hpp"

namespace rblab {

// ---- Sampling distributions -------------------------------------------------

using Distribution = std::vector<double>;

Distribution uniform_distribution(int order);
Distribution peaked(int order, int g);
// (1 - eps) * uniform + eps * base.
Distribution mixture(const Distribution& base, double eps);
// Weights on a subset of elements; weights are normalized.
Distribution generator_supported(int order, const std::vector<int>& subset, const std::vector<double>& weights);
// sum_g |nu(g) - 1/|G||.
double l1_to_uniform(const Distribution& nu);
// Throws DomainError unless nonnegative with unit sum (1e-12).
void validate_distribution(const Distribution& nu, int order);

// Step i (1-based) of a sequence draws from cycle[(i - 1) % cycle.size()].
struct SamplingSchedule {
  std::vector<Distribution> cycle;

  const Distribution& at(int step) const { return cycle[static_cast<size_t>(step - 1) % cycle.size()]; }
  static SamplingSchedule single(Distribution nu) { return {{std::move(nu)}}; }
};

// Odd steps uniform, even steps the interleaving gate c.
SamplingSchedule interleaved_schedule(int order, int c);

// ---- Noise models -----------------------------------------------------------

// phi(g) = lambda omega(g).
ImplementationMap gate_independent(const GroupBundle& bundle, const SuperOp& lambda);
// Single qubit: phi(g) = Ad[exp(-i theta n_g.sigma/2)] omega(g) with n_g the
// rotation axis of U_g (rotation angle taken in [0, pi]; z for the identity).
ImplementationMap overrotation_own_axis(const GroupBundle& bundle, double theta);
// Single qubit: phi(g) = Ad[exp(-i theta_g n.sigma/2)] omega(g).
ImplementationMap overrotation_fixed_axis(const GroupBundle& bundle, const Eigen::Vector3d& axis,
                                          const std::vector<double>& angles);
// Single-qubit transfer matrices of the gauge counterexample.
SuperOp damping_t(double gamma);
SuperOp m1_alpha(double alpha);
SuperOp m2_alpha(double alpha);
// phi(g) = T(gamma) M1(alpha) omega(g) M2(alpha); throws if some phi(g) is not CP.
ImplementationMap counterexample_ix_a(const GroupBundle& bundle, double alpha, double gamma);
// Row-stochastic leak matrix: S(i,i) = mu and S(i,i+1) = 1 - mu for i < L - 1
// (0-based), S(i,i) = 1 otherwise. Mass flows down the ladder 0 -> L-1.
RMat leak_stochastic_matrix(int d, int levels, double mu);
// phi(g)(X) = Lambda(P X P) + U_g (1-P) X (1-P) U_g^dag, P onto the first L levels.
ImplementationMap stochastic_leak(const GroupBundle& bundle, int levels, double mu);
SuperOp leak_channel(int d, int levels, double mu);

// ---- Protocol ---------------------------------------------------------------

struct RBConfig {
  ImplementationMap phi;
  int g_end = 0;
  // Draw g_end uniformly per sequence and skip the inversion (no-inversion RB).
  bool randomize_end = false;
  std::vector<int> lengths;
  CMat rho0;
  std::vector<CMat> povm;
  SamplingSchedule schedule;
  std::optional<SuperOp> spam_prep;
  std::optional<SuperOp> spam_meas;
  int shots = 100;
  int sequences = 10;
  std::uint64_t seed = 1;
};

void validate(const RBConfig& config);

struct RBRow {
  int povm_index = 0;  // povm.size() is the loss outcome
  int m = 0;
  int g_end = 0;
  double p_hat = 0.0;
  long long shots = 0;
  int sequences = 0;
};

struct RBDataset {
  std::vector<RBRow> rows;
  std::uint64_t seed = 0;
  bool has_loss_outcome = false;
};

// Seed of the RNG stream for work item (length index, sequence index).
std::uint64_t stream_seed(std::uint64_t root, std::uint64_t length_index, std::uint64_t sequence_index);
// Worker count from RBLAB_THREADS (default 1).
int thread_count_from_env();

// Monte Carlo data collection. Deterministic for fixed seed at any thread count.
RBDataset run_rb(const RBConfig& config, int threads = 0);

// Outcome probabilities of a single sequence g_1..g_m followed by g_final.
std::vector<double> sequence_probabilities(const RBConfig& config, const std::vector<int>& gates, int g_final);

// Exact expectation through products of Fourier blocks. Requires a catalog
// with irrep matrices for the group of config.phi.
class ExactEngine {
 public:
  ExactEngine(const RBConfig& config, const IrrepCatalog& catalog);

  double probability(int povm_index, int m, int g_end) const;
  double probability(int povm_index, int m) const { return probability(povm_index, m, config_.g_end); }
  // P_m(g_end) = (phi * phi_nu_m * ... * phi_nu_1)(g_end) as a superoperator.
  SuperOp sequence_average(int m, int g_end) const;

  const RBConfig& config() const { return config_; }
  const IrrepCatalog& catalog() const { return catalog_; }
  const std::vector<FourierBlock>& phi_blocks() const { return phi_blocks_; }
  // Blocks of phi_nu for each distribution of the schedule cycle.
  const std::vector<std::vector<FourierBlock>>& step_blocks() const { return step_blocks_; }
  // Effective state E_SP(rho0) and effect E_M^dag(Pi_i) coefficient vectors.
  const CVec& state() const { return state_; }
  const CVec& effect(int i) const { return effects_[static_cast<size_t>(i)]; }

 private:
  RBConfig config_;
  IrrepCatalog catalog_;
  std::vector<FourierBlock> phi_blocks_;
  std::vector<std::vector<FourierBlock>> step_blocks_;
  CVec state_;
  std::vector<CVec> effects_;
};

double exact_probability(const RBConfig& config, const IrrepCatalog& catalog, int povm_index, int m);

// Computational-basis POVM {|x><x|}.
std::vector<CMat> computational_povm(int d);
// {|0><0|, 1 - |0><0|}.
std::vector<CMat> survival_povm(int d);
CMat basis_state(int d, int k);

}  // namespace rblab
