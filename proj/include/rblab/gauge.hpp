#pragma once

#include <string>
#include <vector>

#include "rblab/rbsim.hpp"

namespace rblab {

struct GaugeSector {
  size_t irrep = 0;
  std::string label;
  int irrep_dim = 0;
  cplx f_max;
  CVec r_max;   // dominant right eigenvector of F(phi)[sigma], scaled so <z|r_max> = 1
  CVec l_max;   // dominant left eigenvector, <l_max|r_max> = 1
  CVec z;       // unit eigenvector of F(omega)[sigma] with eigenvalue 1
};

// R = sum_lambda d_lambda X(r_lambda) X(z_lambda)^dag, where X(v) de-vectorizes
// v in V_lambda (x) C^{d^2} into a d^2 x d_lambda matrix. Satisfies
// |G|^-1 sum_g phi(g) R omega(g)^dag = R Dep with Dep = sum f_lambda P_lambda.
struct GaugeDecomposition {
  CMat r;
  CMat dep;
  std::vector<GaugeSector> sectors;
  double relation_residual = 0.0;   // ||avg phi R omega^dag - R Dep||_F
  double biorthogonality = 0.0;     // max |<l_max|r_max> - 1|
};

// Requires a multiplicity-free omega, a catalog with irrep matrices, simple
// dominant eigenvalues and an invertible R.
GaugeDecomposition depolarizing_gauge(const ImplementationMap& phi, const Representation& omega,
                                      const IrrepCatalog& catalog);

struct GaugeFidelity {
  double gauge_average = 0.0;  // |G|^-1 sum_g F_avg(R^-1 phi(g) R, omega(g))
  double depolarizing = 0.0;   // F_avg(Dep, 1)
};
GaugeFidelity gauge_fidelity(const ImplementationMap& phi, const GaugeDecomposition& gauge);

// Noise in between gates in the depolarizing gauge: omega(g)^dag R^-1 phi(g) R.
SuperOp gauge_noise(const ImplementationMap& phi, const GaugeDecomposition& gauge, int g);

struct CpScanRow {
  double alpha = 0.0;
  double gamma = 0.0;
  double min_choi_phi = 0.0;    // minimum over g of the Choi spectrum of phi(g)
  double min_choi_noise = 0.0;  // Choi spectrum minimum of M2(alpha) T(gamma) M1(alpha)
  bool phi_cp = false;          // min_choi_phi >= -1e-10
  bool noise_non_cp = false;    // min_choi_noise < -1e-6
};
// Builds phi(g) = T(gamma) M1(alpha) omega(g) M2(alpha) on the single-qubit Clifford group.
std::vector<CpScanRow> cp_violation_scan(const std::vector<double>& alphas, const std::vector<double>& gammas);
// Alpha values of the rows with gamma == gamma showing the CP / non-CP signature.
std::vector<double> signature_alphas(const std::vector<CpScanRow>& rows, double gamma);

struct FidelityTerm {
  std::string label;
  int irrep_dim = 0;
  cplx f_max;
  cplx overlap;            // <z|r_max><l_max|z>
  cplx dominant_term;      // d_lambda f_max overlap / d^2
  cplx residuum;           // d_lambda sum_j f_j <z|r_j><l_j|z> / d^2
  double residuum_scale = 0.0;  // ||E||^3 ||l_max|| ||r_max||
  std::string regime;
};

struct FidelityDecomposition {
  std::vector<FidelityTerm> terms;
  double alpha_res = 0.0;
  double total = 0.0;           // sum of dominant terms plus residuum
  double parseval = 0.0;        // d^-2 sum_lambda d_lambda Tr(F(omega)^dag F(S phi S^-1))
  double direct_average = 0.0;  // |G|^-1 sum_g F_e(S phi(g) S^-1, omega(g))
  bool perturbed = false;       // a block was perturbed by 1e-12 to diagonalize
};

// Multiplicity-free omega; gauge S is a d^2 x d^2 invertible matrix in the operator basis.
FidelityDecomposition fidelity_decomposition(const ImplementationMap& phi, const Representation& omega,
                                             const IrrepCatalog& catalog, const CMat& gauge);

struct LeakExample {
  int levels = 0;
  double mu = 0.0;
  int dim = 0;
  double bound = 0.0;              // 1 - 2L/d
  double fidelity_exact = 0.0;     // group average of F_avg(phi(g), omega(g)) via the 1-design identity
  double fidelity_monte_carlo = 0.0;
  double fidelity_std_error = 0.0;
  std::vector<int> lengths;
  std::vector<double> p;           // [S^m]_{1,1} + [S^m]_{1,L}
  double score = 0.0;              // non-exponentiality score
};

// score = max_m |log p(m) - (a + b m)| with (a, b) the least-squares line of
// log p against m over all requested lengths.
double non_exponentiality_score(const std::vector<int>& lengths, const std::vector<double>& p);

LeakExample decay_vs_fidelity_example(int levels, double mu, int qubits, const std::vector<int>& lengths,
                                      long long mc_samples = 2000, std::uint64_t seed = 11);

}  // namespace rblab
