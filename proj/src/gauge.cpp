#include "rblab/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

namespace rblab {

namespace {

struct SectorInfo {
  size_t irrep;
  int irrep_dim;
  CMat projector;
};

std::vector<SectorInfo> multiplicity_free_sectors(const Representation& omega, const IrrepCatalog& catalog) {
  std::vector<SectorInfo> out;
  for (auto& s : irrep_projectors(omega, catalog)) {
    if (s.multiplicity == 0) continue;
    if (s.multiplicity > 1)
      throw DomainError(fmt::format("gauge: irrep '{}' occurs {} times; only multiplicity-free references are "
                                    "supported",
                                    catalog[s.irrep].label, s.multiplicity));
    out.push_back({s.irrep, catalog[s.irrep].dim, std::move(s.projector)});
  }
  return out;
}

// d^2 x d_lambda matrix X with X(k, a) = v(a d^2 + k).
CMat devectorize(const CVec& v, int irrep_dim, int n) {
  CMat x(n, irrep_dim);
  for (int a = 0; a < irrep_dim; ++a) x.col(a) = v.segment(static_cast<Eigen::Index>(a) * n, n);
  return x;
}

CVec ideal_eigenvector(const ImplementationMap& omega_map, const IrrepCatalog& catalog, size_t irrep) {
  const CMat f = fourier_block(omega_map, catalog, irrep).mat;
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (f + f.adjoint()));
  const auto n = f.rows();
  if (std::abs(es.eigenvalues()(n - 1) - 1.0) > 1e-8 || (n > 1 && std::abs(es.eigenvalues()(n - 2)) > 1e-8))
    throw DomainError("gauge: Fourier block of omega is not a rank-one projector");
  return es.eigenvectors().col(n - 1);
}

struct EigenSystem {
  CVec values;
  CMat right;  // columns
  CMat left;   // columns, left.col(k)^dag right.col(j) = delta_kj
  bool perturbed = false;
};

// Eigen-decomposition sorted by (-|z|, -Re z, -Im z). Nearly defective blocks
// are perturbed once by a 1e-12 diagonal shift pattern.
EigenSystem eigensystem(const CMat& block) {
  CMat a = block;
  bool perturbed = false;
  for (int attempt = 0; attempt < 2; ++attempt) {
    Eigen::ComplexEigenSolver<CMat> es(a);
    if (es.info() != Eigen::Success) throw NumericError("gauge: eigendecomposition failed");
    const CMat v = es.eigenvectors();
    if (condition_number(v) < 1e10) {
      std::vector<Eigen::Index> order(static_cast<size_t>(a.rows()));
      std::iota(order.begin(), order.end(), 0);
      const CVec& ev = es.eigenvalues();
      std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        if (std::abs(ev(x)) != std::abs(ev(y))) return std::abs(ev(x)) > std::abs(ev(y));
        if (ev(x).real() != ev(y).real()) return ev(x).real() > ev(y).real();
        return ev(x).imag() > ev(y).imag();
      });
      EigenSystem out;
      out.perturbed = perturbed;
      out.values.resize(a.rows());
      out.right.resize(a.rows(), a.cols());
      for (Eigen::Index k = 0; k < a.rows(); ++k) {
        out.values(k) = ev(order[static_cast<size_t>(k)]);
        out.right.col(k) = v.col(order[static_cast<size_t>(k)]);
      }
      out.left = out.right.inverse().adjoint();
      return out;
    }
    for (Eigen::Index k = 0; k < a.rows(); ++k) a(k, k) += 1e-12 * static_cast<double>(k + 1) / a.rows();
    perturbed = true;
  }
  throw NumericError("gauge: Fourier block is not diagonalizable even after a 1e-12 perturbation");
}

ImplementationMap conjugated(const ImplementationMap& phi, const CMat& s, const CMat& s_inv) {
  std::vector<SuperOp> maps;
  for (const auto& m : phi.maps()) maps.emplace_back(m.dim(), s * m.mat() * s_inv);
  return ImplementationMap(phi.group(), std::move(maps));
}

}  // namespace

GaugeDecomposition depolarizing_gauge(const ImplementationMap& phi, const Representation& omega,
                                      const IrrepCatalog& catalog) {
  if (phi.group().get() != omega.group().get()) throw DomainError("depolarizing_gauge: group mismatch");
  const int d = phi.dim();
  const int n = d * d;
  const auto sectors = multiplicity_free_sectors(omega, catalog);
  const ImplementationMap omega_map = ImplementationMap::from_representation(omega);

  GaugeDecomposition out;
  out.r = CMat::Zero(n, n);
  out.dep = CMat::Zero(n, n);
  for (const auto& s : sectors) {
    const CVec z = ideal_eigenvector(omega_map, catalog, s.irrep);
    const EigenSystem es = eigensystem(fourier_block(phi, catalog, s.irrep).mat);
    if (es.values.size() > 1 && std::abs(es.values(0)) - std::abs(es.values(1)) <= 1e-10)
      throw DomainError(fmt::format("depolarizing_gauge: dominant eigenvalue of '{}' is not simple",
                                    catalog[s.irrep].label));
    CVec r = es.right.col(0);
    CVec l = es.left.col(0);
    const cplx c = z.dot(r);
    if (std::abs(c) < 1e-12)
      throw DomainError(fmt::format("depolarizing_gauge: dominant eigenvector of '{}' is orthogonal to the ideal one",
                                    catalog[s.irrep].label));
    r /= c;
    l *= std::conj(c);
    GaugeSector sec{s.irrep, catalog[s.irrep].label, s.irrep_dim, es.values(0), r, l, z};
    out.biorthogonality = std::max(out.biorthogonality, std::abs(l.dot(r) - 1.0));
    out.r += static_cast<double>(s.irrep_dim) * devectorize(r, s.irrep_dim, n) * devectorize(z, s.irrep_dim, n).adjoint();
    out.dep += es.values(0) * s.projector;
    out.sectors.push_back(std::move(sec));
  }
  if (!(condition_number(out.r) < 1e12)) throw DomainError("depolarizing_gauge: gauge operator R is singular");

  CMat lhs = CMat::Zero(n, n);
  for (int g = 0; g < phi.group()->order(); ++g) lhs += phi(g).mat() * out.r * omega(g).adjoint();
  lhs /= static_cast<double>(phi.group()->order());
  out.relation_residual = (lhs - out.r * out.dep).norm();
  return out;
}

GaugeFidelity gauge_fidelity(const ImplementationMap& phi, const GaugeDecomposition& gauge) {
  const int d = phi.dim();
  const CMat r_inv = gauge.r.inverse();
  const auto omega = phi.group();
  const Representation rep = adjoint_representation(omega);
  GaugeFidelity out;
  for (int g = 0; g < omega->order(); ++g)
    out.gauge_average += avg_fidelity(SuperOp(d, r_inv * phi(g).mat() * gauge.r), SuperOp(d, rep(g)));
  out.gauge_average /= omega->order();
  out.depolarizing = avg_fidelity(SuperOp(d, gauge.dep), SuperOp::identity(d));
  return out;
}

SuperOp gauge_noise(const ImplementationMap& phi, const GaugeDecomposition& gauge, int g) {
  const Representation rep = adjoint_representation(phi.group());
  return SuperOp(phi.dim(), rep(g).adjoint() * gauge.r.inverse() * phi(g).mat() * gauge.r);
}

std::vector<CpScanRow> cp_violation_scan(const std::vector<double>& alphas, const std::vector<double>& gammas) {
  const GroupBundle bundle = build_clifford_1q();
  std::vector<CpScanRow> rows;
  for (double gamma : gammas) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("cp_violation_scan: gamma must lie in [0, 1]");
    for (double alpha : alphas) {
      if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("cp_violation_scan: alpha must lie in (0, 1]");
      const SuperOp t = damping_t(gamma);
      const SuperOp m1 = m1_alpha(alpha);
      const SuperOp m2 = m2_alpha(alpha);
      CpScanRow row;
      row.alpha = alpha;
      row.gamma = gamma;
      row.min_choi_phi = std::numeric_limits<double>::infinity();
      for (int g = 0; g < bundle.group->order(); ++g) {
        const SuperOp phi = t * m1 * SuperOp(2, bundle.omega(g)) * m2;
        row.min_choi_phi = std::min(row.min_choi_phi, min_hermitian_eigenvalue(to_choi(phi)));
      }
      row.min_choi_noise = min_hermitian_eigenvalue(to_choi(m2 * t * m1));
      row.phi_cp = row.min_choi_phi >= -1e-10;
      row.noise_non_cp = row.min_choi_noise < -1e-6;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<double> signature_alphas(const std::vector<CpScanRow>& rows, double gamma) {
  std::vector<double> out;
  for (const auto& r : rows)
    if (r.gamma == gamma && r.phi_cp && r.noise_non_cp) out.push_back(r.alpha);
  return out;
}

FidelityDecomposition fidelity_decomposition(const ImplementationMap& phi, const Representation& omega,
                                             const IrrepCatalog& catalog, const CMat& gauge) {
  const int d = phi.dim();
  const int n = d * d;
  if (gauge.rows() != n || gauge.cols() != n) throw DomainError("fidelity_decomposition: gauge has the wrong shape");
  Eigen::PartialPivLU<CMat> lu(gauge);
  if (!(condition_number(gauge) < 1e12)) throw DomainError("fidelity_decomposition: gauge is singular");
  const CMat gauge_inv = lu.inverse();
  const ImplementationMap gauged = conjugated(phi, gauge, gauge_inv);
  const ImplementationMap omega_map = ImplementationMap::from_representation(omega);
  const auto sectors = multiplicity_free_sectors(omega, catalog);
  const double dd = static_cast<double>(d) * d;

  FidelityDecomposition out;
  cplx total = 0.0;
  cplx residuum = 0.0;
  for (const auto& s : sectors) {
    const CVec z = ideal_eigenvector(omega_map, catalog, s.irrep);
    const CMat block = fourier_block(gauged, catalog, s.irrep).mat;
    const EigenSystem es = eigensystem(block);
    out.perturbed = out.perturbed || es.perturbed;
    FidelityTerm term;
    term.label = catalog[s.irrep].label;
    term.irrep_dim = s.irrep_dim;
    term.f_max = es.values(0);
    term.overlap = z.dot(es.right.col(0)) * es.left.col(0).dot(z);
    term.dominant_term = static_cast<double>(s.irrep_dim) * term.f_max * term.overlap / dd;
    cplx res = 0.0;
    for (Eigen::Index j = 1; j < es.values.size(); ++j)
      res += es.values(j) * z.dot(es.right.col(j)) * es.left.col(j).dot(z);
    term.residuum = static_cast<double>(s.irrep_dim) * res / dd;
    const double e = spectral_norm(block - z * z.adjoint());
    term.residuum_scale = e * e * e * es.left.col(0).norm() * es.right.col(0).norm();
    // Regime label: which deviation from 1 dominates the fidelity term.
    const double eig_dev = std::abs(1.0 - term.f_max);
    const double ov_dev = std::abs(1.0 - term.overlap);
    term.regime = ov_dev < 0.1 * eig_dev ? "decay-dominated" : (eig_dev < 0.1 * ov_dev ? "overlap-dominated" : "mixed");
    total += term.dominant_term + term.residuum;
    residuum += term.residuum;
    out.terms.push_back(std::move(term));
  }
  out.alpha_res = residuum.real();
  out.total = total.real();

  cplx parseval = 0.0;
  for (size_t k = 0; k < catalog.size(); ++k) {
    const CMat fo = fourier_block(omega_map, catalog, k).mat;
    const CMat fp = fourier_block(gauged, catalog, k).mat;
    parseval += static_cast<double>(catalog[k].dim) * (fo.adjoint() * fp).trace();
  }
  out.parseval = parseval.real() / dd;

  double direct = 0.0;
  for (int g = 0; g < phi.group()->order(); ++g) direct += entanglement_fidelity(gauged(g), omega_map(g));
  out.direct_average = direct / phi.group()->order();
  return out;
}

double non_exponentiality_score(const std::vector<int>& lengths, const std::vector<double>& p) {
  if (lengths.size() != p.size() || lengths.size() < 2)
    throw DomainError("non_exponentiality_score: need matching lengths and at least two points");
  const auto n = static_cast<Eigen::Index>(p.size());
  RMat a(n, 2);
  RVec b(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!(p[static_cast<size_t>(k)] > 0.0)) throw DomainError("non_exponentiality_score: p must be positive");
    a(k, 0) = 1.0;
    a(k, 1) = lengths[static_cast<size_t>(k)];
    b(k) = std::log(p[static_cast<size_t>(k)]);
  }
  const RVec x = a.colPivHouseholderQr().solve(b);
  return (a * x - b).cwiseAbs().maxCoeff();
}

LeakExample decay_vs_fidelity_example(int levels, double mu, int qubits, const std::vector<int>& lengths,
                                      long long mc_samples, std::uint64_t seed) {
  if (qubits < 1 || qubits > 10) throw DomainError("decay_vs_fidelity_example: qubits must lie in 1..10");
  const int d = 1 << qubits;
  if (levels < 1 || levels >= d) throw DomainError("decay_vs_fidelity_example: need d > L >= 1");
  LeakExample out;
  out.levels = levels;
  out.mu = mu;
  out.dim = d;
  out.bound = 1.0 - 2.0 * levels / d;
  out.lengths = lengths;

  const RMat s = leak_stochastic_matrix(d, levels, mu);
  for (int m : lengths) {
    if (m < 0) throw DomainError("decay_vs_fidelity_example: lengths must be non-negative");
    RMat pw = RMat::Identity(d, d);
    for (int k = 0; k < m; ++k) pw = pw * s;
    out.p.push_back(pw(0, 0) + pw(0, levels - 1));
  }
  out.score = non_exponentiality_score(lengths, out.p);

  // The Clifford group is a unitary 1-design: the group average of Tr[omega(g)^dag A]
  // equals Tr[A(1)] / d. With A = phi(g) this gives d^2 F_e = L/d + (d-L)^2.
  const double dd = d;
  const double fe = (levels / dd + (dd - levels) * (dd - levels)) / (dd * dd);
  out.fidelity_exact = (dd * fe + 1.0) / (dd + 1.0);

  // Monte Carlo over Haar unitaries U_g and Haar states psi of
  // Tr[phi_U(psi) U psi U^dag], the average fidelity integrand.
  if (mc_samples > 0) {
    std::mt19937_64 rng(seed);
    double sum = 0.0, sum_sq = 0.0;
    for (long long t = 0; t < mc_samples; ++t) {
      const CMat u = haar_unitary(d, rng);
      const CVec psi = haar_state(d, rng);
      // Lambda(P psi psi^dag P) is diagonal: weight |psi_i|^2 moved by row i of S.
      RVec diag = RVec::Zero(d);
      for (int i = 0; i < levels; ++i) diag += std::norm(psi(i)) * s.row(i).transpose();
      const CVec upsi = u * psi;
      double v = 0.0;
      for (int k = 0; k < d; ++k) v += diag(k) * std::norm(upsi(k));
      const CVec q = psi.tail(d - levels);
      const double pq = q.squaredNorm();
      v += pq * pq;  // |<psi|(1-P)|psi>|^2 from U (1-P) psi psi^dag (1-P) U^dag
      sum += v;
      sum_sq += v * v;
    }
    const double nn = static_cast<double>(mc_samples);
    out.fidelity_monte_carlo = sum / nn;
    out.fidelity_std_error = std::sqrt(std::max(0.0, (sum_sq - nn * out.fidelity_monte_carlo * out.fidelity_monte_carlo) /
                                                         (nn - 1.0) / nn));
  }
  return out;
}

}  // namespace rblab
