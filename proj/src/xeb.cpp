#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

#include "parallel.hpp"
#include "rblab/filter.hpp"
#include "rblab/poles.hpp"

namespace rblab {

namespace {

void check_qubits(int qubits) {
  if (qubits < 1 || qubits > 3) throw DomainError("xeb: supported for 1 to 3 qubits");
}

void check_noise(const XebNoise& noise, int d) {
  if (noise.gate.dim() != d) throw DomainError("xeb: noise dimension does not match the qubit count");
  if (noise.spam_prep && noise.spam_prep->dim() != d) throw DomainError("xeb: SPAM dimension mismatch");
  if (noise.spam_meas && noise.spam_meas->dim() != d) throw DomainError("xeb: SPAM dimension mismatch");
}

}  // namespace

std::pair<double, double> xeb_twirl_eigenvalues(const SuperOp& lambda) {
  const int d = lambda.dim();
  const CMat& m = lambda.mat();
  // Basis element 0 spans the trivial sector; the rest span the adjoint one.
  const double s = m(0, 0).real();
  const double f = (m.trace().real() - s) / (static_cast<double>(d) * d - 1.0);
  return {s, f};
}

double xeb_exact(int qubits, const XebNoise& noise, int m) {
  check_qubits(qubits);
  if (m < 1) throw DomainError("xeb_exact: m must be at least 1");
  const int d = 1 << qubits;
  check_noise(noise, d);
  const auto [s, f] = xeb_twirl_eigenvalues(noise.gate);
  // Every gate but the last is replaced by the twirl; the last stays as Lambda.
  CMat twirl = CMat::Identity(d * d, d * d) * f;
  twirl(0, 0) = s;
  CMat k = noise.gate.mat();
  for (int j = 1; j < m; ++j) k = k * twirl;
  if (noise.spam_meas) k = noise.spam_meas->mat() * k;
  const SuperOp kdual = SuperOp(d, k).adjoint();

  const CMat rho = basis_state(d, 0);
  const CMat sigma = noise.spam_prep ? noise.spam_prep->apply(rho) : rho;
  // int V(x)V (rho (x) sigma) V^dag(x)V^dag = c1 1 + c2 SWAP.
  const double dd = d;
  const double tr = (rho.trace() * sigma.trace()).real();
  const double ov = (rho * sigma).trace().real();
  const double c1 = (tr - ov / dd) / (dd * dd - 1.0);
  const double c2 = (ov - tr / dd) / (dd * dd - 1.0);
  double total = 0.0;
  for (int x = 0; x < d; ++x) {
    const CMat px = basis_state(d, x);
    const CMat kx = kdual.apply(px);
    total += c1 * kx.trace().real() + c2 * (px * kx).trace().real();
  }
  return dd * total;
}

XebEstimate xeb_monte_carlo(int qubits, const XebNoise& noise, int m, long long samples, std::uint64_t seed) {
  check_qubits(qubits);
  if (m < 1) throw DomainError("xeb_monte_carlo: m must be at least 1");
  if (samples < 1) throw DomainError("xeb_monte_carlo: need at least one sample");
  const int d = 1 << qubits;
  check_noise(noise, d);
  const CMat rho = basis_state(d, 0);
  std::vector<double> values(static_cast<size_t>(samples));
  detail::parallel_for(values.size(), thread_count_from_env(), [&](size_t l) {
    std::mt19937_64 rng(stream_seed(seed, static_cast<std::uint64_t>(m), l));
    CMat state = noise.spam_prep ? noise.spam_prep->apply(rho) : rho;
    CMat ideal = CMat::Identity(d, d);
    for (int j = 0; j < m; ++j) {
      const CMat u = haar_unitary(d, rng);
      state = noise.gate.apply(u * state * u.adjoint());
      ideal = u * ideal;
    }
    if (noise.spam_meas) state = noise.spam_meas->apply(state);
    double v = 0.0;
    for (int x = 0; x < d; ++x) v += std::norm(ideal(x, 0)) * state(x, x).real();
    values[l] = d * v;
  });
  XebEstimate out;
  out.samples = samples;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.f_hat = sum / static_cast<double>(samples);
  double ss = 0.0;
  for (double v : values) ss += (v - out.f_hat) * (v - out.f_hat);
  out.std_error = samples > 1 ? std::sqrt(ss / static_cast<double>(samples - 1) / static_cast<double>(samples)) : 0.0;
  return out;
}

XebNormalization xeb_normalization(int qubits, long long samples, std::uint64_t seed) {
  check_qubits(qubits);
  if (samples < 2) throw DomainError("xeb_normalization: need at least two samples");
  const int d = 1 << qubits;
  std::mt19937_64 rng(seed);
  double sum = 0.0, sum_sq = 0.0;
  for (long long t = 0; t < samples; ++t) {
    const CMat u = haar_unitary(d, rng);
    // Every column of a Haar unitary is a Haar state; averaging them is unbiased.
    double v = 0.0;
    for (int j = 0; j < d; ++j)
      for (int x = 0; x < d; ++x) v += std::pow(std::norm(u(x, j)), 2);
    v /= d;
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  XebNormalization out;
  out.samples = samples;
  out.raw_integral = mean;
  out.value = d * mean;
  out.expected = 2.0 * d / (d + 1.0);
  out.std_error = d * std::sqrt(var / n);
  return out;
}

DecayFit fit_constant_plus_exponential(const std::vector<double>& y, int m0) {
  if (y.size() < 4) throw DomainError("fit_constant_plus_exponential: need at least four points");
  const RVec data = Eigen::Map<const RVec>(y.data(), static_cast<Eigen::Index>(y.size()));
  const int M = static_cast<int>(y.size()) - 1;
  const PoleSet poles = esprit(data, M / 2, 2);
  // The pole nearest 1 is the constant; the other is the decay rate.
  const bool first_const = std::abs(poles.poles[0] - 1.0) <= std::abs(poles.poles[1] - 1.0);
  const cplx zc = poles.poles[first_const ? 0 : 1];
  const cplx zr = poles.poles[first_const ? 1 : 0];
  CMat w(data.size(), 2);
  for (Eigen::Index k = 0; k < data.size(); ++k) {
    w(k, 0) = std::pow(zc, static_cast<double>(m0 + k));
    w(k, 1) = std::pow(zr, static_cast<double>(m0 + k));
  }
  const CVec coef = w.colPivHouseholderQr().solve(data.cast<cplx>());
  DecayFit out;
  out.rate = zr.real();
  out.constant = coef(0).real();
  out.amplitude = coef(1).real();
  out.residual = (w * coef - data.cast<cplx>()).cwiseAbs().maxCoeff();
  if (std::abs(zr.imag()) > 1e-9 || std::abs(zc.imag()) > 1e-9)
    throw NumericError("fit_constant_plus_exponential: poles are not real");
  return out;
}

DecayFit fit_single_exponential(const std::vector<double>& y, int m0) {
  if (y.size() < 2) throw DomainError("fit_single_exponential: need at least two points");
  const double sign = y.front() < 0.0 ? -1.0 : 1.0;
  const auto n = static_cast<Eigen::Index>(y.size());
  RMat a(n, 2);
  RVec b(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double v = sign * y[static_cast<size_t>(k)];
    if (!(v > 0.0)) throw DomainError("fit_single_exponential: data change sign or vanish");
    a(k, 0) = 1.0;
    a(k, 1) = static_cast<double>(m0 + k);
    b(k) = std::log(v);
  }
  const RVec x = a.colPivHouseholderQr().solve(b);
  DecayFit out;
  out.rate = std::exp(x(1));
  out.amplitude = sign * std::exp(x(0));
  for (Eigen::Index k = 0; k < n; ++k)
    out.residual = std::max(out.residual, std::abs(y[static_cast<size_t>(k)] -
                                                    out.amplitude * std::pow(out.rate, static_cast<double>(m0 + k))));
  return out;
}

DecayFit fit_rb_decay(const std::vector<int>& lengths, const std::vector<double>& y) {
  if (lengths.size() != y.size()) throw DomainError("fit_rb_decay: length mismatch");
  if (lengths.size() < 3) throw DomainError("fit_rb_decay: need at least three points");
  const auto n = static_cast<Eigen::Index>(y.size());
  RVec b(n);
  for (Eigen::Index k = 0; k < n; ++k) b(k) = y[static_cast<size_t>(k)];
  auto design = [&](double z) {
    RMat a(n, 2);
    for (Eigen::Index k = 0; k < n; ++k) {
      a(k, 0) = 1.0;
      a(k, 1) = std::pow(z, static_cast<double>(lengths[static_cast<size_t>(k)]));
    }
    return a;
  };
  auto sse = [&](double z) {
    const RMat a = design(z);
    const RVec x = a.colPivHouseholderQr().solve(b);
    return (a * x - b).squaredNorm();
  };
  // Coarse scan first: the objective is not unimodal when the decay is fast.
  constexpr int kGrid = 200;
  int best = 1;
  for (int k = 2; k < kGrid; ++k)
    if (sse(static_cast<double>(k) / kGrid) < sse(static_cast<double>(best) / kGrid)) best = k;
  const double lo = static_cast<double>(best - 1) / kGrid;
  const double hi = static_cast<double>(best + 1) / kGrid;
  const auto [z, err] = boost::math::tools::brent_find_minima(sse, lo, hi, 52);
  (void)err;
  const RMat a = design(z);
  const RVec x = a.colPivHouseholderQr().solve(b);
  DecayFit out;
  out.rate = z;
  out.constant = x(0);
  out.amplitude = x(1);
  out.residual = (a * x - b).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace rblab
