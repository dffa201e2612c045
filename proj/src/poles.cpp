#include "rblab/poles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

namespace rblab {

namespace {

constexpr double kMusicCap = 1e12;

bool pole_before(cplx a, cplx b) {
  if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

void warn_out_of_range(const PoleSet& set) {
  for (const cplx z : set.poles)
    if (std::abs(z) > 1.1) spdlog::warn("pole {:.6g}{:+.6g}i lies outside the sanity radius 1.1", z.real(), z.imag());
}

// Left singular vectors of the Hankel matrix spanning the signal subspace.
RMat signal_subspace(const RVec& y, int L, int n) {
  const RMat h = hankel(y, L);
  if (n < 1 || n > std::min(h.rows(), h.cols()))
    throw DomainError(fmt::format("esprit: n = {} exceeds min(L, M-L+1) = {}", n, std::min(h.rows(), h.cols()) - 1));
  Eigen::BDCSVD<RMat> svd(h, Eigen::ComputeThinU);
  const RVec& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > 1e-13 * s(0)) ++rank;
  if (s.size() == 0 || s(0) == 0.0) rank = 0;
  if (rank < n) throw DomainError(fmt::format("esprit: Hankel rank {} is below the requested {} poles", rank, n));
  return svd.matrixU().leftCols(n);
}

}  // namespace

void sort_poles(PoleSet& set) {
  std::vector<size_t> idx(set.poles.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return pole_before(set.poles[a], set.poles[b]); });
  PoleSet out;
  for (size_t k : idx) {
    out.poles.push_back(set.poles[k]);
    if (set.coefficients.size() == set.poles.size()) out.coefficients.push_back(set.coefficients[k]);
  }
  set = std::move(out);
}

RVec synthesize_signal(const PoleSet& set, int M) {
  if (M < 0) throw DomainError("synthesize_signal: M must be non-negative");
  const bool weighted = set.coefficients.size() == set.poles.size();
  RVec y = RVec::Zero(M + 1);
  for (size_t i = 0; i < set.poles.size(); ++i) {
    const cplx a = weighted ? set.coefficients[i] : cplx(1.0 / static_cast<double>(set.poles.size()));
    cplx zm = 1.0;
    for (int m = 0; m <= M; ++m) {
      y(m) += (a * zm).real();
      zm *= set.poles[i];
    }
  }
  return y;
}

RMat hankel(const RVec& y, int L) {
  const auto M = static_cast<int>(y.size()) - 1;
  if (L < 1 || L >= M) throw DomainError(fmt::format("hankel: need 1 <= L < M, got L = {}, M = {}", L, M));
  RMat h(L + 1, M - L + 1);
  for (int j = 0; j <= L; ++j)
    for (int k = 0; k <= M - L; ++k) h(j, k) = y(j + k);
  return h;
}

PoleSet esprit(const RVec& y, int L, int n) {
  for (Eigen::Index k = 0; k < y.size(); ++k)
    if (!std::isfinite(y(k))) throw DomainError("esprit: signal has non-finite entries");
  const RMat u = signal_subspace(y, L, n);
  const RMat up = u.topRows(L);
  const RMat down = u.bottomRows(L);
  const RMat psi = up.colPivHouseholderQr().solve(down);
  Eigen::EigenSolver<RMat> es(psi, false);
  if (es.info() != Eigen::Success) throw NumericError("esprit: eigendecomposition of the shift operator failed");
  PoleSet out;
  for (Eigen::Index k = 0; k < n; ++k) out.poles.push_back(es.eigenvalues()(k));
  sort_poles(out);
  warn_out_of_range(out);
  return out;
}

std::vector<double> music_spectrum(const RVec& y, int L, int n, const std::vector<cplx>& grid) {
  if (grid.empty()) throw DomainError("music_spectrum: empty grid");
  const RMat us = signal_subspace(y, L, n);
  std::vector<double> out;
  out.reserve(grid.size());
  CVec w(L + 1);
  for (const cplx z : grid) {
    cplx zk = 1.0;
    for (int k = 0; k <= L; ++k) {
      w(k) = zk;
      zk *= z;
    }
    const CVec noise = w - us.cast<cplx>() * (us.transpose().cast<cplx>() * w);
    const double num = w.norm();
    const double den = noise.norm();
    out.push_back(den * kMusicCap <= num ? kMusicCap : num / den);
  }
  return out;
}

std::vector<cplx> fit_coefficients(const RVec& y, const std::vector<cplx>& z) {
  const CMat w = vandermonde(z, static_cast<int>(y.size())).transpose();
  const CVec a = w.colPivHouseholderQr().solve(CVec(y.cast<cplx>()));
  return {a.data(), a.data() + a.size()};
}

CMat vandermonde(const std::vector<cplx>& z, int M) {
  if (z.empty() || M < 1) throw DomainError("vandermonde: need at least one pole and M >= 1");
  CMat w(static_cast<Eigen::Index>(z.size()), M);
  for (size_t i = 0; i < z.size(); ++i) {
    cplx zk = 1.0;
    for (int k = 0; k < M; ++k) {
      w(static_cast<Eigen::Index>(i), k) = zk;
      zk *= z[i];
    }
  }
  return w;
}

double cond2(const std::vector<cplx>& z, int M) {
  return condition_number(vandermonde(z, M));
}

double asymptotic_cond(const std::vector<cplx>& z) {
  if (z.empty()) throw DomainError("asymptotic_cond: no poles");
  const auto n = static_cast<Eigen::Index>(z.size());
  CMat c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(z[static_cast<size_t>(i)]) >= 1.0) throw DomainError("asymptotic_cond: requires |z_i| < 1");
    for (Eigen::Index j = 0; j < n; ++j)
      c(i, j) = 1.0 / (1.0 - z[static_cast<size_t>(i)] * std::conj(z[static_cast<size_t>(j)]));
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(c, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues()(n - 1);
  if (!(lo > hi * std::numeric_limits<double>::epsilon())) throw NumericError("asymptotic_cond: C(z) is singular");
  return std::sqrt(hi / lo);
}

double hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.empty() || b.empty()) throw DomainError("hausdorff: empty point set");
  auto directed = [](const std::vector<cplx>& p, const std::vector<cplx>& q) {
    double worst = 0.0;
    for (const cplx x : p) {
      double best = std::numeric_limits<double>::infinity();
      for (const cplx v : q) best = std::min(best, std::abs(x - v));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

long long bernstein_samples(int M, double var_bound, double eps, double delta) {
  if (M < 1 || !(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0) || var_bound < 0.0)
    throw DomainError("bernstein_samples: need M >= 1, eps and delta in (0,1), var_bound >= 0");
  const double n = 4.0 * std::max(M * var_bound / (eps * eps), 2.0 / (3.0 * eps)) * std::log(M / delta);
  return static_cast<long long>(std::ceil(n));
}

long long sampling_complexity(const std::vector<cplx>& z, int M, double var_bound, double eps, double delta) {
  if (M < 2 || M % 2 != 0) throw DomainError("sampling_complexity: M must be even and >= 2");
  if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0) || var_bound < 0.0)
    throw DomainError("sampling_complexity: need eps and delta in (0,1), var_bound >= 0");
  const double kappa = cond2(z, M / 2);
  double zhat = std::numeric_limits<double>::infinity();
  for (const cplx v : z) zhat = std::min(zhat, std::abs(v));
  if (!(zhat > 0.0)) throw DomainError("sampling_complexity: a pole has zero modulus");
  const double lg = std::log(M / delta);
  const double first = 8.0 * std::pow(kappa, 4) / (zhat * zhat) * M * var_bound / (eps * eps) * lg;
  const double second = 16.0 / 3.0 * kappa * kappa / zhat / eps * lg;
  return static_cast<long long>(std::ceil(std::max(first, second)));
}

PoleSet pole_family(const std::string& name, int n) {
  if (n < 1) throw DomainError("pole_family: n must be positive");
  PoleSet out;
  if (name.rfind("lin", 0) == 0) {
    double alpha = 0.0;
    try {
      size_t used = 0;
      alpha = std::stod(name.substr(3), &used);
      if (used != name.size() - 3) throw DomainError("");
    } catch (const std::exception&) {
      throw DomainError(fmt::format("pole_family: cannot parse alpha in '{}'", name));
    }
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("pole_family: lin alpha must lie in (0,1)");
    for (int k = 0; k < n; ++k) out.poles.emplace_back(alpha + (1.0 - alpha) * k / n);
  } else if (name.size() >= 2 && name[0] == 'F') {
    int a = 0;
    try {
      size_t used = 0;
      a = std::stoi(name.substr(1), &used);
      if (used != name.size() - 1) throw DomainError("");
    } catch (const std::exception&) {
      throw DomainError(fmt::format("pole_family: cannot parse a in '{}'", name));
    }
    if (a < 1) throw DomainError("pole_family: F_a needs a >= 1");
    for (int k = 0; k < n; ++k) out.poles.emplace_back(1.0 - std::pow(10.0, -static_cast<double>(a + k) / a));
  } else {
    throw DomainError(fmt::format("pole_family: unknown family '{}'", name));
  }
  out.coefficients.assign(static_cast<size_t>(n), cplx(1.0 / n));
  return out;
}

RVec binomial_sample(const RVec& y, long long shots, std::uint64_t seed) {
  if (shots < 1) throw DomainError("binomial_sample: shots must be positive");
  std::mt19937_64 rng(seed);
  RVec out(y.size());
  for (Eigen::Index m = 0; m < y.size(); ++m) {
    if (y(m) < -1e-12 || y(m) > 1.0 + 1e-12) throw DomainError("binomial_sample: probabilities must lie in [0,1]");
    std::binomial_distribution<long long> bin(shots, std::clamp(y(m), 0.0, 1.0));
    out(m) = static_cast<double>(bin(rng)) / static_cast<double>(shots);
  }
  return out;
}

double empirical_hankel_deviation(const RVec& y, long long shots, double eps, int trials, std::uint64_t seed) {
  const auto M = static_cast<int>(y.size());
  if (M < 2 || M % 2 != 0) throw DomainError("empirical_hankel_deviation: need an even number of points");
  if (trials < 1) throw DomainError("empirical_hankel_deviation: trials must be positive");
  const int L = M / 2;
  auto square = [L](const RVec& v) {
    RMat h(L, L);
    for (int i = 0; i < L; ++i)
      for (int j = 0; j < L; ++j) h(i, j) = v(i + j);
    return h;
  };
  const RMat truth = square(y);
  std::seed_seq seq{seed};
  std::mt19937_64 root(seq);
  int ok = 0;
  for (int t = 0; t < trials; ++t) {
    const RVec noisy = binomial_sample(y, shots, root());
    if (spectral_norm(CMat((square(noisy) - truth).cast<cplx>())) <= eps) ++ok;
  }
  return static_cast<double>(ok) / trials;
}

PoleSet group_degenerate(const PoleSet& set, double radius) {
  PoleSet out;
  std::vector<bool> used(set.poles.size(), false);
  for (size_t i = 0; i < set.poles.size(); ++i) {
    if (used[i]) continue;
    cplx sum = set.poles[i];
    int count = 1;
    used[i] = true;
    for (size_t j = i + 1; j < set.poles.size(); ++j) {
      if (!used[j] && std::abs(set.poles[j] - set.poles[i]) <= radius) {
        used[j] = true;
        sum += set.poles[j];
        ++count;
      }
    }
    out.poles.push_back(sum / static_cast<double>(count));
    out.coefficients.emplace_back(static_cast<double>(count));
  }
  sort_poles(out);
  return out;
}

}  // namespace rblab
