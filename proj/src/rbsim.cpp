#include "rblab/rbsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <random>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "rblab/kernels.hpp"
#include "parallel.hpp"

namespace rblab {

namespace {

using detail::splitmix64;

SuperOp prep_channel(const RBConfig& c) { return c.spam_prep ? *c.spam_prep : SuperOp::identity(c.phi.dim()); }
SuperOp meas_channel(const RBConfig& c) { return c.spam_meas ? *c.spam_meas : SuperOp::identity(c.phi.dim()); }

bool all_trace_preserving(const ImplementationMap& phi) {
  return std::all_of(phi.maps().begin(), phi.maps().end(), [](const SuperOp& m) { return m.is_trace_preserving(1e-10); });
}

// Fixes the sign conventions of clipping: hard error below -1e-9, warning above 1 + 1e-9.
double clip_probability(double p) {
  if (p < -1e-9) throw DomainError(fmt::format("negative outcome probability {:.3e}; inputs are not CP", p));
  if (p > 1.0 + 1e-9) spdlog::warn("outcome probability {:.12f} exceeds 1; clipped", p);
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t root, std::uint64_t length_index, std::uint64_t sequence_index) {
  return splitmix64(splitmix64(root ^ splitmix64(length_index + 1)) ^ (sequence_index + 1));
}

int thread_count_from_env() {
  const char* env = std::getenv("RBLAB_THREADS");
  if (env == nullptr) return 1;
  const int n = std::atoi(env);
  return n > 0 ? n : 1;
}

void validate(const RBConfig& c) {
  const int order = c.phi.group()->order();
  const int d = c.phi.dim();
  if (c.lengths.empty()) throw DomainError("RBConfig: no sequence lengths");
  for (int m : c.lengths)
    if (m < 0) throw DomainError("RBConfig: negative sequence length");
  if (c.g_end < 0 || c.g_end >= order) throw DomainError("RBConfig: g_end out of range");
  if (c.rho0.rows() != d || c.rho0.cols() != d) throw DomainError("RBConfig: rho0 has the wrong shape");
  if (std::abs(c.rho0.trace() - 1.0) > 1e-10 || min_hermitian_eigenvalue(c.rho0) < -1e-10 ||
      (c.rho0 - c.rho0.adjoint()).norm() > 1e-10)
    throw DomainError("RBConfig: rho0 is not a density operator");
  if (c.povm.empty()) throw DomainError("RBConfig: empty POVM");
  CMat total = CMat::Zero(d, d);
  for (const auto& e : c.povm) {
    if (e.rows() != d || e.cols() != d) throw DomainError("RBConfig: POVM effect has the wrong shape");
    total += e;
  }
  if ((total - CMat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10) throw DomainError("RBConfig: POVM is incomplete");
  if (c.schedule.cycle.empty()) throw DomainError("RBConfig: empty sampling schedule");
  for (const auto& nu : c.schedule.cycle) validate_distribution(nu, order);
  if (c.shots < 1 || c.sequences < 1) throw DomainError("RBConfig: shots and sequences must be positive");
}

std::vector<double> sequence_probabilities(const RBConfig& c, const std::vector<int>& gates, int g_final) {
  CVec v = to_coeffs(prep_channel(c).apply(c.rho0));
  for (int g : gates) v = c.phi(g).mat() * v;
  v = c.phi(g_final).mat() * v;
  const SuperOp meas_dual = meas_channel(c).adjoint();
  std::vector<double> p;
  for (const auto& e : c.povm) p.push_back(to_coeffs(meas_dual.apply(e)).dot(v).real());
  return p;
}

RBDataset run_rb(const RBConfig& c, int threads) {
  validate(c);
  const auto& group = *c.phi.group();
  const int order = group.order();
  const int n = c.phi.dim() * c.phi.dim();
  if (threads <= 0) threads = thread_count_from_env();

  std::vector<RMat> transfer;
  transfer.reserve(static_cast<size_t>(order));
  for (const auto& m : c.phi.maps()) {
    if (!m.is_hermiticity_preserving(1e-9)) throw DomainError("run_rb: phi(g) must preserve Hermiticity");
    transfer.push_back(m.transfer_matrix());
  }
  const RVec state = to_coeffs(prep_channel(c).apply(c.rho0)).real();
  const SuperOp meas_dual = meas_channel(c).adjoint();
  std::vector<RVec> effects;
  for (const auto& e : c.povm) effects.push_back(to_coeffs(meas_dual.apply(e)).real());
  const bool loss = !all_trace_preserving(c.phi) ||
                    (c.spam_prep && !c.spam_prep->is_trace_preserving()) ||
                    (c.spam_meas && !c.spam_meas->is_trace_preserving());
  const size_t outcomes = effects.size() + (loss ? 1 : 0);

  std::vector<std::discrete_distribution<int>> step_dists;
  for (const auto& nu : c.schedule.cycle) step_dists.emplace_back(nu.begin(), nu.end());

  struct ItemResult {
    int g_end = 0;
    std::vector<long long> counts;
  };
  const size_t per_length = static_cast<size_t>(c.sequences);
  const size_t items = c.lengths.size() * per_length;
  std::vector<ItemResult> results(items);

  auto work = [&](size_t item) {
    const size_t li = item / per_length;
    const size_t si = item % per_length;
    std::mt19937_64 rng(stream_seed(c.seed, li, si));
    auto dists = step_dists;
    const int m = c.lengths[li];
    std::vector<int> gates(static_cast<size_t>(m));
    int prod = group.identity();
    for (int i = 1; i <= m; ++i) {
      const int g = dists[static_cast<size_t>(i - 1) % dists.size()](rng);
      gates[static_cast<size_t>(i - 1)] = g;
      prod = group.mul(g, prod);
    }
    int g_end = c.g_end;
    if (c.randomize_end) g_end = std::uniform_int_distribution<int>(0, order - 1)(rng);
    const int g_final = group.mul(g_end, group.inv(prod));

    RVec v = state;
    RVec w(n);
    auto step = [&](int g) {
      const RMat& t = transfer[static_cast<size_t>(g)];
      kernels::real_matvec(std::span<const double>(t.data(), static_cast<size_t>(t.size())),
                           std::span<const double>(v.data(), static_cast<size_t>(n)),
                           std::span<double>(w.data(), static_cast<size_t>(n)));
      v.swap(w);
    };
    for (int g : gates) step(g);
    step(g_final);

    std::vector<double> p(outcomes);
    double total = 0.0;
    for (size_t i = 0; i < effects.size(); ++i) {
      p[i] = clip_probability(effects[i].dot(v));
      total += p[i];
    }
    if (loss) p.back() = std::max(0.0, 1.0 - total);

    ItemResult r;
    r.g_end = g_end;
    r.counts.assign(outcomes, 0);
    long long remaining = c.shots;
    double remaining_mass = 1.0;
    for (size_t i = 0; i < outcomes && remaining > 0; ++i) {
      const double q = remaining_mass > 0.0 ? std::clamp(p[i] / remaining_mass, 0.0, 1.0) : 0.0;
      const long long k = i + 1 == outcomes ? remaining : std::binomial_distribution<long long>(remaining, q)(rng);
      r.counts[i] = k;
      remaining -= k;
      remaining_mass -= p[i];
    }
    results[item] = std::move(r);
  };

  detail::parallel_for(items, threads, work);

  // Reduce in item order: (length index, g_end) -> counts.
  RBDataset ds;
  ds.seed = c.seed;
  ds.has_loss_outcome = loss;
  for (size_t li = 0; li < c.lengths.size(); ++li) {
    std::map<int, std::pair<std::vector<long long>, int>> per_end;
    for (size_t si = 0; si < per_length; ++si) {
      const auto& r = results[li * per_length + si];
      auto& slot = per_end[r.g_end];
      if (slot.first.empty()) slot.first.assign(outcomes, 0);
      for (size_t i = 0; i < outcomes; ++i) slot.first[i] += r.counts[i];
      slot.second += 1;
    }
    for (const auto& [g_end, slot] : per_end) {
      const long long shots = static_cast<long long>(slot.second) * c.shots;
      for (size_t i = 0; i < outcomes; ++i)
        ds.rows.push_back({static_cast<int>(i), c.lengths[li], g_end,
                           static_cast<double>(slot.first[i]) / static_cast<double>(shots), shots, slot.second});
    }
  }
  return ds;
}

ExactEngine::ExactEngine(const RBConfig& config, const IrrepCatalog& catalog) : config_(config), catalog_(catalog) {
  validate(config_);
  if (!catalog_.complete() || !catalog_.has_matrices())
    throw DomainError("ExactEngine: a complete irrep catalog with matrices is required");
  phi_blocks_ = fourier_transform(config_.phi, catalog_);
  for (const auto& nu : config_.schedule.cycle) step_blocks_.push_back(fourier_transform(weighted(config_.phi, nu), catalog_));
  state_ = to_coeffs(prep_channel(config_).apply(config_.rho0));
  const SuperOp meas_dual = meas_channel(config_).adjoint();
  for (const auto& e : config_.povm) effects_.push_back(to_coeffs(meas_dual.apply(e)));
}

SuperOp ExactEngine::sequence_average(int m, int g_end) const {
  std::vector<FourierBlock> prod = phi_blocks_;
  for (size_t k = 0; k < prod.size(); ++k)
    for (int i = m; i >= 1; --i)
      prod[k].mat = prod[k].mat * step_blocks_[static_cast<size_t>(i - 1) % step_blocks_.size()][k].mat;
  return inverse_fourier(prod, catalog_, g_end);
}

double ExactEngine::probability(int povm_index, int m, int g_end) const {
  if (povm_index < 0 || povm_index >= static_cast<int>(effects_.size()))
    throw DomainError("ExactEngine: POVM index out of range");
  const int n = config_.phi.dim() * config_.phi.dim();
  const int ginv = catalog_.group()->inv(g_end);
  const CVec& e = effects_[static_cast<size_t>(povm_index)];
  cplx total = 0.0;
  for (size_t k = 0; k < catalog_.size(); ++k) {
    const auto& ir = catalog_[k];
    const int dl = ir.dim;
    const CMat& s = ir.matrices[static_cast<size_t>(ginv)];
    // Columns e_c (x) rho pushed through F(phi_nu_1), ..., F(phi_nu_m), F(phi).
    CMat w = CMat::Zero(static_cast<Eigen::Index>(dl) * n, dl);
    for (int c = 0; c < dl; ++c) w.col(c).segment(c * n, n) = state_;
    for (int i = 1; i <= m; ++i) w = step_blocks_[static_cast<size_t>(i - 1) % step_blocks_.size()][k].mat * w;
    w = phi_blocks_[k].mat * w;
    cplx acc = 0.0;
    for (int a = 0; a < dl; ++a)
      for (int c = 0; c < dl; ++c) acc += e.dot(w.col(c).segment(a * n, n)) * std::conj(s(c, a));
    total += static_cast<double>(dl) * acc;
  }
  return total.real();
}

double exact_probability(const RBConfig& config, const IrrepCatalog& catalog, int povm_index, int m) {
  return ExactEngine(config, catalog).probability(povm_index, m);
}

CMat basis_state(int d, int k) {
  CMat r = CMat::Zero(d, d);
  r(k, k) = 1.0;
  return r;
}

std::vector<CMat> computational_povm(int d) {
  std::vector<CMat> out;
  for (int k = 0; k < d; ++k) out.push_back(basis_state(d, k));
  return out;
}

std::vector<CMat> survival_povm(int d) {
  return {basis_state(d, 0), CMat::Identity(d, d) - basis_state(d, 0)};
}

}  // namespace rblab
