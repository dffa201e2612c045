#include "rblab/filter.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include <fmt/format.h>

#include "parallel.hpp"

namespace rblab {

namespace {

constexpr double kBlindThreshold = 1e-12;

CMat sector_projector(const Representation& omega, const IrrepCatalog& catalog, size_t irrep) {
  for (auto& s : irrep_projectors(omega, catalog))
    if (s.irrep == irrep) {
      if (s.multiplicity == 0)
        throw DomainError(fmt::format("filter: irrep '{}' does not occur in the reference representation",
                                      catalog[irrep].label));
      return std::move(s.projector);
    }
  throw DomainError("filter: irrep not found");
}

// Operator form of the sector projector acting on a Hilbert-space operator.
CMat apply_projector(const CMat& projector, const CMat& op) {
  return from_coeffs(projector * to_coeffs(op), static_cast<int>(op.rows()));
}

bool is_uniform(const Distribution& nu) {
  const double u = 1.0 / static_cast<double>(nu.size());
  return std::all_of(nu.begin(), nu.end(), [u](double x) { return std::abs(x - u) <= 1e-12; });
}

}  // namespace

FilterSpec::FilterSpec(const Representation& omega, const IrrepCatalog& catalog, const std::string& label,
                       const CMat& rho0, const std::vector<CMat>& povm)
    : omega_(omega), label_(label) {
  if (catalog.group().get() != omega.group().get()) throw DomainError("filter: catalog and representation differ");
  if (povm.empty()) throw DomainError("filter: empty POVM");
  irrep_ = catalog.index_of(label);
  projector_ = sector_projector(omega, catalog, irrep_);
  rho0_ = to_coeffs(rho0);
  for (const auto& e : povm) effects_.push_back(to_coeffs(e));

  // N = sum_i conj(c_i)^T V conj(c_i) with V = |G|^-1 sum_g (P conj(omega_g) r)(omega_g r)^T.
  const auto n = rho0_.size();
  CMat v = CMat::Zero(n, n);
  const int order = omega.group()->order();
  for (int g = 0; g < order; ++g) {
    const CVec a = projector_ * (omega(g).conjugate() * rho0_);
    const CVec b = omega(g) * rho0_;
    v.noalias() += a * b.transpose();
  }
  v /= static_cast<double>(order);
  cplx total = 0.0;
  for (const auto& c : effects_) {
    const CVec cc = c.conjugate();
    total += (cc.transpose() * v * cc).value();
  }
  normalization_ = total;
  if (std::abs(normalization_) < kBlindThreshold)
    throw DomainError(fmt::format("filter: normalization |N| = {:.3e} for irrep '{}'; the filter is blind to it "
                                  "for this state and POVM",
                                  std::abs(normalization_), label_));
}

cplx FilterSpec::value(int g, int i) const {
  const CVec& c = effects_[static_cast<size_t>(i)];
  return c.dot(projector_ * (omega_(g).conjugate() * rho0_));
}

cplx normalization_double_sum(const FilterSpec& spec, const Representation& omega, const CMat& rho0,
                              const std::vector<CMat>& povm) {
  const int order = omega.group()->order();
  cplx total = 0.0;
  for (int g = 0; g < order; ++g) {
    const SuperOp w(omega.group()->hilbert_dim(), omega(g));
    const CMat out = w.apply(rho0);
    for (size_t i = 0; i < povm.size(); ++i)
      total += spec.value(g, static_cast<int>(i)) * (povm[i] * out).trace();
  }
  return total / static_cast<double>(order);
}

double threedesign_normalization(const CMat& projector, const CMat& rho0, int povm_size) {
  const auto d = static_cast<double>(rho0.rows());
  const CMat p = apply_projector(projector, rho0);
  return d / (povm_size * (d + 1.0)) * (p.trace().real() + (rho0 * p).trace().real());
}

double threedesign_normalization_printed(const CMat& projector, const CMat& rho0, int povm_size) {
  const auto d = static_cast<double>(rho0.rows());
  const CMat p = apply_projector(projector, rho0);
  return (d * d / (d * d - 1.0) * (rho0 * p).trace().real() + p.trace().real()) / povm_size;
}

cplx filtered_data(const ExactEngine& engine, const FilterSpec& spec, int m) {
  const auto& config = engine.config();
  if (static_cast<int>(config.povm.size()) != spec.outcomes())
    throw DomainError("filtered_data: POVM size of the filter and the experiment differ");
  const int order = config.phi.group()->order();
  cplx total = 0.0;
  for (int g = 0; g < order; ++g)
    for (int i = 0; i < spec.outcomes(); ++i) total += spec.value(g, i) * engine.probability(i, m, g);
  return total / (static_cast<double>(order) * spec.normalization());
}

cplx filtered_cross_data(const ExactEngine& engine, const FilterSpec& spec, const CMat& other_projector, int m) {
  const auto& config = engine.config();
  if (static_cast<int>(config.povm.size()) != spec.outcomes())
    throw DomainError("filtered_cross_data: POVM size of the filter and the experiment differ");
  const int order = config.phi.group()->order();
  cplx total = 0.0;
  for (int g = 0; g < order; ++g) {
    const CVec v = other_projector * (engine.sequence_average(m, g).mat() * engine.state());
    for (int i = 0; i < spec.outcomes(); ++i) total += spec.value(g, i) * engine.effect(i).dot(v);
  }
  return total / (static_cast<double>(order) * spec.normalization());
}

std::vector<double> filtered_samples(const RBConfig& config, const FilterSpec& spec, int m,
                                     const FilterSampling& opts) {
  validate(config);
  if (opts.samples < 1) throw DomainError("estimate_filtered: need at least one sample");
  if (m < 0) throw DomainError("estimate_filtered: m must be non-negative");
  if (static_cast<int>(config.povm.size()) != spec.outcomes())
    throw DomainError("estimate_filtered: POVM size of the filter and the experiment differ");
  for (const auto& nu : config.schedule.cycle)
    if (!is_uniform(nu)) throw DomainError("estimate_filtered: filtered RB requires uniform gate sampling");
  const auto& group = *config.phi.group();
  const int order = group.order();
  const cplx inv_norm = 1.0 / spec.normalization();
  const int threads = opts.threads > 0 ? opts.threads : thread_count_from_env();

  // Transfer matrices, the prepared state and the measured effects are fixed
  // for the whole run; each sample then costs m + 1 matvecs and one E v.
  const int n = config.phi.dim() * config.phi.dim();
  std::vector<RMat> transfer;
  transfer.reserve(static_cast<size_t>(order));
  for (const auto& map : config.phi.maps()) {
    if (!map.is_hermiticity_preserving(1e-9))
      throw DomainError("estimate_filtered: phi(g) must preserve Hermiticity");
    transfer.push_back(map.transfer_matrix());
  }
  const SuperOp prep = config.spam_prep ? *config.spam_prep : SuperOp::identity(config.phi.dim());
  const SuperOp meas_dual = (config.spam_meas ? *config.spam_meas : SuperOp::identity(config.phi.dim())).adjoint();
  const RVec state = to_coeffs(prep.apply(config.rho0)).real();
  RMat effects(spec.outcomes(), n);
  for (int i = 0; i < spec.outcomes(); ++i)
    effects.row(i) = to_coeffs(meas_dual.apply(config.povm[static_cast<size_t>(i)])).real().transpose();

  std::vector<double> values(static_cast<size_t>(opts.samples));
  detail::parallel_for(values.size(), threads, [&](size_t l) {
    std::mt19937_64 rng(stream_seed(opts.seed, static_cast<std::uint64_t>(m), l));
    std::uniform_int_distribution<int> pick(0, order - 1);
    std::vector<int> gates(static_cast<size_t>(m));
    int g_end = 0;
    int g_final = 0;
    int prod = group.identity();
    if (opts.explicit_inversion) {
      g_end = pick(rng);
      for (auto& g : gates) {
        g = pick(rng);
        prod = group.mul(g, prod);
      }
      g_final = group.mul(g_end, group.inv(prod));
    } else {
      for (auto& g : gates) {
        g = pick(rng);
        prod = group.mul(g, prod);
      }
      g_final = pick(rng);
      g_end = group.mul(g_final, prod);
    }
    RVec v = state;
    for (int g : gates) v = transfer[static_cast<size_t>(g)] * v;
    v = transfer[static_cast<size_t>(g_final)] * v;
    const RVec p = effects * v;
    // Inverse-CDF draw over the outcomes; the remaining mass is the loss outcome, which scores zero.
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double acc = 0.0;
    int outcome = spec.outcomes();
    for (int i = 0; i < spec.outcomes(); ++i) {
      acc += std::max(0.0, p(i));
      if (u < acc) {
        outcome = i;
        break;
      }
    }
    values[l] = outcome < spec.outcomes() ? (inv_norm * spec.value(g_end, outcome)).real() : 0.0;
  });
  return values;
}

FilterEstimate estimate_filtered(const RBConfig& config, const FilterSpec& spec, int m, const FilterSampling& opts) {
  const auto values = filtered_samples(config, spec, m, opts);
  FilterEstimate out;
  out.samples = static_cast<long long>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  out.k_hat = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - out.k_hat) * (v - out.k_hat);
  out.sample_variance = values.size() > 1 ? ss / static_cast<double>(values.size() - 1) : 0.0;
  out.std_error = std::sqrt(out.sample_variance / static_cast<double>(values.size()));
  return out;
}

CVec ThreeDesignPovm::state(int i) const {
  const int dim = 1 << qubits;
  return clifford.group->unitary(i / dim).col(i % dim);
}

ThreeDesignPovm threedesign_povm(int qubits) {
  if (qubits < 1 || qubits > 2) throw DomainError("threedesign_povm: supported for 1 or 2 qubits");
  ThreeDesignPovm out{qubits == 1 ? build_clifford_1q() : build_clifford_2q(), {}, qubits};
  const int dim = 1 << qubits;
  const int order = out.clifford.group->order();
  out.effects.reserve(static_cast<size_t>(order * dim));
  for (int c = 0; c < order; ++c)
    for (int x = 0; x < dim; ++x) {
      const CVec v = out.clifford.group->unitary(c).col(x);
      out.effects.push_back(v * v.adjoint() / static_cast<double>(order));
    }
  return out;
}

MomentCheck povm_moments(const ThreeDesignPovm& povm, long long draws, std::uint64_t seed) {
  if (draws < 1) throw DomainError("povm_moments: need at least one draw");
  const int dim = 1 << povm.qubits;
  // Distinct POVM states (as rank-one projectors) with their multiplicities.
  std::map<std::vector<long long>, std::pair<CVec, int>> unique;
  for (int i = 0; i < povm.size(); ++i) {
    const CVec v = povm.state(i);
    const CMat proj = v * v.adjoint();
    std::vector<long long> key;
    for (Eigen::Index k = 0; k < proj.size(); ++k) {
      key.push_back(std::llround(proj(k).real() * 1e6));
      key.push_back(std::llround(proj(k).imag() * 1e6));
    }
    auto [it, inserted] = unique.try_emplace(std::move(key), v, 0);
    ++it->second.second;
  }
  const double d = dim;
  MomentCheck out;
  out.second_haar = 2.0 / (d * (d + 1.0));
  out.third_haar = 6.0 / (d * (d + 1.0) * (d + 2.0));
  out.draws = draws;
  std::mt19937_64 rng(seed);
  const double inv_size = 1.0 / povm.size();
  for (long long t = 0; t < draws; ++t) {
    const CVec psi = haar_state(dim, rng);
    double m2 = 0.0, m3 = 0.0;
    for (const auto& [key, entry] : unique) {
      const double ov = std::norm(entry.first.dot(psi));
      m2 += entry.second * ov * ov;
      m3 += entry.second * ov * ov * ov;
    }
    m2 *= inv_size;
    m3 *= inv_size;
    out.second += m2;
    out.third += m3;
    out.max_dev_second = std::max(out.max_dev_second, std::abs(m2 - out.second_haar));
    out.max_dev_third = std::max(out.max_dev_third, std::abs(m3 - out.third_haar));
  }
  out.second /= static_cast<double>(draws);
  out.third /= static_cast<double>(draws);
  return out;
}

}  // namespace rblab
