#include "rblab/decay.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "rblab/diamond.hpp"

namespace rblab {

DiamondDistance mean_diamond_distance(const ImplementationMap& phi, const ImplementationMap& omega) {
  if (phi.group().get() != omega.group().get()) throw DomainError("mean_diamond_distance: group mismatch");
  DiamondDistance out;
  for (int g = 0; g < phi.group()->order(); ++g) {
    double v = 0.0;
    try {
      v = diamond_norm(omega(g) - phi(g));
    } catch (const NumericError& e) {
      throw NumericError(fmt::format("element {} ({}): {}", g, phi.group()->element_name(g), e.what()));
    }
    out.per_element.push_back(v);
  }
  out.delta = std::accumulate(out.per_element.begin(), out.per_element.end(), 0.0) /
              static_cast<double>(out.per_element.size());
  out.within_hypothesis = out.delta <= 1.0 / 9.0;
  return out;
}

double weighted_distance(const DiamondDistance& dist, const Distribution& nu) {
  if (nu.size() != dist.per_element.size()) throw DomainError("weighted_distance: length mismatch");
  double s = 0.0;
  for (size_t g = 0; g < nu.size(); ++g) s += nu[g] * dist.per_element[g];
  return s;
}

double uniform_bound(double delta, int m) {
  if (delta >= 0.2) return std::numeric_limits<double>::infinity();
  return 8.0 * std::pow(delta * (1.0 + 2.0 * delta / (1.0 - 5.0 * delta)), m);
}

DominantBlock dominant_subspace(const CMat& block, int count) {
  const auto n = block.rows();
  if (count < 0 || count > n) throw DomainError("dominant_subspace: invalid subspace size");
  Eigen::ComplexEigenSolver<CMat> es(block);
  if (es.info() != Eigen::Success) throw NumericError("dominant_subspace: eigendecomposition failed");
  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const CVec& ev = es.eigenvalues();
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const cplx za = ev(a), zb = ev(b);
    if (std::abs(za) != std::abs(zb)) return std::abs(za) > std::abs(zb);
    if (za.real() != zb.real()) return za.real() > zb.real();
    return za.imag() > zb.imag();
  });
  if (count > 0 && count < n &&
      std::abs(ev(order[static_cast<size_t>(count - 1)])) - std::abs(ev(order[static_cast<size_t>(count)])) <= 1e-10)
    throw DomainError(fmt::format("dominant_subspace: eigenvalue moduli {} and {} are tied within 1e-10",
                                  std::abs(ev(order[static_cast<size_t>(count - 1)])),
                                  std::abs(ev(order[static_cast<size_t>(count)]))));
  CMat v(n, n);
  CVec sorted(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    v.col(k) = es.eigenvectors().col(order[static_cast<size_t>(k)]);
    sorted(k) = ev(order[static_cast<size_t>(k)]);
  }
  Eigen::PartialPivLU<CMat> lu(v);
  const CMat vinv = lu.inverse();
  DominantBlock out;
  out.multiplicity = count;
  out.eigenvalues = sorted.head(count);
  out.subdominant = sorted.tail(n - count);
  out.r1 = v.leftCols(count);
  out.l1 = vinv.topRows(count).adjoint();
  out.m = out.l1.adjoint() * block * out.r1;
  return out;
}

std::vector<DominantBlock> dominant_decays(const std::vector<FourierBlock>& blocks,
                                           const std::vector<IrrepSector>& sectors) {
  std::vector<DominantBlock> out;
  for (const auto& b : blocks) {
    const auto it = std::find_if(sectors.begin(), sectors.end(), [&](const IrrepSector& s) { return s.irrep == b.irrep; });
    if (it == sectors.end()) throw DomainError("dominant_decays: irrep missing from the sector list");
    DominantBlock d = dominant_subspace(b.mat, it->multiplicity);
    d.irrep = b.irrep;
    out.push_back(std::move(d));
  }
  return out;
}

DecayAnalysis::DecayAnalysis(const ExactEngine& engine, const Representation& omega, int offset)
    : engine_(engine), offset_(offset) {
  if (engine_.step_blocks().size() != 1) throw DomainError("DecayAnalysis: a single sampling distribution is required");
  if (offset < 0) throw DomainError("DecayAnalysis: negative offset");
  const auto& catalog = engine_.catalog();
  const auto sectors = irrep_projectors(omega, catalog);
  const auto& steps = engine_.step_blocks().front();
  blocks_ = dominant_decays(steps, sectors);

  const int n = engine_.config().phi.dim() * engine_.config().phi.dim();
  const int ginv = catalog.group()->inv(engine_.config().g_end);
  const size_t outcomes = engine_.config().povm.size();
  spam_.assign(outcomes, {});
  for (size_t k = 0; k < catalog.size(); ++k) {
    const auto& ir = catalog[k];
    const int dl = ir.dim;
    const auto& blk = blocks_[k];
    deflated_.push_back(steps[k].mat - blk.r1 * blk.m * blk.l1.adjoint());
    prefix_.push_back(engine_.phi_blocks()[k].mat);
    CMat u = CMat::Zero(static_cast<Eigen::Index>(dl) * n, dl);
    for (int c = 0; c < dl; ++c) u.col(c).segment(c * n, n) = engine_.state();
    for (int i = 0; i < offset_; ++i) u = steps[k].mat * u;
    // Seeds live in the complement of the dominant subspace so that m == offset is covered too.
    seeds_.push_back(u - blk.r1 * (blk.l1.adjoint() * u));

    const CMat& s = ir.matrices[static_cast<size_t>(ginv)];
    const CMat y = prefix_.back() * blk.r1;  // (dl n) x n_lambda
    const CMat t = blk.l1.adjoint() * u;      // n_lambda x dl
    for (size_t i = 0; i < outcomes; ++i) {
      const CVec& e = engine_.effect(static_cast<int>(i));
      CMat a = CMat::Zero(blk.multiplicity, blk.multiplicity);
      for (int aa = 0; aa < dl; ++aa) {
        const Eigen::RowVectorXcd eps = e.adjoint() * y.middleRows(aa * n, n);
        for (int c = 0; c < dl; ++c) a += std::conj(s(c, aa)) * t.col(c) * eps;
      }
      spam_[i].push_back(static_cast<double>(dl) * a);
    }
  }
}

double DecayAnalysis::model(int povm_index, int m) const {
  if (m < offset_) throw DomainError("DecayAnalysis: length below the model offset");
  cplx total = 0.0;
  for (size_t k = 0; k < blocks_.size(); ++k) {
    const auto& blk = blocks_[k];
    if (blk.multiplicity == 0) continue;
    CMat power = CMat::Identity(blk.multiplicity, blk.multiplicity);
    for (int i = 0; i < m - offset_; ++i) power = power * blk.m;
    total += (spam_[static_cast<size_t>(povm_index)][k] * power).trace();
  }
  return total.real();
}

double DecayAnalysis::residual(int povm_index, int m) const {
  if (m < offset_) throw DomainError("DecayAnalysis: length below the model offset");
  const auto& catalog = engine_.catalog();
  const int n = engine_.config().phi.dim() * engine_.config().phi.dim();
  const int ginv = catalog.group()->inv(engine_.config().g_end);
  const CVec& e = engine_.effect(povm_index);
  cplx total = 0.0;
  for (size_t k = 0; k < catalog.size(); ++k) {
    const auto& ir = catalog[k];
    const CMat& s = ir.matrices[static_cast<size_t>(ginv)];
    CMat w = seeds_[k];
    for (int i = 0; i < m - offset_; ++i) w = deflated_[k] * w;
    w = prefix_[k] * w;
    cplx acc = 0.0;
    for (int a = 0; a < ir.dim; ++a)
      for (int c = 0; c < ir.dim; ++c) acc += e.dot(w.col(c).segment(a * n, n)) * std::conj(s(c, a));
    total += static_cast<double>(ir.dim) * acc;
  }
  return total.real();
}

namespace {

BoundReport run_bound(const DecayAnalysis& analysis, const ExactEngine& engine, int povm_index, double bound_delta,
                      bool constant_bound) {
  BoundReport rep;
  rep.pass = true;
  for (int m : engine.config().lengths) {
    if (m < analysis.offset()) continue;
    BoundRow row;
    row.m = m;
    row.p_exact = analysis.exact(povm_index, m);
    row.p_model = analysis.model(povm_index, m);
    const double r = analysis.residual(povm_index, m);
    row.residual = std::abs(r);
    row.bound = constant_bound ? 4.0 * bound_delta : uniform_bound(bound_delta, m);
    row.pass = row.residual <= row.bound;
    rep.pass = rep.pass && row.pass;
    rep.consistency = std::max(rep.consistency, std::abs(row.p_exact - row.p_model - r));
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace

BoundReport verify_uniform_bound(const ExactEngine& engine, const Representation& omega, const DiamondDistance& dist,
                                 int povm_index) {
  const auto& nu = engine.config().schedule.cycle.front();
  if (engine.config().schedule.cycle.size() != 1 || l1_to_uniform(nu) > 1e-12)
    throw DomainError("verify_uniform_bound: uniform sampling required");
  DecayAnalysis analysis(engine, omega);
  BoundReport rep = run_bound(analysis, engine, povm_index, dist.delta, false);
  rep.kind = "uniform";
  rep.delta = dist.delta;
  rep.hypothesis_ok = dist.delta <= 1.0 / 9.0;
  return rep;
}

BoundReport verify_nonuniform_bound(const ExactEngine& engine, const Representation& omega,
                                    const DiamondDistance& dist, int povm_index) {
  if (engine.config().schedule.cycle.size() != 1) throw DomainError("verify_nonuniform_bound: single distribution required");
  const auto& nu = engine.config().schedule.cycle.front();
  DecayAnalysis analysis(engine, omega);
  const double dp = l1_to_uniform(nu);
  BoundReport rep = run_bound(analysis, engine, povm_index, dist.delta + dp, false);
  rep.kind = "nonuniform";
  rep.delta = dist.delta;
  rep.delta_prime = dp;
  rep.hypothesis_ok = dist.delta + dp <= 1.0 / 9.0;
  return rep;
}

BoundReport verify_subset_bound(const ExactEngine& engine, const Representation& omega, const DiamondDistance& dist,
                                int mix, int povm_index) {
  if (engine.config().schedule.cycle.size() != 1) throw DomainError("verify_subset_bound: single distribution required");
  if (mix < 1) throw DomainError("verify_subset_bound: m_mix must be at least 1");
  const auto& nu = engine.config().schedule.cycle.front();
  const auto& group = *engine.config().phi.group();
  const double delta = mix * weighted_distance(dist, nu);
  const double dp = l1_to_uniform(convolve_power(nu, mix, group));
  DecayAnalysis analysis(engine, omega, mix);
  BoundReport rep = run_bound(analysis, engine, povm_index, delta + dp, true);
  rep.kind = "subset";
  rep.delta = delta;
  rep.delta_prime = dp;
  rep.m_mix = mix;
  rep.hypothesis_ok = delta + dp <= 1.0 / 9.0;
  return rep;
}

Distribution convolve_dist(const Distribution& nu, const Distribution& mu, const FiniteGroup& group) {
  const int order = group.order();
  if (static_cast<int>(nu.size()) != order || static_cast<int>(mu.size()) != order)
    throw DomainError("convolve_dist: length mismatch");
  Distribution out(static_cast<size_t>(order), 0.0);
  // (nu * mu)(g) = sum_h nu(g h^-1) mu(h): draw h from mu, then k from nu, product k h.
  for (int h = 0; h < order; ++h) {
    if (mu[static_cast<size_t>(h)] == 0.0) continue;
    for (int k = 0; k < order; ++k)
      out[static_cast<size_t>(group.mul(k, h))] += nu[static_cast<size_t>(k)] * mu[static_cast<size_t>(h)];
  }
  return out;
}

Distribution convolve_power(const Distribution& nu, int k, const FiniteGroup& group) {
  if (k < 0) throw DomainError("convolve_power: negative power");
  Distribution out = peaked(group.order(), group.identity());
  for (int i = 0; i < k; ++i) out = convolve_dist(nu, out, group);
  return out;
}

int m_mix(const Distribution& nu, double delta_prime, const FiniteGroup& group) {
  validate_distribution(nu, group.order());
  if (l1_to_uniform(nu) <= delta_prime) return 0;
  // Subgroup generated by the support.
  std::vector<int> support;
  for (int g = 0; g < group.order(); ++g)
    if (nu[static_cast<size_t>(g)] > 0.0) support.push_back(g);
  std::vector<char> seen(static_cast<size_t>(group.order()), 0);
  std::deque<int> queue{group.identity()};
  seen[static_cast<size_t>(group.identity())] = 1;
  int reached = 1;
  while (!queue.empty()) {
    const int cur = queue.front();
    queue.pop_front();
    for (int s : support) {
      const int next = group.mul(s, cur);
      if (!seen[static_cast<size_t>(next)]) {
        seen[static_cast<size_t>(next)] = 1;
        ++reached;
        queue.push_back(next);
      }
    }
  }
  if (reached < group.order())
    throw DomainError(fmt::format("m_mix: support generates a proper subgroup of order {} (group order {}); the walk "
                                  "never mixes",
                                  reached, group.order()));
  constexpr int kMaxSteps = 10000;
  Distribution cur = nu;
  for (int k = 1; k <= kMaxSteps; ++k) {
    if (l1_to_uniform(cur) <= delta_prime) return k;
    cur = convolve_dist(nu, cur, group);
  }
  throw DomainError(fmt::format("m_mix: no mixing after {} steps; the walk is periodic (support lies in a coset of a "
                                "proper normal subgroup)",
                                kMaxSteps));
}

}  // namespace rblab
