#include "rblab/fourier.hpp"

#include <algorithm>

#include "rblab/diamond.hpp"
#include "rblab/kernels.hpp"

namespace rblab {

ImplementationMap::ImplementationMap(GroupPtr group, std::vector<SuperOp> maps)
    : group_(std::move(group)), maps_(std::move(maps)) {
  if (!group_ || static_cast<int>(maps_.size()) != group_->order())
    throw DomainError("ImplementationMap: one superoperator per group element required");
  for (const auto& m : maps_)
    if (m.dim() != maps_.front().dim()) throw DomainError("ImplementationMap: mixed dimensions");
}

ImplementationMap ImplementationMap::from_representation(const Representation& omega) {
  const int n = omega.dim();
  int d = 1;
  while (d * d < n) ++d;
  if (d * d != n) throw DomainError("from_representation: dimension is not a square");
  std::vector<SuperOp> maps;
  for (int g = 0; g < omega.group()->order(); ++g) maps.emplace_back(d, omega(g));
  return ImplementationMap(omega.group(), std::move(maps));
}

bool ImplementationMap::is_cp(double tol) const {
  return std::all_of(maps_.begin(), maps_.end(), [&](const SuperOp& m) { return rblab::is_cp(m, tol); });
}

bool ImplementationMap::is_trace_nonincreasing(double tol) const {
  return std::all_of(maps_.begin(), maps_.end(), [&](const SuperOp& m) {
    const int d = m.dim();
    const CMat dual_of_identity = m.adjoint().apply(CMat::Identity(d, d));
    const CMat h = 0.5 * (dual_of_identity + dual_of_identity.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(d - 1) <= 1.0 + tol;
  });
}

ImplementationMap weighted(const ImplementationMap& phi, const std::vector<double>& nu) {
  const auto order = static_cast<size_t>(phi.group()->order());
  if (nu.size() != order) throw DomainError("weighted: distribution length must equal the group order");
  std::vector<SuperOp> maps;
  for (size_t g = 0; g < order; ++g)
    maps.push_back(cplx(static_cast<double>(order) * nu[g]) * phi(static_cast<int>(g)));
  return ImplementationMap(phi.group(), std::move(maps));
}

FourierBlock fourier_block(const ImplementationMap& phi, const IrrepCatalog& catalog, size_t irrep) {
  if (phi.group().get() != catalog.group().get()) throw DomainError("fourier_block: group mismatch");
  const auto& ir = catalog[irrep];
  if (ir.matrices.empty()) throw DomainError("fourier_block: irrep matrices unavailable for '" + ir.label + "'");
  const int dl = ir.dim;
  const int n = phi.dim() * phi.dim();
  const Eigen::Index big = static_cast<Eigen::Index>(dl) * n;
  CMat f = CMat::Zero(big, big);
  for (int g = 0; g < phi.group()->order(); ++g) {
    const CMat& sigma = ir.matrices[static_cast<size_t>(g)];
    const CMat& pm = phi(g).mat();
    for (int b = 0; b < dl; ++b)
      for (int a = 0; a < dl; ++a) {
        const cplx w = std::conj(sigma(a, b));
        if (w == cplx(0.0)) continue;
        for (int c = 0; c < n; ++c) {
          cplx* dst = f.data() + (static_cast<Eigen::Index>(b) * n + c) * big + static_cast<Eigen::Index>(a) * n;
          kernels::complex_axpy(w, std::span<const cplx>(pm.data() + static_cast<Eigen::Index>(c) * n, n),
                                std::span<cplx>(dst, n));
        }
      }
  }
  f /= static_cast<double>(phi.group()->order());
  return {irrep, dl, phi.dim(), std::move(f)};
}

std::vector<FourierBlock> fourier_transform(const ImplementationMap& phi, const IrrepCatalog& catalog) {
  std::vector<FourierBlock> out;
  for (size_t k = 0; k < catalog.size(); ++k) out.push_back(fourier_block(phi, catalog, k));
  return out;
}

CMat trace_irrep_factor(const CMat& m, int irrep_dim, int n) {
  CMat out = CMat::Zero(n, n);
  for (int a = 0; a < irrep_dim; ++a) out += m.block(a * n, a * n, n, n);
  return out;
}

SuperOp inverse_fourier(const std::vector<FourierBlock>& blocks, const IrrepCatalog& catalog, int g) {
  if (blocks.empty()) throw DomainError("inverse_fourier: no blocks");
  const int d = blocks.front().dim;
  const int n = d * d;
  const int ginv = catalog.group()->inv(g);
  CMat acc = CMat::Zero(n, n);
  for (const auto& blk : blocks) {
    const auto& ir = catalog[blk.irrep];
    const CMat& s = ir.matrices[static_cast<size_t>(ginv)];
    // F (conj(s) (x) 1): block (a, b) = sum_c F(a, c) conj(s)(c, b); only the diagonal is traced.
    CMat tr = CMat::Zero(n, n);
    for (int a = 0; a < ir.dim; ++a)
      for (int c = 0; c < ir.dim; ++c) tr += blk.mat.block(a * n, c * n, n, n) * std::conj(s(c, a));
    acc += static_cast<double>(ir.dim) * tr;
  }
  return SuperOp(d, std::move(acc));
}

ImplementationMap convolve(const ImplementationMap& phi, const ImplementationMap& psi) {
  if (phi.group().get() != psi.group().get()) throw DomainError("convolve: group mismatch");
  const auto& group = *phi.group();
  const int order = group.order();
  const int d = phi.dim();
  std::vector<SuperOp> out;
  out.reserve(static_cast<size_t>(order));
  for (int g = 0; g < order; ++g) {
    CMat acc = CMat::Zero(d * d, d * d);
    for (int h = 0; h < order; ++h) acc.noalias() += phi(group.mul(g, group.inv(h))).mat() * psi(h).mat();
    out.emplace_back(d, acc / static_cast<double>(order));
  }
  return ImplementationMap(phi.group(), std::move(out));
}

double parseval_check(const ImplementationMap& phi, const ImplementationMap& psi, const IrrepCatalog& catalog) {
  const int order = phi.group()->order();
  cplx lhs = 0.0;
  for (int g = 0; g < order; ++g) lhs += (phi(g).mat().adjoint() * psi(g).mat()).trace();
  lhs /= static_cast<double>(order);
  cplx rhs = 0.0;
  for (size_t k = 0; k < catalog.size(); ++k) {
    const auto a = fourier_block(phi, catalog, k);
    const auto b = fourier_block(psi, catalog, k);
    rhs += static_cast<double>(catalog[k].dim) * (a.mat.adjoint() * b.mat).trace();
  }
  return std::abs(lhs - rhs);
}

FourierNorms fourier_norms(const ImplementationMap& phi) {
  FourierNorms out;
  for (const auto& m : phi.maps()) {
    const double v = diamond_norm(m);
    out.max_norm = std::max(out.max_norm, v);
    out.m_norm += v;
  }
  out.m_norm /= static_cast<double>(phi.group()->order());
  return out;
}

ImplementationMap operator-(const ImplementationMap& a, const ImplementationMap& b) {
  if (a.group().get() != b.group().get()) throw DomainError("ImplementationMap: group mismatch");
  std::vector<SuperOp> out;
  for (int g = 0; g < a.group()->order(); ++g) out.push_back(a(g) - b(g));
  return ImplementationMap(a.group(), std::move(out));
}

}  // namespace rblab
