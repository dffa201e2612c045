#include "rblab/irreps.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include <fmt/format.h>

namespace rblab {

IrrepCatalog::IrrepCatalog(GroupPtr group, std::vector<Irrep> irreps)
    : group_(std::move(group)), irreps_(std::move(irreps)) {
  for (const auto& ir : irreps_)
    if (static_cast<int>(ir.character.size()) != group_->order())
      throw DomainError("IrrepCatalog: character length must equal the group order");
}

size_t IrrepCatalog::index_of(const std::string& label) const {
  for (size_t k = 0; k < irreps_.size(); ++k)
    if (irreps_[k].label == label) return k;
  throw DomainError(fmt::format("IrrepCatalog: no irrep labelled '{}'", label));
}

bool IrrepCatalog::complete() const {
  int s = 0;
  for (const auto& ir : irreps_) s += ir.dim * ir.dim;
  return s == group_->order();
}

bool IrrepCatalog::has_matrices() const {
  return std::all_of(irreps_.begin(), irreps_.end(), [](const Irrep& ir) { return !ir.matrices.empty(); });
}

cplx character_inner(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx s = 0.0;
  for (size_t g = 0; g < a.size(); ++g) s += std::conj(a[g]) * b[g];
  return s / static_cast<double>(a.size());
}

namespace {

// Eigenvalue clusters of a Hermitian matrix: consecutive sorted eigenvalues
// closer than tol share a cluster.
std::vector<std::vector<Eigen::Index>> clusters(const RVec& evals, double tol) {
  std::vector<std::vector<Eigen::Index>> out;
  for (Eigen::Index k = 0; k < evals.size(); ++k) {
    if (out.empty() || evals(k) - evals(out.back().back()) > tol) out.emplace_back();
    out.back().push_back(k);
  }
  return out;
}

// Isotypic/irreducible subspaces of rep from a random commutant element.
std::vector<CMat> commutant_subspaces(const GroupPtr& group, const std::function<CMat(int)>& rep, int dim,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const CMat g0 = ginibre(dim, dim, rng);
  const CMat a = g0 + g0.adjoint();
  CMat c = CMat::Zero(dim, dim);
  for (int g = 0; g < group->order(); ++g) {
    const CMat r = rep(g);
    c += r * a * r.adjoint();
  }
  c /= static_cast<double>(group->order());
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (c + c.adjoint()));
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  std::vector<CMat> out;
  for (const auto& cl : clusters(es.eigenvalues(), 1e-8 * scale)) {
    CMat v(dim, static_cast<Eigen::Index>(cl.size()));
    for (size_t j = 0; j < cl.size(); ++j) v.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(cl[j]);
    out.push_back(std::move(v));
  }
  return out;
}

bool invariant(const GroupPtr& group, const std::function<CMat(int)>& rep, const CMat& v) {
  const CMat proj = CMat::Identity(v.rows(), v.rows()) - v * v.adjoint();
  for (int g = 0; g < group->order(); ++g)
    if ((proj * rep(g) * v).norm() > 1e-8) return false;
  return true;
}

}  // namespace

IrrepCatalog decompose_regular(const GroupPtr& group, std::uint64_t seed) {
  if (!group->has_cayley()) throw DomainError("decompose_regular: group needs a Cayley table");
  const int n = group->order();
  // R(g) e_h = e_{gh}.
  std::vector<CMat> regular(static_cast<size_t>(n));
  for (int g = 0; g < n; ++g) {
    CMat r = CMat::Zero(n, n);
    for (int h = 0; h < n; ++h) r(group->mul(g, h), h) = 1.0;
    regular[static_cast<size_t>(g)] = std::move(r);
  }
  const std::function<CMat(int)> rep = [&](int g) { return regular[static_cast<size_t>(g)]; };

  for (int attempt = 0; attempt < 8; ++attempt) {
    const auto subspaces = commutant_subspaces(group, rep, n, seed + static_cast<std::uint64_t>(attempt));
    std::vector<Irrep> irreps;
    bool ok = true;
    for (const auto& v : subspaces) {
      if (!invariant(group, rep, v)) {
        ok = false;
        break;
      }
      Irrep ir;
      ir.dim = static_cast<int>(v.cols());
      for (int g = 0; g < n; ++g) {
        CMat s = v.adjoint() * regular[static_cast<size_t>(g)] * v;
        ir.character.push_back(s.trace());
        ir.matrices.push_back(std::move(s));
      }
      const bool duplicate = std::any_of(irreps.begin(), irreps.end(), [&](const Irrep& other) {
        return std::abs(character_inner(other.character, ir.character)) > 0.5;
      });
      if (!duplicate) irreps.push_back(std::move(ir));
    }
    if (!ok) continue;
    // Put the trivial irrep first, then order by dimension for stable output.
    std::stable_sort(irreps.begin(), irreps.end(), [](const Irrep& a, const Irrep& b) { return a.dim < b.dim; });
    const auto triv = std::find_if(irreps.begin(), irreps.end(), [&](const Irrep& ir) {
      return ir.dim == 1 && std::all_of(ir.character.begin(), ir.character.end(),
                                        [](cplx c) { return std::abs(c - 1.0) < 1e-8; });
    });
    if (triv != irreps.end()) std::rotate(irreps.begin(), triv, triv + 1);
    for (size_t k = 0; k < irreps.size(); ++k) irreps[k].label = k == 0 ? "trivial" : fmt::format("irrep{}", k);
    IrrepCatalog cat(group, std::move(irreps));
    if (cat.complete()) return cat;
  }
  throw NumericError("decompose_regular: could not isolate irreducible subspaces");
}

IrrepCatalog pauli_catalog(const GroupBundle& pauli) {
  const auto& group = pauli.group;
  IrrepCatalog raw = decompose_regular(group);
  int q = 0;
  while ((1 << (2 * q)) < group->order()) ++q;
  std::vector<Irrep> irreps = raw.irreps();
  // The axis-Q irrep has chi(P) = +1 if P commutes with Q, -1 otherwise.
  for (auto& ir : irreps) {
    for (int axis = 0; axis < group->order(); ++axis) {
      const CMat qm = group->unitary(axis);
      bool match = true;
      for (int g = 0; g < group->order() && match; ++g) {
        const CMat p = group->unitary(g);
        const double sign = (p * qm - qm * p).norm() < 1e-9 ? 1.0 : -1.0;
        match = std::abs(ir.character[static_cast<size_t>(g)] - sign) < 1e-8;
      }
      if (match) {
        ir.label = axis == 0 ? "trivial" : "pauli:" + pauli_label(axis, q);
        break;
      }
    }
  }
  std::sort(irreps.begin(), irreps.end(), [&](const Irrep& a, const Irrep& b) {
    auto key = [](const std::string& l) { return l == "trivial" ? std::string() : l; };
    return key(a.label) < key(b.label);
  });
  return IrrepCatalog(group, std::move(irreps));
}

IrrepCatalog clifford_1q_catalog(const GroupBundle& clifford) {
  const auto& group = clifford.group;
  IrrepCatalog raw = decompose_regular(group);
  std::vector<Irrep> irreps = raw.irreps();
  std::vector<cplx> adjoint_char;
  for (int g = 0; g < group->order(); ++g) adjoint_char.push_back(clifford.omega.character(g) - 1.0);
  for (auto& ir : irreps) {
    if (ir.label == "trivial") continue;
    if (ir.dim == 1) ir.label = "sign";
    else if (ir.dim == 2) ir.label = "E";
    else if (std::abs(character_inner(ir.character, adjoint_char) - 1.0) < 1e-8) ir.label = "adjoint";
    else ir.label = "adjoint_sign";
  }
  return IrrepCatalog(group, std::move(irreps));
}

IrrepCatalog multiplicity_free_catalog(const Representation& rep, std::uint64_t seed) {
  const auto& group = rep.group();
  const std::function<CMat(int)> r = [&](int g) { return rep(g); };
  const auto subspaces = commutant_subspaces(group, r, rep.dim(), seed);
  std::vector<Irrep> irreps;
  for (const auto& v : subspaces) {
    if (!invariant(group, r, v)) throw NumericError("multiplicity_free_catalog: subspace not invariant");
    Irrep ir;
    ir.dim = static_cast<int>(v.cols());
    const CMat p = v * v.adjoint();
    for (int g = 0; g < group->order(); ++g) ir.character.push_back((p * rep(g)).trace());
    irreps.push_back(std::move(ir));
  }
  std::stable_sort(irreps.begin(), irreps.end(), [](const Irrep& a, const Irrep& b) { return a.dim < b.dim; });
  auto is_trivial = [](const Irrep& ir) {
    return ir.dim == 1 && std::all_of(ir.character.begin(), ir.character.end(),
                                      [](cplx c) { return std::abs(c - 1.0) < 1e-8; });
  };
  for (size_t k = 0; k < irreps.size(); ++k)
    irreps[k].label = is_trivial(irreps[k]) ? "trivial" : fmt::format("sector{}", k);
  for (size_t a = 0; a < irreps.size(); ++a)
    for (size_t b = a + 1; b < irreps.size(); ++b)
      if (std::abs(character_inner(irreps[a].character, irreps[b].character)) > 1e-6)
        throw DomainError("multiplicity_free_catalog: representation is not multiplicity free");
  return IrrepCatalog(group, std::move(irreps));
}

std::vector<IrrepSector> irrep_projectors(const Representation& rep, const IrrepCatalog& catalog) {
  const auto& group = rep.group();
  if (group.get() != catalog.group().get()) throw DomainError("irrep_projectors: group mismatch");
  const double order = group->order();
  std::vector<IrrepSector> out;
  for (size_t k = 0; k < catalog.size(); ++k) {
    const auto& ir = catalog[k];
    CMat p = CMat::Zero(rep.dim(), rep.dim());
    for (int g = 0; g < group->order(); ++g) p += std::conj(ir.character[static_cast<size_t>(g)]) * rep(g);
    p *= ir.dim / order;
    const double ratio = p.trace().real() / ir.dim;
    const double n = std::round(ratio);
    if (std::abs(ratio - n) > 1e-6)
      throw DomainError(fmt::format("irrep_projectors: rank/dimension ratio {} for '{}' is not an integer", ratio,
                                    ir.label));
    out.push_back({k, static_cast<int>(n), std::move(p)});
  }
  return out;
}

}  // namespace rblab
