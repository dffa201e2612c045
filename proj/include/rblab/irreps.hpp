#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rblab/groups.hpp"

namespace rblab {

struct Irrep {
  std::string label;
  int dim = 0;
  std::vector<cplx> character;
  // sigma(g) for every g; empty when only the character is known.
  std::vector<CMat> matrices;
};

// Complete set of inequivalent irreps of a group (sum of d^2 equals |G|), or
// a partial set carrying characters only.
class IrrepCatalog {
 public:
  IrrepCatalog(GroupPtr group, std::vector<Irrep> irreps);

  const GroupPtr& group() const { return group_; }
  const std::vector<Irrep>& irreps() const { return irreps_; }
  size_t size() const { return irreps_.size(); }
  const Irrep& operator[](size_t k) const { return irreps_[k]; }
  // Index of the irrep with this label; throws DomainError if absent.
  size_t index_of(const std::string& label) const;
  bool complete() const;
  bool has_matrices() const;

 private:
  GroupPtr group_;
  std::vector<Irrep> irreps_;
};

// Decomposes the regular representation with a random element of its
// commutant; each eigenspace is one irreducible subspace. Labels default to
// "irrep<k>" and are assigned by the group-specific catalog builders below.
IrrepCatalog decompose_regular(const GroupPtr& group, std::uint64_t seed = 7);

// Labels: "trivial" and "pauli:<string>" (the axis whose conjugation sign the
// character reproduces).
IrrepCatalog pauli_catalog(const GroupBundle& pauli);
// Labels: "trivial", "sign", "E", "adjoint" (the 3-dim irrep of the Bloch
// rotation), "adjoint_sign".
IrrepCatalog clifford_1q_catalog(const GroupBundle& clifford);
// For a multiplicity-free representation whose group is too large for the
// regular decomposition: isotypic components of rep from its commutant,
// characters chi(g) = Tr[P omega(g)] / dim. Labels "trivial", then "sector<k>".
IrrepCatalog multiplicity_free_catalog(const Representation& rep, std::uint64_t seed = 7);

struct IrrepSector {
  size_t irrep = 0;     // index into the catalog
  int multiplicity = 0; // n_lambda
  CMat projector;       // P_lambda on the representation space
};

// P_lambda = (d_lambda/|G|) sum_g conj(chi(g)) rep(g) for every irrep.
// Throws DomainError when Tr P / d_lambda is not an integer.
std::vector<IrrepSector> irrep_projectors(const Representation& rep, const IrrepCatalog& catalog);

// <chi_a, chi_b> = |G|^-1 sum_g conj(chi_a(g)) chi_b(g).
cplx character_inner(const std::vector<cplx>& a, const std::vector<cplx>& b);

}  // namespace rblab
