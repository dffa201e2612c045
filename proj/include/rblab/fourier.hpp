#pragma once

#include <vector>

#include "rblab/irreps.hpp"
#include "rblab/superop.hpp"

namespace rblab {

// Group-indexed family of superoperators phi(g).
class ImplementationMap {
 public:
  ImplementationMap(GroupPtr group, std::vector<SuperOp> maps);
  // The ideal implementation omega.
  static ImplementationMap from_representation(const Representation& omega);

  const GroupPtr& group() const { return group_; }
  int dim() const { return maps_.front().dim(); }
  const SuperOp& operator()(int g) const { return maps_[static_cast<size_t>(g)]; }
  const std::vector<SuperOp>& maps() const { return maps_; }

  bool is_cp(double tol = 1e-9) const;
  // Every phi(g) satisfies phi(g)^dag(1) <= 1.
  bool is_trace_nonincreasing(double tol = 1e-9) const;

 private:
  GroupPtr group_;
  std::vector<SuperOp> maps_;
};

// phi_nu(g) = |G| nu(g) phi(g).
ImplementationMap weighted(const ImplementationMap& phi, const std::vector<double>& nu);

struct FourierBlock {
  size_t irrep = 0;
  int irrep_dim = 0;
  int dim = 0;  // Hilbert-space dimension d
  // |G|^-1 sum_g conj(sigma(g)) (x) phi(g); the irrep factor is outer.
  CMat mat;
};

FourierBlock fourier_block(const ImplementationMap& phi, const IrrepCatalog& catalog, size_t irrep);
// All blocks of the Fourier operator, one per irrep of the catalog.
std::vector<FourierBlock> fourier_transform(const ImplementationMap& phi, const IrrepCatalog& catalog);

// phi(g) = sum_lambda d_lambda Tr_V[F_lambda (conj(sigma_lambda(g^-1)) (x) 1)].
SuperOp inverse_fourier(const std::vector<FourierBlock>& blocks, const IrrepCatalog& catalog, int g);

// (phi * psi)(g) = |G|^-1 sum_h phi(g h^-1) psi(h).
ImplementationMap convolve(const ImplementationMap& phi, const ImplementationMap& psi);

// | |G|^-1 sum_g Tr(phi(g)^dag psi(g)) - sum_lambda d_lambda Tr(F_phi^dag F_psi) |.
double parseval_check(const ImplementationMap& phi, const ImplementationMap& psi, const IrrepCatalog& catalog);

struct FourierNorms {
  double max_norm = 0.0;  // max_g ||phi(g)||_diamond
  double m_norm = 0.0;    // |G|^-1 sum_g ||phi(g)||_diamond
};
FourierNorms fourier_norms(const ImplementationMap& phi);

// Tr_V of a (d_V n) x (d_V n) matrix whose outer factor is V.
CMat trace_irrep_factor(const CMat& m, int irrep_dim, int n);

ImplementationMap operator-(const ImplementationMap& a, const ImplementationMap& b);

}  // namespace rblab
