#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rblab/superop.hpp"

namespace rblab {

// Finite group realized by projective unitaries (one canonical-phase
// representative per element). Multiplication uses a Cayley table when one
// was built and falls back to product-and-lookup otherwise.
class FiniteGroup {
 public:
  // elements must be closed under multiplication up to phase.
  FiniteGroup(std::string name, std::vector<CMat> elements, std::vector<std::string> element_names,
              bool build_cayley);

  const std::string& name() const { return name_; }
  int order() const { return static_cast<int>(elements_.size()); }
  int identity() const { return identity_; }
  int hilbert_dim() const { return static_cast<int>(elements_.front().rows()); }
  int mul(int g, int h) const;
  int inv(int g) const { return inverse_[static_cast<size_t>(g)]; }
  bool has_cayley() const { return !cayley_.empty(); }
  const CMat& unitary(int g) const { return elements_[static_cast<size_t>(g)]; }
  const std::string& element_name(int g) const { return names_[static_cast<size_t>(g)]; }
  // Index of the element equal to u up to phase, if present.
  std::optional<int> find(const CMat& u) const;

 private:
  std::string name_;
  std::vector<CMat> elements_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  std::vector<int> cayley_;
  std::vector<int> inverse_;
  int identity_ = 0;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

// Group homomorphism g -> rep(g) into square matrices.
class Representation {
 public:
  Representation(GroupPtr group, std::vector<CMat> matrices, bool is_adjoint);

  const GroupPtr& group() const { return group_; }
  int dim() const { return static_cast<int>(matrices_.front().rows()); }
  const CMat& operator()(int g) const { return matrices_[static_cast<size_t>(g)]; }
  bool is_adjoint() const { return adjoint_; }
  cplx character(int g) const { return matrices_[static_cast<size_t>(g)].trace(); }

 private:
  GroupPtr group_;
  std::vector<CMat> matrices_;
  bool adjoint_;
};

// omega(g)(rho) = U_g rho U_g^dag in the operator basis (d^2 x d^2).
Representation adjoint_representation(const GroupPtr& group);

struct GroupBundle {
  GroupPtr group;
  Representation omega;
};

// Projective q-qubit Pauli group, 4^q elements in Pauli-index order, q in 1..3.
GroupBundle build_pauli_group(int q);
// Projective single-qubit Clifford group, 24 elements, generated by H and S.
GroupBundle build_clifford_1q();
// Projective two-qubit Clifford group, 11520 elements, no Cayley table.
// Throws DomainError when the build disables it.
GroupBundle build_clifford_2q();
// Closure of a generator set under multiplication (breadth first).
GroupPtr generate_group(std::string name, const std::vector<CMat>& generators,
                        const std::vector<std::string>& generator_names, bool build_cayley);

std::string pauli_label(int index, int qubits);  // e.g. 6, 2 -> "XY"

}  // namespace rblab
