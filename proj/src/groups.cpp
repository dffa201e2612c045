#include "rblab/groups.hpp"

#include <cmath>
#include <deque>

#include <fmt/format.h>

namespace rblab {

namespace {

constexpr int kMaxCayleyOrder = 4096;

std::string element_key(const CMat& u) {
  std::string key;
  key.reserve(static_cast<size_t>(u.size()) * 12);
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    const auto re = std::llround(u.data()[k].real() * 1e6);
    const auto im = std::llround(u.data()[k].imag() * 1e6);
    key += std::to_string(re);
    key += ',';
    key += std::to_string(im);
    key += ';';
  }
  return key;
}

}  // namespace

FiniteGroup::FiniteGroup(std::string name, std::vector<CMat> elements, std::vector<std::string> element_names,
                         bool build_cayley)
    : name_(std::move(name)), elements_(std::move(elements)), names_(std::move(element_names)) {
  if (elements_.empty()) throw DomainError("FiniteGroup: empty element list");
  if (names_.size() != elements_.size()) throw DomainError("FiniteGroup: one name per element required");
  for (auto& u : elements_) u = canonical_phase(u);
  for (size_t k = 0; k < elements_.size(); ++k) {
    if (!index_.emplace(element_key(elements_[k]), static_cast<int>(k)).second)
      throw DomainError("FiniteGroup: duplicate element");
  }
  const auto id = find(CMat::Identity(hilbert_dim(), hilbert_dim()));
  if (!id) throw DomainError("FiniteGroup: identity missing");
  identity_ = *id;
  inverse_.resize(elements_.size());
  for (size_t k = 0; k < elements_.size(); ++k) {
    const auto g = find(elements_[k].adjoint());
    if (!g) throw DomainError("FiniteGroup: not closed under inversion");
    inverse_[k] = *g;
  }
  if (build_cayley) {
    if (order() > kMaxCayleyOrder) throw DomainError("FiniteGroup: Cayley table too large");
    const auto n = static_cast<size_t>(order());
    cayley_.resize(n * n);
    for (size_t g = 0; g < n; ++g)
      for (size_t h = 0; h < n; ++h) {
        const auto p = find(elements_[g] * elements_[h]);
        if (!p) throw DomainError("FiniteGroup: not closed under multiplication");
        cayley_[g * n + h] = *p;
      }
  }
}

std::optional<int> FiniteGroup::find(const CMat& u) const {
  if (u.rows() != hilbert_dim() || u.cols() != hilbert_dim()) return std::nullopt;
  const auto it = index_.find(element_key(canonical_phase(u)));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int FiniteGroup::mul(int g, int h) const {
  if (!cayley_.empty()) return cayley_[static_cast<size_t>(g) * elements_.size() + static_cast<size_t>(h)];
  const auto p = find(unitary(g) * unitary(h));
  if (!p) throw Error("FiniteGroup::mul: product not found");
  return *p;
}

Representation::Representation(GroupPtr group, std::vector<CMat> matrices, bool is_adjoint)
    : group_(std::move(group)), matrices_(std::move(matrices)), adjoint_(is_adjoint) {
  if (!group_ || static_cast<int>(matrices_.size()) != group_->order())
    throw DomainError("Representation: one matrix per group element required");
}

Representation adjoint_representation(const GroupPtr& group) {
  std::vector<CMat> mats;
  mats.reserve(static_cast<size_t>(group->order()));
  for (int g = 0; g < group->order(); ++g) mats.push_back(SuperOp::from_unitary(group->unitary(g)).mat());
  return Representation(group, std::move(mats), true);
}

std::string pauli_label(int index, int qubits) {
  static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
  std::string s;
  for (int j = 0; j < qubits; ++j) s += kLetters[(index >> (2 * (qubits - 1 - j))) & 3];
  return s;
}

GroupBundle build_pauli_group(int q) {
  if (q < 1 || q > 3) throw DomainError(fmt::format("build_pauli_group: q = {} outside 1..3", q));
  const int n = 1 << (2 * q);
  std::vector<CMat> elems;
  std::vector<std::string> names;
  for (int k = 0; k < n; ++k) {
    elems.push_back(pauli_string(k, q));
    names.push_back(pauli_label(k, q));
  }
  auto group = std::make_shared<const FiniteGroup>(fmt::format("pauli{}", q), std::move(elems), std::move(names), true);
  return {group, adjoint_representation(group)};
}

GroupPtr generate_group(std::string name, const std::vector<CMat>& generators,
                        const std::vector<std::string>& generator_names, bool build_cayley) {
  if (generators.empty() || generators.size() != generator_names.size())
    throw DomainError("generate_group: one name per generator required");
  const auto d = generators.front().rows();
  std::vector<CMat> elems{CMat::Identity(d, d)};
  std::vector<std::string> names{"I"};
  std::unordered_map<std::string, int> seen{{element_key(elems.front()), 0}};
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int cur = queue.front();
    queue.pop_front();
    for (size_t k = 0; k < generators.size(); ++k) {
      CMat next = canonical_phase(generators[k] * elems[static_cast<size_t>(cur)]);
      auto key = element_key(next);
      if (seen.count(key)) continue;
      seen.emplace(std::move(key), static_cast<int>(elems.size()));
      queue.push_back(static_cast<int>(elems.size()));
      const auto& prev = names[static_cast<size_t>(cur)];
      names.push_back(prev == "I" ? generator_names[k] : generator_names[k] + "." + prev);
      elems.push_back(std::move(next));
    }
  }
  return std::make_shared<const FiniteGroup>(std::move(name), std::move(elems), std::move(names), build_cayley);
}

namespace {

CMat hadamard() {
  CMat h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  return h / std::sqrt(2.0);
}

CMat phase_gate() {
  CMat s = CMat::Identity(2, 2);
  s(1, 1) = cplx(0.0, 1.0);
  return s;
}

}  // namespace

GroupBundle build_clifford_1q() {
  auto group = generate_group("clifford1", {hadamard(), phase_gate()}, {"H", "S"}, true);
  if (group->order() != 24) throw Error("build_clifford_1q: closure did not produce 24 elements");
  return {group, adjoint_representation(group)};
}

GroupBundle build_clifford_2q() {
#if defined(RBLAB_CLIFFORD2)
  const CMat id = CMat::Identity(2, 2);
  CMat cnot = CMat::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
  auto group = generate_group(
      "clifford2",
      {kron(hadamard(), id), kron(id, hadamard()), kron(phase_gate(), id), kron(id, phase_gate()), cnot},
      {"H0", "H1", "S0", "S1", "CX"}, false);
  if (group->order() != 11520) throw Error("build_clifford_2q: closure did not produce 11520 elements");
  return {group, adjoint_representation(group)};
#else
  throw DomainError("build_clifford_2q: disabled at build time (RBLAB_CLIFFORD2=OFF)");
#endif
}

}  // namespace rblab
