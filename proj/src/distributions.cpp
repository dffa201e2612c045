#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "rblab/rbsim.hpp"

namespace rblab {

Distribution uniform_distribution(int order) {
  if (order < 1) throw DomainError("uniform_distribution: empty group");
  return Distribution(static_cast<size_t>(order), 1.0 / order);
}

Distribution peaked(int order, int g) {
  if (g < 0 || g >= order) throw DomainError("peaked: element index out of range");
  Distribution nu(static_cast<size_t>(order), 0.0);
  nu[static_cast<size_t>(g)] = 1.0;
  return nu;
}

Distribution mixture(const Distribution& base, double eps) {
  if (eps < 0.0 || eps > 1.0) throw DomainError("mixture: weight outside [0, 1]");
  Distribution out = base;
  const double u = 1.0 / static_cast<double>(base.size());
  for (auto& v : out) v = (1.0 - eps) * u + eps * v;
  return out;
}

Distribution generator_supported(int order, const std::vector<int>& subset, const std::vector<double>& weights) {
  if (subset.empty()) throw DomainError("generator_supported: empty support");
  if (subset.size() != weights.size()) throw DomainError("generator_supported: one weight per element required");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw DomainError("generator_supported: weights must have positive sum");
  Distribution nu(static_cast<size_t>(order), 0.0);
  for (size_t k = 0; k < subset.size(); ++k) {
    if (subset[k] < 0 || subset[k] >= order) throw DomainError("generator_supported: element index out of range");
    if (weights[k] < 0.0) throw DomainError("generator_supported: negative weight");
    nu[static_cast<size_t>(subset[k])] += weights[k] / total;
  }
  return nu;
}

double l1_to_uniform(const Distribution& nu) {
  const double u = 1.0 / static_cast<double>(nu.size());
  double s = 0.0;
  for (double v : nu) s += std::abs(v - u);
  return s;
}

void validate_distribution(const Distribution& nu, int order) {
  if (static_cast<int>(nu.size()) != order)
    throw DomainError(fmt::format("distribution has {} entries, group order is {}", nu.size(), order));
  double total = 0.0;
  for (double v : nu) {
    if (v < 0.0) throw DomainError("distribution has a negative entry");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError(fmt::format("distribution sums to {:.15g}", total));
}

SamplingSchedule interleaved_schedule(int order, int c) {
  return {{uniform_distribution(order), peaked(order, c)}};
}

}  // namespace rblab
