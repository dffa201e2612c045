#include "rblab/diamond.hpp"

#include <cmath>

#include <fmt/format.h>

#include "rblab/sdp.hpp"

namespace rblab {

namespace {

constexpr int kMaxDiamondDim = 8;

// Blocks: 0 = W0, 1 = W1, 2 = sigma, 3 = slack Z with W0 + W1 + Z = sigma (x) 1.
sdp::Problem diamond_problem(const CMat& choi, int d) {
  const int n = d * d;
  sdp::Problem p;
  p.block_sizes = {n, n, d, n};
  p.objective = {-choi, choi, CMat::Zero(d, d), CMat::Zero(n, n)};
  const double r2 = 1.0 / std::sqrt(2.0);
  const cplx im(0.0, 1.0);

  // Hermitian basis element E of C^{n x n} given by its (row, col, value) list.
  auto add = [&](const std::vector<sdp::Entry>& e_entries) {
    std::vector<sdp::Entry> c;
    for (const auto& e : e_entries) {
      c.push_back({0, e.row, e.col, e.value});
      c.push_back({1, e.row, e.col, e.value});
      c.push_back({3, e.row, e.col, e.value});
      // -<Tr_out E, sigma>: Tr_out |i a><j b| = delta_ab |i><j|.
      const int i = e.row / d, a = e.row % d;
      const int j = e.col / d, b = e.col % d;
      if (a == b) c.push_back({2, i, j, -e.value});
    }
    // Merge duplicate sigma entries.
    std::vector<sdp::Entry> merged;
    for (const auto& e : c) {
      bool found = false;
      for (auto& m : merged)
        if (m.block == e.block && m.row == e.row && m.col == e.col) {
          m.value += e.value;
          found = true;
          break;
        }
      if (!found) merged.push_back(e);
    }
    std::erase_if(merged, [](const sdp::Entry& e) { return std::abs(e.value) == 0.0; });
    p.constraints.push_back(std::move(merged));
  };

  std::vector<double> rhs;
  for (int r = 0; r < n; ++r) {
    add({{0, r, r, 1.0}});
    rhs.push_back(0.0);
  }
  for (int r = 0; r < n; ++r)
    for (int c = r + 1; c < n; ++c) {
      add({{0, r, c, r2}, {0, c, r, r2}});
      rhs.push_back(0.0);
      add({{0, r, c, -im * r2}, {0, c, r, im * r2}});
      rhs.push_back(0.0);
    }
  std::vector<sdp::Entry> trace;
  for (int i = 0; i < d; ++i) trace.push_back({2, i, i, 1.0});
  p.constraints.push_back(trace);
  rhs.push_back(1.0);
  p.rhs = Eigen::Map<RVec>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  return p;
}

}  // namespace

DiamondNormResult diamond_norm_report(const SuperOp& op) {
  const int d = op.dim();
  if (d > kMaxDiamondDim)
    throw DomainError(fmt::format("diamond_norm: dimension {} exceeds the supported maximum {}", d, kMaxDiamondDim));
  const CMat choi = to_choi(op);
  if ((choi - choi.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
    throw DomainError("diamond_norm: map is not Hermiticity preserving");
  const CMat hchoi = 0.5 * (choi + choi.adjoint());

  DiamondNormResult out;
  if (hchoi.cwiseAbs().maxCoeff() == 0.0) return out;

  const sdp::Result r = sdp::solve(diamond_problem(hchoi, d));
  const double a = -r.primal_objective;
  const double b = -r.dual_objective;
  out.lower = std::min(a, b);
  out.upper = std::max(a, b);
  out.value = 0.5 * (a + b);
  out.gap = out.upper - out.lower;
  out.iterations = r.iterations;
  if (!r.converged)
    throw NumericError(fmt::format("diamond_norm: SDP did not converge after {} iterations (gap {:.3e}, "
                                   "primal infeasibility {:.3e}, dual infeasibility {:.3e})",
                                   r.iterations, out.gap, r.primal_infeasibility, r.dual_infeasibility));
  return out;
}

double diamond_norm(const SuperOp& op) { return diamond_norm_report(op).value; }

}  // namespace rblab
