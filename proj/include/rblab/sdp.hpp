#pragma once

#include <vector>

#include "rblab/linalg.hpp"

namespace rblab::sdp {

// One nonzero entry of a block-diagonal Hermitian constraint matrix.
struct Entry {
  int block;
  int row;
  int col;
  cplx value;
};

// Primal:  minimize <C, X>  s.t.  <A_k, X> = b_k,  X >= 0 (block diagonal).
// Dual:    maximize b.y     s.t.  C - sum_k y_k A_k = S >= 0.
// Each A_k must be Hermitian and list both (p,q) and (q,p) entries.
struct Problem {
  std::vector<int> block_sizes;
  std::vector<CMat> objective;
  std::vector<std::vector<Entry>> constraints;
  RVec rhs;
};

struct Options {
  double gap_tol = 1e-9;
  double feasibility_tol = 1e-9;
  int max_iterations = 120;
  // Accepted gap and infeasibility when the iteration breaks down numerically.
  double breakdown_tol = 1e-7;
};

struct Result {
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<CMat> x;
  std::vector<CMat> s;
  RVec y;
};

// Infeasible primal-dual interior-point method with the HKM search direction
// and Mehrotra predictor-corrector steps. Dense per block; sized for blocks up
// to a few hundred rows.
Result solve(const Problem& problem, const Options& options = {});

}  // namespace rblab::sdp
