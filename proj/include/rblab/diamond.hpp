#pragma once

#include "rblab/superop.hpp"

namespace rblab {

struct DiamondNormResult {
  double value = 0.0;  // midpoint of [lower, upper]
  double lower = 0.0;
  double upper = 0.0;
  double gap = 0.0;
  int iterations = 0;
};

// Diamond norm of a Hermiticity-preserving map via
//   max <J, W0 - W1>  s.t.  W0, W1 >= 0,  W0 + W1 <= sigma (x) 1,  Tr sigma = 1.
// Rejects d > 8. Throws NumericError (with the achieved gap) on non-convergence.
DiamondNormResult diamond_norm_report(const SuperOp& op);
double diamond_norm(const SuperOp& op);

}  // namespace rblab
