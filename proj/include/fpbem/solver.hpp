// Copyright the fpbem contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FPBEM_SOLVER_HPP
#define FPBEM_SOLVER_HPP

#include <functional>
#include <vector>

#include "fpbem/types.hpp"

namespace fpbem::solver {

struct SolveReport {
  VecXc solution;
  std::vector<double> residual_history;  // relative residual per inner iteration
  int iterations = 0;
  bool converged = false;
};

using ApplyFn = std::function<VecXc(const VecXc&)>;

struct GmresOptions {
  double tol = 1e-4;
  int restart = 100;
  int max_iter = 1000;
  ApplyFn preconditioner;  // optional left preconditioner M^{-1}
};

/// Restarted GMRES over an abstract operator. Modified Gram-Schmidt with one
/// reorthogonalization pass on detected loss of orthogonality. Non-convergence
/// is reported, not thrown; NaN/Inf from the operator is a hard error.
SolveReport gmres(const ApplyFn& apply, const VecXc& b, const GmresOptions& opts = {});

}  // namespace fpbem::solver

#endif  // FPBEM_SOLVER_HPP
