#pragma once

// Dense two-phase simplex for small standard-form linear programs:
//
//   minimize c^T x   subject to   A x = b,  x >= 0.
//
// Sized for the problems in this library (tens of rows, up to ~10^5
// columns); no sparsity, no presolve.

#include <cstddef>

#include <Eigen/Dense>

#include "nogo/errors.hpp"

namespace nogo::lp {

struct StandardForm {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

struct Solution {
  Eigen::VectorXd x;
  double objective = 0.0;
  std::size_t iterations = 0;
};

struct Options {
  double tolerance = 1e-9;
  std::size_t max_iterations = 200000;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  std::size_t degenerate_limit = 64;
  /// Relative size of the right-hand-side offsets used to avoid stalling on
  /// degenerate vertices; the returned solution is recomputed for the exact
  /// right-hand side. Zero disables the perturbed pass.
  double perturbation = 1e-7;
};

/// Throws InfeasibleError, UnboundedError, or ConvergenceError.
Solution solve(const StandardForm& problem, const Options& options = {});

} // namespace nogo::lp
