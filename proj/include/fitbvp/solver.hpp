#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "fitbvp/mesh.hpp"
#include "fitbvp/problem.hpp"
#include "fitbvp/scheme.hpp"

namespace fitbvp {

struct NewtonConfig {
  double tol = 1e-12;           // max-norm of the Newton step
  double residual_tol = 1e-12;  // max-norm of F
  int max_iter = 50;
  /// Starting vector of length N + 1. Empty means the flat-one guess
  /// (0, 1, ..., 1, 0).
  std::optional<Eigen::VectorXd> initial_guess;

  void validate() const;
};

struct Solution {
  Mesh mesh;
  Eigen::VectorXd values;  // y_0 .. y_N, boundary entries exactly 0
  int iterations = 0;
  double final_step_norm = 0.0;
  double final_residual_norm = 0.0;
  bool converged = false;
  std::vector<double> step_history;
};

/// Plain Newton iteration on F(y) = 0 with a Thomas solve per step.
/// Throws NonConvergenceError after max_iter steps.
Solution newton_solve(const Problem& problem, const Mesh& mesh, const SchemeParams& sp,
                      const NewtonConfig& cfg = {});

}  // namespace fitbvp
