#include "fitbvp/solver.hpp"

#include <cmath>
#include <sstream>

#include "fitbvp/errors.hpp"
#include "fitbvp/tridiagonal.hpp"

namespace fitbvp {

void NewtonConfig::validate() const {
  if (!(tol > 0.0)) throw ParameterError("newton: tol must be positive");
  if (!(residual_tol > 0.0)) throw ParameterError("newton: residual_tol must be positive");
  if (max_iter < 1) throw ParameterError("newton: max_iter must be at least 1");
}

Solution newton_solve(const Problem& problem, const Mesh& mesh, const SchemeParams& sp,
                      const NewtonConfig& cfg) {
  cfg.validate();
  const int n = mesh.size();
  const DiscreteOperator op(problem, mesh, sp);

  Eigen::VectorXd y;
  if (cfg.initial_guess) {
    if (cfg.initial_guess->size() != n + 1) {
      throw DimensionError("newton: initial guess must have N + 1 entries");
    }
    y = *cfg.initial_guess;
  } else {
    y = Eigen::VectorXd::Ones(n + 1);
  }
  y[0] = 0.0;
  y[n] = 0.0;

  Solution sol{mesh, {}, 0, INFINITY, INFINITY, false, {}};
  for (int k = 0; k < cfg.max_iter; ++k) {
    const Eigen::VectorXd F = op.residual(y);
    sol.final_residual_norm = F.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(sol.final_residual_norm)) break;
    if (sol.final_residual_norm <= cfg.residual_tol) {
      sol.converged = true;
      break;
    }

    const Eigen::VectorXd step = thomas_solve(op.jacobian(y), Eigen::VectorXd(-F));
    y += step;
    y[0] = 0.0;
    y[n] = 0.0;
    ++sol.iterations;
    sol.final_step_norm = step.lpNorm<Eigen::Infinity>();
    sol.step_history.push_back(sol.final_step_norm);
    if (!std::isfinite(sol.final_step_norm)) break;
    if (sol.final_step_norm <= cfg.tol) {
      sol.final_residual_norm = op.residual(y).lpNorm<Eigen::Infinity>();
      sol.converged = true;
      break;
    }
  }

  if (!sol.converged) {
    std::ostringstream msg;
    msg << "newton: no convergence for " << problem.name << " (eps=" << mesh.params().epsilon
        << ", N=" << n << ") after " << sol.iterations << " steps; step norms:";
    for (double s : sol.step_history) msg << ' ' << s;
    throw NonConvergenceError(msg.str(), sol.step_history);
  }
  sol.values = std::move(y);
  return sol;
}

}  // namespace fitbvp
