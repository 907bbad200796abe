#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

namespace fitbvp {

using ReactionTerm = std::function<double(double x, double y)>;

/// Closed-form solution. `one_minus_x` is passed separately because nodes in
/// the right boundary layer are not representable as 1 - (1 - x) when eps is
/// tiny; implementations should use it for anything depending on 1 - x.
using ExactSolution = std::function<double(double x, double one_minus_x, double epsilon)>;

struct SolutionBox {
  double lower = 0.0;
  double upper = 1.0;
};

/// eps^2 y'' = f(x, y) on [0, 1] with y(0) = y(1) = 0 and f_y >= m > 0.
///
/// f is assumed at least twice continuously differentiable; that is the
/// caller's obligation and is not checked.
struct Problem {
  std::string name;
  ReactionTerm f;
  ReactionTerm f_y;
  double m = 1.0;
  SolutionBox box;
  std::optional<ExactSolution> exact;
};

/// eps^2 y'' = y - 1.
Problem make_example1();

/// eps^2 y'' = (y - 1)(1 + (y - 1)^2); no closed-form solution.
Problem make_example2();

/// Looks up a builtin problem by CLI identifier (`example1`, `example2`).
Problem make_builtin(const std::string& id);

/// 1 - (e^{-x/eps} + e^{-(1-x)/eps}) / (1 + e^{-1/eps}).
double exact_solution_example1(double x, double epsilon);
double exact_solution_example1(double x, double one_minus_x, double epsilon);

struct Sample {
  double x = 0.0;
  double y = 0.0;
  double f_y = 0.0;
};

struct ValidationReport {
  std::size_t grid_x = 0;
  std::size_t grid_y = 0;
  double gamma = 0.0;
  double min_f_y = 0.0;
  double max_f_y = 0.0;
  bool gamma_bounds_f_y = true;  // gamma >= f_y at every sample
  bool f_y_bounded_below = true; // f_y >= m at every sample
  std::optional<Sample> worst_gamma_violation;
  std::optional<Sample> worst_m_violation;
  /// max |f_y - central difference of f| over the samples.
  double derivative_defect = 0.0;

  bool passed() const { return gamma_bounds_f_y && f_y_bounded_below; }
};

/// Samples [0,1] x [y_L, y_U] on a uniform grid and checks m <= f_y <= gamma.
/// Violations are reported, never thrown.
ValidationReport validate_problem(const Problem& problem, double gamma,
                                  std::size_t grid_x = 101, std::size_t grid_y = 101);

}  // namespace fitbvp
