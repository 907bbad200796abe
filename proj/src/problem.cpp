#include "fitbvp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fitbvp {

double exact_solution_example1(double x, double one_minus_x, double epsilon) {
  if (!(x >= 0.0 && x <= 1.0) || !(one_minus_x >= 0.0 && one_minus_x <= 1.0)) {
    throw std::domain_error("exact_solution_example1: x outside [0, 1]");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::domain_error("exact_solution_example1: epsilon outside (0, 1)");
  }
  // Every exponent is non-positive, so nothing overflows for tiny epsilon.
  const double left = std::exp(-x / epsilon);
  const double right = std::exp(-one_minus_x / epsilon);
  return 1.0 - (left + right) / (1.0 + std::exp(-1.0 / epsilon));
}

double exact_solution_example1(double x, double epsilon) {
  return exact_solution_example1(x, 1.0 - x, epsilon);
}

Problem make_example1() {
  Problem p;
  p.name = "example1";
  p.f = [](double, double y) { return y - 1.0; };
  p.f_y = [](double, double) { return 1.0; };
  p.m = 1.0;
  p.box = {0.0, 1.0};
  p.exact = [](double x, double xc, double eps) { return exact_solution_example1(x, xc, eps); };
  return p;
}

Problem make_example2() {
  Problem p;
  p.name = "example2";
  p.f = [](double, double y) {
    const double u = y - 1.0;
    return u * (1.0 + u * u);
  };
  p.f_y = [](double, double y) {
    const double u = y - 1.0;
    return 1.0 + 3.0 * u * u;
  };
  p.m = 1.0;
  p.box = {0.0, 1.0};
  return p;
}

Problem make_builtin(const std::string& id) {
  if (id == "example1") return make_example1();
  if (id == "example2") return make_example2();
  throw std::invalid_argument("unknown problem '" + id + "' (expected example1 or example2)");
}

ValidationReport validate_problem(const Problem& problem, double gamma, std::size_t grid_x,
                                  std::size_t grid_y) {
  if (!(gamma > 0.0)) throw std::invalid_argument("validate_problem: gamma must be positive");
  if (grid_x < 2 || grid_y < 2) {
    throw std::invalid_argument("validate_problem: need at least 2 samples per axis");
  }

  ValidationReport report;
  report.grid_x = grid_x;
  report.grid_y = grid_y;
  report.gamma = gamma;
  report.min_f_y = INFINITY;
  report.max_f_y = -INFINITY;

  const auto [y_lo, y_hi] = problem.box;
  double worst_gamma_excess = 0.0;
  double worst_m_deficit = 0.0;

  for (std::size_t i = 0; i < grid_x; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(grid_x - 1);
    for (std::size_t j = 0; j < grid_y; ++j) {
      const double y =
          y_lo + (y_hi - y_lo) * static_cast<double>(j) / static_cast<double>(grid_y - 1);
      const double fy = problem.f_y(x, y);
      report.min_f_y = std::min(report.min_f_y, fy);
      report.max_f_y = std::max(report.max_f_y, fy);

      if (fy > gamma && fy - gamma > worst_gamma_excess) {
        worst_gamma_excess = fy - gamma;
        report.gamma_bounds_f_y = false;
        report.worst_gamma_violation = Sample{x, y, fy};
      }
      if (fy < problem.m && problem.m - fy > worst_m_deficit) {
        worst_m_deficit = problem.m - fy;
        report.f_y_bounded_below = false;
        report.worst_m_violation = Sample{x, y, fy};
      }

      const double step = 1e-6 * std::max(1.0, std::abs(y));
      const double fd = (problem.f(x, y + step) - problem.f(x, y - step)) / (2.0 * step);
      report.derivative_defect = std::max(report.derivative_defect, std::abs(fd - fy));
    }
  }
  return report;
}

}  // namespace fitbvp
