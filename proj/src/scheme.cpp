#include "fitbvp/scheme.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fitbvp/errors.hpp"
#include "fitbvp/hyperbolic.hpp"

namespace fitbvp {

SchemeParams SchemeParams::make(double gamma, double q, double epsilon) {
  if (!(gamma > 0.0)) throw ParameterError("scheme: gamma must be positive");
  if (!(q > 0.0)) throw ParameterError("scheme: q must be positive");
  if (!(epsilon > 0.0)) throw ParameterError("scheme: epsilon must be positive");
  return {gamma, q, std::sqrt(gamma) / epsilon};
}

SchemeCoefficients fitted_coefficients(const Mesh& mesh, const SchemeParams& sp) {
  const auto& h = mesh.steps();
  const Eigen::Index n = h.size();
  SchemeCoefficients c;
  c.a.resize(n);
  c.d.resize(n);
  c.delta_d.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double z = sp.beta * h[k];
    c.a[k] = stable_csch(z);
    c.delta_d[k] = stable_delta_d(z);
    c.d[k] = c.a[k] + c.delta_d[k];
  }
  return c;
}

DiscreteOperator::DiscreteOperator(const Problem& problem, const Mesh& mesh,
                                   const SchemeParams& sp)
    : problem_(problem), mesh_(mesh), sp_(sp), coeffs_(fitted_coefficients(mesh, sp)) {}

void DiscreteOperator::check_length(const Eigen::VectorXd& y) const {
  if (y.size() != mesh_.size() + 1) {
    throw DimensionError("discrete operator: expected " + std::to_string(mesh_.size() + 1) +
                         " values, got " + std::to_string(y.size()));
  }
}

Eigen::VectorXd DiscreteOperator::residual(const Eigen::VectorXd& y) const {
  check_length(y);
  const int n = mesh_.size();
  const auto& x = mesh_.nodes();
  const auto& a = coeffs_.a;
  const auto& d = coeffs_.d;
  const auto& dd = coeffs_.delta_d;
  const double gamma = sp_.gamma;
  const double q = sp_.q;

  Eigen::VectorXd F(n + 1);
  F[0] = y[0];
  F[n] = y[n];

  double f_prev = problem_.f(x[0], y[0]);
  double f_here = problem_.f(x[1], y[1]);
  for (int i = 1; i < n; ++i) {
    const double f_next = problem_.f(x[i + 1], y[i + 1]);
    // a_i, d_i live on interval i-1; a_{i+1}, d_{i+1} on interval i.
    const double span = dd[i - 1] + dd[i];
    const double left = (q + 1.0) * a[i - 1] + d[i - 1] + dd[i];
    const double right = (q + 1.0) * a[i] + d[i] + dd[i - 1];
    const double bracket = left * (y[i - 1] - y[i]) - right * (y[i] - y[i + 1]) -
                           (f_prev + q * f_here + f_next) / gamma * span;
    F[i] = gamma / span * bracket;
    f_prev = f_here;
    f_here = f_next;
  }
  return F;
}

Jacobian DiscreteOperator::jacobian(const Eigen::VectorXd& y) const {
  check_length(y);
  const int n = mesh_.size();
  const auto& x = mesh_.nodes();
  const auto& a = coeffs_.a;
  const auto& d = coeffs_.d;
  const auto& dd = coeffs_.delta_d;
  const double gamma = sp_.gamma;
  const double q = sp_.q;

  Jacobian H(n + 1);
  H.diag[0] = 1.0;
  H.diag[n] = 1.0;
  for (int i = 1; i < n; ++i) {
    const double span = dd[i - 1] + dd[i];
    const double scale = gamma / span;
    const double fy_prev = problem_.f_y(x[i - 1], y[i - 1]);
    const double fy_here = problem_.f_y(x[i], y[i]);
    const double fy_next = problem_.f_y(x[i + 1], y[i + 1]);
    H.diag[i] = scale * (-q * (a[i - 1] + a[i]) - 2.0 * (d[i - 1] + d[i]) -
                         q / gamma * fy_here * span);
    H.sub[i - 1] = scale * (span * (1.0 - fy_prev / gamma) + (q + 2.0) * a[i - 1]);
    H.sup[i] = scale * (span * (1.0 - fy_next / gamma) + (q + 2.0) * a[i]);
  }
  return H;
}

Eigen::VectorXd residual(const Problem& problem, const Mesh& mesh, const SchemeParams& sp,
                         const Eigen::VectorXd& y) {
  return DiscreteOperator(problem, mesh, sp).residual(y);
}

Jacobian jacobian(const Problem& problem, const Mesh& mesh, const SchemeParams& sp,
                  const Eigen::VectorXd& y) {
  return DiscreteOperator(problem, mesh, sp).jacobian(y);
}

DominanceReport mmatrix_check(const Jacobian& H, const SchemeParams& sp, double m,
                              double tolerance) {
  H.check_shape();
  DominanceReport report;
  const Eigen::Index rows = H.rows();
  report.margins.resize(rows);
  report.required_margin = (sp.q + 2.0) * m;
  report.min_margin = std::numeric_limits<double>::infinity();

  for (Eigen::Index i = 0; i < rows; ++i) {
    const double lo = H.lower(i);
    const double up = H.upper(i);
    const double margin = std::abs(H.diag[i]) - std::abs(lo) - std::abs(up);
    report.margins[i] = margin;
    if (i == 0 || i == rows - 1) continue;
    if (!(H.diag[i] < 0.0) || lo < 0.0 || up < 0.0) {
      report.sign_violations.push_back(static_cast<int>(i));
    }
    if (margin < report.min_margin) {
      report.min_margin = margin;
      report.min_margin_row = static_cast<int>(i);
    }
  }
  report.dominant = report.min_margin >= report.required_margin - tolerance;
  return report;
}

}  // namespace fitbvp
