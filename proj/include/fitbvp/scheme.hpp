#pragma once

#include <Eigen/Core>
#include <vector>

#include "fitbvp/mesh.hpp"
#include "fitbvp/problem.hpp"
#include "fitbvp/tridiagonal.hpp"

namespace fitbvp {

using Jacobian = TridiagonalMatrix<double>;

/// Fitting constant gamma, central weight q and beta = sqrt(gamma) / eps.
struct SchemeParams {
  double gamma = 1.0;
  double q = 4.0;
  double beta = 0.0;

  /// Throws ParameterError unless gamma > 0, q > 0 and 0 < epsilon.
  static SchemeParams make(double gamma, double q, double epsilon);
};

/// Per-interval fitted coefficients. Entry k belongs to [x_k, x_{k+1}], so
/// a[k] = csch(beta h_k) is a_{k+1} in the one-based numbering of the scheme.
struct SchemeCoefficients {
  Eigen::VectorXd a;        // csch(beta h)
  Eigen::VectorXd d;        // coth(beta h) = a + delta_d
  Eigen::VectorXd delta_d;  // coth(beta h) - csch(beta h) = tanh(beta h / 2)
};

SchemeCoefficients fitted_coefficients(const Mesh& mesh, const SchemeParams& sp);

/// The discrete nonlinear operator F on a fixed mesh together with its
/// tridiagonal Frechet derivative. Holds references; the problem and mesh
/// must outlive it.
class DiscreteOperator {
 public:
  DiscreteOperator(const Problem& problem, const Mesh& mesh, const SchemeParams& sp);

  int size() const noexcept { return mesh_.size(); }
  const SchemeCoefficients& coefficients() const noexcept { return coeffs_; }
  const SchemeParams& scheme() const noexcept { return sp_; }

  /// F_0 = y_0, F_N = y_N and the scaled three-point relation in between.
  Eigen::VectorXd residual(const Eigen::VectorXd& y) const;

  /// H = F'(y): identity rows at the boundary, tridiagonal interior.
  Jacobian jacobian(const Eigen::VectorXd& y) const;

 private:
  void check_length(const Eigen::VectorXd& y) const;

  const Problem& problem_;
  const Mesh& mesh_;
  SchemeParams sp_;
  SchemeCoefficients coeffs_;
};

Eigen::VectorXd residual(const Problem& problem, const Mesh& mesh, const SchemeParams& sp,
                         const Eigen::VectorXd& y);

Jacobian jacobian(const Problem& problem, const Mesh& mesh, const SchemeParams& sp,
                  const Eigen::VectorXd& y);

struct DominanceReport {
  /// |h_ii| - |h_i,i-1| - |h_i,i+1| for every row (boundary rows included).
  Eigen::VectorXd margins;
  /// Interior rows with diag >= 0 or a negative off-diagonal.
  std::vector<int> sign_violations;
  double min_margin = 0.0;  // over interior rows
  int min_margin_row = -1;
  double required_margin = 0.0;  // (q + 2) m
  bool dominant = false;         // min_margin >= required_margin - tolerance

  bool sign_pattern_ok() const { return sign_violations.empty(); }
};

/// Row sign pattern and diagonal dominance margin of the Jacobian.
DominanceReport mmatrix_check(const Jacobian& H, const SchemeParams& sp, double m,
                              double tolerance = 1e-8);

}  // namespace fitbvp
