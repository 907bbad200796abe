#pragma once

#include <Eigen/Core>

namespace fitbvp {

/// Parameters of the modified Bakhvalov generating function.
struct MeshParams {
  double epsilon = 0.0;  // perturbation parameter, 0 < epsilon < 1
  double p = 0.0;        // transition parameter, 0 < p < 1/2
  double a = 1.0;        // layer density, a > 0
  int N = 0;             // subintervals, even and >= 4

  /// Throws ParameterError if any invariant is violated.
  void validate() const;
};

/// Transition point of the generating function; either p - eps^{1/3} or the
/// clamped value 0 when that difference is not positive.
struct Transition {
  double alpha = 0.0;
  bool clamped = false;
};

Transition transition_point(const MeshParams& params);

/// Cubic coefficient chosen so that the cubic branch hits 1/2 at t = 1/2.
/// Throws ParameterError when the result is negative (a too large).
double compute_omega(const MeshParams& params, double alpha);

/// x = phi(t): hyperbolic branch on [0, alpha], cubic on [alpha, 1/2],
/// point reflection 1 - phi(1 - t) on [1/2, 1].
double generating_function(double t, const MeshParams& params, double alpha, double omega);

/// Layer-adapted node sequence x_0 = 0 < ... < x_N = 1.
///
/// Only the left half is evaluated; the right half is the exact reflection
/// and x_{N/2} is exactly 1/2. Steps are stored from the left half and
/// mirrored too, together with the complement 1 - x_i, since for tiny eps
/// the right-layer nodes round to 1.
class Mesh {
 public:
  const MeshParams& params() const noexcept { return params_; }
  int size() const noexcept { return params_.N; }
  double alpha() const noexcept { return alpha_; }
  double omega() const noexcept { return omega_; }
  bool clamped() const noexcept { return clamped_; }

  /// x_0 .. x_N.
  const Eigen::VectorXd& nodes() const noexcept { return nodes_; }
  /// 1 - x_i, computed without cancellation near x = 1.
  const Eigen::VectorXd& complements() const noexcept { return complements_; }
  /// h_i = x_{i+1} - x_i for i = 0 .. N-1.
  const Eigen::VectorXd& steps() const noexcept { return steps_; }

  double node(int i) const { return nodes_[i]; }
  double step(int i) const { return steps_[i]; }

 private:
  friend Mesh build_mesh(const MeshParams& params);

  MeshParams params_;
  double alpha_ = 0.0;
  double omega_ = 0.0;
  bool clamped_ = false;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd complements_;
  Eigen::VectorXd steps_;
};

Mesh build_mesh(const MeshParams& params);

struct MeshReport {
  double max_scaled_step = 0.0;       // max_i N h_i
  double max_scaled_step_jump = 0.0;  // max_i N^2 |h_i - h_{i-1}|
  bool monotone = true;               // every h_i > 0
  double symmetry_defect = 0.0;       // max_i |x_i + x_{N-i} - 1|
};

MeshReport mesh_diagnostics(const Mesh& mesh);

}  // namespace fitbvp
