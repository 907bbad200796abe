#include "fitbvp/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fitbvp/errors.hpp"

namespace fitbvp {
namespace {

struct HyperbolicBranch {
  double value;   // kappa(alpha)
  double slope;   // kappa'(alpha)
  double curve;   // kappa''(alpha)
};

HyperbolicBranch hyperbolic_at(const MeshParams& params, double alpha) {
  const double gap = params.p - alpha;
  const double scale = params.a * params.epsilon;
  return {scale * alpha / gap, scale * params.p / (gap * gap),
          2.0 * scale * params.p / (gap * gap * gap)};
}

double left_half(double t, const MeshParams& params, double alpha, double omega) {
  if (t <= alpha) return params.a * params.epsilon * t / (params.p - t);
  const auto k = hyperbolic_at(params, alpha);
  const double s = t - alpha;
  return ((omega * s + 0.5 * k.curve) * s + k.slope) * s + k.value;
}

}  // namespace

void MeshParams::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("mesh: epsilon must lie in (0, 1)");
  if (!(p > 0.0 && p < 0.5)) throw ParameterError("mesh: p must lie in (0, 1/2)");
  if (!(a > 0.0)) throw ParameterError("mesh: a must be positive");
  if (N < 4 || N % 2 != 0) {
    throw ParameterError("mesh: N must be even and at least 4, got " + std::to_string(N));
  }
}

Transition transition_point(const MeshParams& params) {
  const double alpha = params.p - std::cbrt(params.epsilon);
  if (alpha > 0.0) return {alpha, false};
  return {0.0, true};
}

double compute_omega(const MeshParams& params, double alpha) {
  if (!(alpha < 0.5)) throw ParameterError("compute_omega: alpha must be below 1/2");
  // pi(1/2) = 1/2 solved for omega. With alpha = p - eps^{1/3} this is the
  // closed form (1/2-alpha)^{-3} {1/2 - a[p s^2 + p s eps^{1/3} + alpha eps^{2/3}]};
  // the general form also covers the clamped alpha = 0.
  const auto k = hyperbolic_at(params, alpha);
  const double s = 0.5 - alpha;
  const double omega = (0.5 - k.value - k.slope * s - 0.5 * k.curve * s * s) / (s * s * s);
  if (omega < 0.0) {
    throw ParameterError("compute_omega: omega = " + std::to_string(omega) +
                         " < 0; reduce a");
  }
  return omega;
}

double generating_function(double t, const MeshParams& params, double alpha, double omega) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("generating_function: t outside [0, 1]");
  if (t <= 0.5) return left_half(t, params, alpha, omega);
  return 1.0 - left_half(1.0 - t, params, alpha, omega);
}

Mesh build_mesh(const MeshParams& params) {
  params.validate();
  const auto [alpha, clamped] = transition_point(params);
  const double omega = compute_omega(params, alpha);

  const int n = params.N;
  const int half = n / 2;
  Mesh mesh;
  mesh.params_ = params;
  mesh.alpha_ = alpha;
  mesh.omega_ = omega;
  mesh.clamped_ = clamped;
  mesh.nodes_.resize(n + 1);
  mesh.complements_.resize(n + 1);
  mesh.steps_.resize(n);

  for (int i = 0; i < half; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n);
    const double x = left_half(t, params, alpha, omega);
    mesh.nodes_[i] = x;
    mesh.complements_[i] = 1.0 - x;
    mesh.nodes_[n - i] = 1.0 - x;
    mesh.complements_[n - i] = x;
  }
  mesh.nodes_[half] = 0.5;
  mesh.complements_[half] = 0.5;

  for (int i = 0; i < half; ++i) {
    const double h = mesh.nodes_[i + 1] - mesh.nodes_[i];
    if (!(h > 0.0)) {
      throw DegenerateMeshError("build_mesh: non-positive step h_" + std::to_string(i));
    }
    mesh.steps_[i] = h;
    mesh.steps_[n - 1 - i] = h;
  }
  return mesh;
}

MeshReport mesh_diagnostics(const Mesh& mesh) {
  MeshReport report;
  const int n = mesh.size();
  const double nd = static_cast<double>(n);
  const auto& h = mesh.steps();
  const auto& x = mesh.nodes();
  for (int i = 0; i < n; ++i) {
    report.max_scaled_step = std::max(report.max_scaled_step, nd * h[i]);
    if (!(h[i] > 0.0)) report.monotone = false;
    if (i > 0) {
      report.max_scaled_step_jump =
          std::max(report.max_scaled_step_jump, nd * nd * std::abs(h[i] - h[i - 1]));
    }
  }
  for (int i = 0; i <= n; ++i) {
    report.symmetry_defect = std::max(report.symmetry_defect, std::abs(x[i] + x[n - i] - 1.0));
  }
  return report;
}

}  // namespace fitbvp
