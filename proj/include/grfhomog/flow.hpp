#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "grfhomog/brf.hpp"
#include "grfhomog/forms.hpp"

namespace grfhomog {

struct FlowState {
  double t = 0.0;
  Vec metric_params;
  Vec b_params;
};

enum class FlowStatus { reached_t_max, converged, step_underflow, domain_exit };

struct FlowSample {
  FlowState state;
  double residual_norm = 0.0;  // max norm of the BRF residual blocks
  double scal = 0.0;
  double norm_h2 = 0.0;
};

struct FlowTrajectory {
  std::vector<FlowSample> samples;  // strictly increasing t
  FlowStatus status = FlowStatus::reached_t_max;
  bool converged = false;
};

// Linear chart for the flow: the invariant metric is sum_i params_i * basis_i
// (parameters are the squared scales, e.g. (M,A,B) = (mu^2,a^2,b^2)), and the
// 2-form potential is b = sum_i b_i * beta_i over an invariant 2-form basis.
struct FlowChart {
  std::shared_ptr<const ReductiveSpace> space;
  std::vector<std::string> metric_param_names;
  std::vector<Mat> metric_basis;
  std::vector<AltForm> b_basis;

  int metric_dim() const { return static_cast<int>(metric_basis.size()); }
  int b_dim() const { return static_cast<int>(b_basis.size()); }
  Mat metric_matrix(const Vec& params) const;
  bool metric_in_domain(const Vec& params) const;  // positive definite
};

// Generalized Ricci flow problem on a linear chart with fixed background
// torsion H_0; the evolving torsion is H = H_0 + d b.
struct FlowProblem {
  FlowChart chart;
  AltForm h0;

  AltForm h_at(const FlowState& state) const;
  bool in_domain(const FlowState& state) const;
  Vec rhs(const FlowState& state) const;  // stacked (metric', b')
  FlowSample diagnostics(const FlowState& state) const;
};

// dg/dt = -2 Ric + 1/2 H^2 and db/dt = -delta_g H projected onto the chart's
// tangent bases (exact linear solves; throws ChartDegenerate on rank
// deficiency or projection defect).
Vec grf_vector_field(const FlowChart& chart, const FlowState& state, const AltForm& h0);

// The closed-form diagonal system in (M,A,B) = (mu^2,a^2,b^2):
//   M' = (p^2/(4(p^2+q^2)^2 B^2) + q^2/(4(p^2+q^2)^2 A^2)) (4 lambda^2 (p^2+q^2)^2 - M^2)
//   A' = (q^2/A)(lambda^2/M + M/(4(p^2+q^2)^2)) - 1
//   B' = (p^2/B)(lambda^2/M + M/(4(p^2+q^2)^2)) - 1
Eigen::Vector3d mpq_ode_rhs(double m, double a, double b, int p, int q, double lambda);

// (2 lambda (p^2+q^2), lambda q^2/(p^2+q^2), lambda p^2/(p^2+q^2)).
Eigen::Vector3d fixed_point_mpq(int p, int q, double lambda);

struct IntegrateOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double stop_tol = 1e-12;    // early exit when |field|_inf drops below this
  double initial_step = 1e-2;
  double fixed_step = 0.0;    // > 0 disables adaptivity (testing hook)
  long max_steps = 4000000;
  std::vector<double> sample_times;  // states recorded exactly at these times
};

// Embedded Dormand-Prince 5(4) with a PI step controller (safety 0.9, step
// ratio clamped to [0.2, 5]); steps that exit the domain are halved.
struct OdeResult {
  std::vector<std::pair<double, Vec>> samples;
  double t = 0.0;
  Vec y;
  FlowStatus status = FlowStatus::reached_t_max;
  bool converged = false;
};

OdeResult integrate_ode(const std::function<Vec(double, const Vec&)>& rhs,
                        const std::function<bool(const Vec&)>& domain, double t0,
                        const Vec& y0, double t_max, const IntegrateOptions& options = {});

FlowTrajectory integrate(const FlowProblem& problem, const FlowState& initial,
                         double t_max, const IntegrateOptions& options = {});

struct JacobianReport {
  Mat jacobian;
  Eigen::VectorXcd eigenvalues;
  bool asymptotically_stable = false;  // all real parts negative
};

// Central finite-difference Jacobian of an autonomous field, with dense
// eigenvalues.
JacobianReport jacobian_eigen(const std::function<Vec(const Vec&)>& field, const Vec& point);

}  // namespace grfhomog
