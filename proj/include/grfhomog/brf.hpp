#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "grfhomog/curvature.hpp"
#include "grfhomog/forms.hpp"

namespace grfhomog {

// Named parameter chart: params -> (Metric, torsion 3-form), with open-set
// domain constraints. `normalize` (optional) maps a point to its gauge
// representative on the solution ray; `sample_initial` (optional) draws a
// random in-domain starting point for multistart solving.
struct Chart {
  std::shared_ptr<const ReductiveSpace> space;
  std::vector<std::string> param_names;
  std::function<std::pair<Metric, AltForm>(const Vec&)> eval;
  std::function<bool(const Vec&)> domain_check;
  std::function<Vec(const Vec&)> normalize;
  std::function<Vec(std::mt19937_64&)> sample_initial;
  // Optional system handed to the solver in place of the stacked tensor
  // residual; must vanish exactly where the tensor residual vanishes inside
  // the domain (cleared denominators, rescaled rows).
  std::function<Vec(const Vec&)> solve_residual;
  // Optional scalar row vanishing on the chart's reference gauge slice,
  // appended so the solve system has isolated zeros instead of rays.
  std::function<double(const Vec&)> gauge_row;
  // Optional reseeding heuristic applied when an attempt stalls.
  std::function<Vec(const Vec&, std::mt19937_64&)> restart_point;
  // trace_g H^2 at the chart's reference solution; 0 when the chart carries
  // no scale gauge to pin.
  double scale_pin = 0.0;

  int dim() const { return static_cast<int>(param_names.size()); }
};

// The three blocks of the BRF equations: Ric - 1/4 H^2 (symmetric), dH, and
// delta H; all vanish exactly at BRF pairs.
struct ResidualBlocks {
  Bilinear sym;
  AltForm dh;
  AltForm delta_h;

  // Deterministic stacking: sym entries on/above the diagonal row-major,
  // then dh coefficients (lexicographic tuples), then delta_h coefficients.
  Vec stacked() const;
  double max_norm() const;
};

ResidualBlocks brf_residual(const ReductiveSpace& s, const Metric& g, const AltForm& h);

// The four polynomials whose simultaneous vanishing characterizes BRF pairs
// on the p = q = 1 chart (mu, a, b, c, h1); domain mu,a,b > 0, a^2 b^2 > c^2,
// h1 != 0.
Eigen::Vector4d residual_polynomials_p_eq_q(const Vec& params);

enum class SolveStatus { converged, max_iterations, left_domain, stalled };

struct SolveOptions {
  double tol = 1e-13;        // Euclidean norm of the solve system
  int max_iterations = 400;  // per attempt
  int restarts = 3;          // reseeded attempts after a stalled one
  bool pin_scale = false;    // replace the gauge row by trace_g H^2 - level
  double pin_value = 0.0;    // 0 = use the chart's reference level
  bool apply_normalize = true;  // report chart.normalize(params) when available
};

struct SolveReport {
  Vec params;          // gauge-normalized representative (when available)
  Vec raw_params;      // iterate the solver actually stopped at
  double residual_norm = 0.0;  // stacked tensor residual at raw_params
  int iterations = 0;          // accepted steps over all attempts
  bool converged = false;
  int jacobian_rank = 0;  // of the stacked tensor residual at raw_params
  Vec singular_values;
  SolveStatus status = SolveStatus::converged;
};

// Dense Levenberg-Marquardt on the stacked residual with central-difference
// Jacobians and step-halving domain backtracking.
SolveReport solve(const Chart& chart, const Vec& initial, const SolveOptions& options = {});

std::vector<SolveReport> solve_multistart(const Chart& chart, int count, std::uint64_t seed,
                                          const SolveOptions& options = {}, int threads = 0);

struct DifferentialOptions {
  double step_scale = 1e-6;  // h = step_scale * max(1, |param|)
  double rank_rtol = 1e-6;   // rank = #{sigma > rank_rtol * sigma_max}
};

struct DifferentialReport {
  Mat jacobian;
  Vec singular_values;
  int rank;
};

// Central finite-difference differential of `map` at `params`, with the
// stencil kept inside the chart domain.
DifferentialReport differential_at(const Chart& chart, const Vec& params,
                                   const std::function<Vec(const Vec&)>& map,
                                   const DifferentialOptions& options = {});

// tau_u gauge for the p = q chart with both off-diagonal parameters:
// (mu,a,b,c,s,...) -> (mu,a,b,sqrt(c^2+s^2),0,...).
Vec gauge_normalize(const Vec& params);

}  // namespace grfhomog
