#include "grfhomog/flow.hpp"

#include <algorithm>
#include <cmath>

#include "grfhomog/curvature.hpp"
#include "grfhomog/errors.hpp"

namespace grfhomog {

Mat FlowChart::metric_matrix(const Vec& params) const {
  if (params.size() != metric_dim())
    throw DimensionMismatch("metric parameter count does not match chart");
  Mat g = Mat::Zero(space->dim_m(), space->dim_m());
  for (int i = 0; i < metric_dim(); ++i) g += params[i] * metric_basis[i];
  return g;
}

bool FlowChart::metric_in_domain(const Vec& params) const {
  if (params.size() != metric_dim()) return false;
  const Mat g = metric_matrix(params);
  Eigen::LLT<Mat> llt(g);
  return llt.info() == Eigen::Success;
}

AltForm FlowProblem::h_at(const FlowState& state) const {
  AltForm h = h0;
  if (chart.b_dim() > 0) {
    if (state.b_params.size() != chart.b_dim())
      throw DimensionMismatch("b parameter count does not match chart");
    AltForm b(h0.n(), 2);
    for (int i = 0; i < chart.b_dim(); ++i)
      b += state.b_params[i] * chart.b_basis[i];
    h += koszul_d(*chart.space, b);
  }
  return h;
}

bool FlowProblem::in_domain(const FlowState& state) const {
  return chart.metric_in_domain(state.metric_params);
}

Vec FlowProblem::rhs(const FlowState& state) const {
  return grf_vector_field(chart, state, h0);
}

FlowSample FlowProblem::diagnostics(const FlowState& state) const {
  const Metric g(chart.metric_matrix(state.metric_params));
  const AltForm h = h_at(state);
  FlowSample sample;
  sample.state = state;
  sample.residual_norm = brf_residual(*chart.space, g, h).max_norm();
  sample.scal = scalar(*chart.space, g);
  sample.norm_h2 = form_norm_sq(*chart.space, g, h);
  return sample;
}

namespace {

// Least-squares coordinates of `target` in the span of `basis` columns;
// throws when the basis is rank-deficient or the target leaves the span.
Vec project_onto_span(const Mat& basis, const Vec& target, const char* what) {
  Eigen::ColPivHouseholderQR<Mat> qr(basis);
  if (qr.rank() < basis.cols())
    throw ChartDegenerate(std::string(what) + ": chart differential is rank-deficient");
  const Vec coords = qr.solve(target);
  const double defect = (basis * coords - target).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, target.cwiseAbs().maxCoeff());
  if (defect > 1e-9 * scale)
    throw ChartDegenerate(std::string(what) + ": tensor leaves the chart tangent span");
  return coords;
}

}  // namespace

Vec grf_vector_field(const FlowChart& chart, const FlowState& state, const AltForm& h0) {
  const ReductiveSpace& s = *chart.space;
  const int n = s.dim_m();
  const Metric g(chart.metric_matrix(state.metric_params));
  FlowProblem tmp{chart, h0};
  const AltForm h = tmp.h_at(state);

  const Mat sdot = -2.0 * ricci(s, g).components() + 0.5 * h_squared(s, g, h).components();

  // stack the distinct entries (upper triangle) of symmetric tensors
  const int m = n * (n + 1) / 2;
  auto vech = [&](const Mat& a) {
    Vec v(m);
    int pos = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) v[pos++] = a(i, j);
    return v;
  };
  Mat basis(m, chart.metric_dim());
  for (int i = 0; i < chart.metric_dim(); ++i) basis.col(i) = vech(chart.metric_basis[i]);
  const Vec metric_dot = project_onto_span(basis, vech(sdot), "metric projection");

  Vec out(chart.metric_dim() + chart.b_dim());
  out.head(chart.metric_dim()) = metric_dot;

  if (chart.b_dim() > 0) {
    const AltForm delta_h = codifferential(s, g, h);
    Mat b_basis_mat(delta_h.size(), chart.b_dim());
    for (int i = 0; i < chart.b_dim(); ++i) b_basis_mat.col(i) = chart.b_basis[i].coeffs();
    out.tail(chart.b_dim()) =
        project_onto_span(b_basis_mat, -delta_h.coeffs(), "b projection");
  }
  return out;
}

Eigen::Vector3d mpq_ode_rhs(double m, double a, double b, int p, int q, double lambda) {
  if (!(m > 0 && a > 0 && b > 0)) throw OutOfDomain("M, A, B must be positive");
  const double pq2 = double(p * p + q * q) * (p * p + q * q);
  Eigen::Vector3d out;
  out[0] = (p * p / (4.0 * pq2 * b * b) + q * q / (4.0 * pq2 * a * a)) *
           (4.0 * lambda * lambda * pq2 - m * m);
  out[1] = (q * q / a) * (lambda * lambda / m + m / (4.0 * pq2)) - 1.0;
  out[2] = (p * p / b) * (lambda * lambda / m + m / (4.0 * pq2)) - 1.0;
  return out;
}

Eigen::Vector3d fixed_point_mpq(int p, int q, double lambda) {
  const double pq = p * p + q * q;
  return {2.0 * lambda * pq, lambda * q * q / pq, lambda * p * p / pq};
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA[7][6] = {
    {0, 0, 0, 0, 0, 0},
    {1.0 / 5, 0, 0, 0, 0, 0},
    {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
    {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
    {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
constexpr double kC[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kB5[7] = {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0};
constexpr double kB4[7] = {5179.0 / 57600,    0,           7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

}  // namespace

OdeResult integrate_ode(const std::function<Vec(double, const Vec&)>& rhs,
                        const std::function<bool(const Vec&)>& domain, double t0,
                        const Vec& y0, double t_max, const IntegrateOptions& options) {
  OdeResult result;
  if (domain && !domain(y0)) throw OutOfDomain("initial state outside the domain");

  double t = t0;
  Vec y = y0;
  result.samples.emplace_back(t, y);

  std::vector<double> samples = options.sample_times;
  std::sort(samples.begin(), samples.end());
  std::size_t next_sample = 0;
  while (next_sample < samples.size() && samples[next_sample] <= t0) ++next_sample;

  const bool fixed = options.fixed_step > 0.0;
  double h = fixed ? options.fixed_step : options.initial_step;
  double err_prev = 1.0;
  std::vector<Vec> k(7);

  const auto record = [&](double tt, const Vec& yy) { result.samples.emplace_back(tt, yy); };

  // Near the boundary of the domain the field can fail to evaluate even when
  // the positivity predicate still passes; such states count as domain exits.
  const auto try_rhs = [&](double tt, const Vec& yy, Vec& out) -> bool {
    try {
      out = rhs(tt, yy);
      return true;
    } catch (const OutOfDomain&) {
    } catch (const SingularMetric&) {
    } catch (const ChartDegenerate&) {
    }
    return false;
  };

  for (long step = 0; step < options.max_steps && t < t_max; ++step) {
    Vec f0;
    if (!try_rhs(t, y, f0)) {
      result.status = FlowStatus::domain_exit;
      break;
    }
    if (f0.cwiseAbs().maxCoeff() < options.stop_tol) {
      result.converged = true;
      result.status = FlowStatus::converged;
      break;
    }

    // clamp to the next sample time or to t_max for an exact hit
    double h_use = std::min(h, t_max - t);
    bool clamped = false;
    if (next_sample < samples.size() && t + h_use >= samples[next_sample] - 1e-15) {
      h_use = samples[next_sample] - t;
      clamped = true;
    }
    if (h_use <= 1e-14) {
      // degenerate clamp: emit the sample at the current state
      if (clamped) {
        record(samples[next_sample], y);
        ++next_sample;
        continue;
      }
      result.status = FlowStatus::step_underflow;
      break;
    }

    k[0] = f0;
    bool stage_ok = true;
    for (int stage = 1; stage < 7 && stage_ok; ++stage) {
      Vec ys = y;
      for (int j = 0; j < stage; ++j)
        if (kA[stage][j] != 0.0) ys += (h_use * kA[stage][j]) * k[j];
      if (domain && !domain(ys)) {
        stage_ok = false;
        break;
      }
      if (!try_rhs(t + kC[stage] * h_use, ys, k[stage])) {
        stage_ok = false;
        break;
      }
    }

    if (!stage_ok) {
      h *= 0.5;
      if (h < 1e-14) {
        result.status = FlowStatus::domain_exit;
        break;
      }
      continue;
    }

    Vec y5 = y, y4 = y;
    for (int j = 0; j < 7; ++j) {
      if (kB5[j] != 0.0) y5 += (h_use * kB5[j]) * k[j];
      if (kB4[j] != 0.0) y4 += (h_use * kB4[j]) * k[j];
    }

    if (domain && !domain(y5)) {
      h *= 0.5;
      if (h < 1e-14) {
        result.status = FlowStatus::domain_exit;
        break;
      }
      continue;
    }

    if (fixed) {
      t += h_use;
      y = y5;
      if (clamped && next_sample < samples.size()) {
        record(t, y);
        ++next_sample;
      }
      continue;
    }

    // weighted error of the embedded pair
    double err = 0.0;
    for (int i = 0; i < y.size(); ++i) {
      const double sc =
          options.atol + options.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
      const double e = (y5[i] - y4[i]) / sc;
      err += e * e;
    }
    err = std::sqrt(err / y.size());

    if (err <= 1.0) {
      t += h_use;
      y = y5;
      if (clamped && next_sample < samples.size() && t >= samples[next_sample] - 1e-12) {
        record(t, y);
        ++next_sample;
      }
      // PI controller (orders 5/4)
      const double grow = 0.9 * std::pow(std::max(err, 1e-16), -0.7 / 5.0) *
                          std::pow(std::max(err_prev, 1e-16), 0.4 / 5.0);
      err_prev = std::max(err, 1e-16);
      double factor = std::clamp(grow, 0.2, 5.0);
      h = std::max(h, h_use) * factor;
    } else {
      const double shrink = std::clamp(0.9 * std::pow(err, -1.0 / 5.0), 0.2, 1.0);
      h = h_use * shrink;
      if (h < 1e-14) {
        result.status = FlowStatus::step_underflow;
        break;
      }
    }
  }

  if (t >= t_max) result.status = FlowStatus::reached_t_max;
  result.t = t;
  result.y = y;
  if (result.samples.empty() || result.samples.back().first != t)
    result.samples.emplace_back(t, y);
  return result;
}

FlowTrajectory integrate(const FlowProblem& problem, const FlowState& initial,
                         double t_max, const IntegrateOptions& options) {
  const int nm = problem.chart.metric_dim();
  const int nb = problem.chart.b_dim();
  Vec y0(nm + nb);
  y0.head(nm) = initial.metric_params;
  if (nb > 0) {
    if (initial.b_params.size() == nb)
      y0.tail(nb) = initial.b_params;
    else if (initial.b_params.size() == 0)
      y0.tail(nb).setZero();
    else
      throw DimensionMismatch("b parameter count does not match chart");
  }

  auto unpack = [&](double t, const Vec& y) {
    FlowState st;
    st.t = t;
    st.metric_params = y.head(nm);
    st.b_params = nb > 0 ? Vec(y.tail(nb)) : Vec();
    return st;
  };
  auto rhs = [&](double t, const Vec& y) { return problem.rhs(unpack(t, y)); };
  auto domain = [&](const Vec& y) {
    return problem.chart.metric_in_domain(y.head(nm));
  };

  const OdeResult ode = integrate_ode(rhs, domain, initial.t, y0, t_max, options);

  FlowTrajectory traj;
  traj.status = ode.status;
  traj.converged = ode.converged;
  traj.samples.reserve(ode.samples.size());
  double last_t = initial.t - 1.0;
  for (const auto& [t, y] : ode.samples) {
    if (t <= last_t) continue;  // keep t strictly increasing
    traj.samples.push_back(problem.diagnostics(unpack(t, y)));
    last_t = t;
  }
  return traj;
}

JacobianReport jacobian_eigen(const std::function<Vec(const Vec&)>& field, const Vec& point) {
  JacobianReport report;
  const int d = static_cast<int>(point.size());
  Mat j;
  for (int i = 0; i < d; ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(point[i]));
    Vec xp = point, xm = point;
    xp[i] += h;
    xm[i] -= h;
    const Vec fp = field(xp), fm = field(xm);
    if (j.size() == 0) j.resize(fp.size(), d);
    j.col(i) = (fp - fm) / (2 * h);
  }
  report.jacobian = j;
  Eigen::EigenSolver<Mat> es(j);
  report.eigenvalues = es.eigenvalues();
  report.asymptotically_stable = true;
  for (int i = 0; i < report.eigenvalues.size(); ++i)
    if (report.eigenvalues[i].real() >= 0) report.asymptotically_stable = false;
  return report;
}

}  // namespace grfhomog
