#include "grfhomog/brf.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "grfhomog/errors.hpp"

namespace grfhomog {

Vec ResidualBlocks::stacked() const {
  const int n = sym.dim();
  Vec out(n * (n + 1) / 2 + dh.size() + delta_h.size());
  int pos = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) out[pos++] = sym(i, j);
  for (int t = 0; t < dh.size(); ++t) out[pos++] = dh.coeff(t);
  for (int t = 0; t < delta_h.size(); ++t) out[pos++] = delta_h.coeff(t);
  return out;
}

double ResidualBlocks::max_norm() const {
  return std::max({sym.max_abs(), dh.max_abs(), delta_h.max_abs()});
}

ResidualBlocks brf_residual(const ReductiveSpace& s, const Metric& g, const AltForm& h) {
  if (h.degree() != 3) throw DimensionMismatch("torsion must be a 3-form");
  Bilinear sym(ricci(s, g).components() - 0.25 * h_squared(s, g, h).components());
  // top-degree torsion has no dH block (the n+1 space is zero)
  AltForm dh = h.degree() == s.dim_m() ? AltForm(s.dim_m(), h.degree() + 1)
                                       : koszul_d(s, h);
  return {std::move(sym), std::move(dh), codifferential(s, g, h)};
}

Eigen::Vector4d residual_polynomials_p_eq_q(const Vec& params) {
  if (params.size() != 5)
    throw DimensionMismatch("expected parameters (mu, a, b, c, h1)");
  const double mu = params[0], a = params[1], b = params[2], c = params[3],
               h1 = params[4];
  const double a2 = a * a, b2 = b * b, c2 = c * c;
  const double m2 = mu * mu, m4 = m2 * m2, h2 = h1 * h1;
  if (!(mu > 0 && a > 0 && b > 0 && a2 * b2 - c2 > 0 && h1 != 0))
    throw OutOfDomain("parameters outside {mu,a,b>0, a^2 b^2 > c^2, h1 != 0}");
  const double a4 = a2 * a2, b4 = b2 * b2;
  const double ab = a2 * b2;
  Eigen::Vector4d p;
  p[0] = (a4 + b4 - 2 * c2) * (m4 * (ab + c2) - 16 * h2 * (ab - c2)) -
         128 * c2 * (a4 * b4 - c2 * c2);
  p[1] = (ab + c2) * (ab + c2) * (16 * m2 * (ab - c2) + 64 * a2 * c2 - b2 * m4) -
         16 * h2 * (a4 * b4 * b2 + c2 * (a4 * a2 + a2 * b4 - 2 * a2 * c2 - b2 * c2));
  p[2] = (ab + c2) * (ab + c2) * (16 * m2 * (ab - c2) + 64 * b2 * c2 - a2 * m4) -
         16 * h2 * (a4 * a2 * b4 + c2 * (b4 * b2 + a4 * b2 - 2 * b2 * c2 - a2 * c2));
  p[3] = c * ((ab + c2) * (ab + c2) * (64 * ab - m4) -
              16 * h2 * (ab * (a2 + b2) * (a2 + b2) - (ab + c2) * (ab + c2)));
  return p;
}

namespace {

double pin_level(const Chart& chart, const SolveOptions& options) {
  if (!options.pin_scale) return 0.0;
  return options.pin_value != 0.0 ? options.pin_value : chart.scale_pin;
}

Vec tensor_residual(const Chart& chart, const Vec& params) {
  auto [g, h] = chart.eval(params);
  return brf_residual(*chart.space, g, h).stacked();
}

Vec append_row(Vec base, double extra) {
  Vec out(base.size() + 1);
  out.head(base.size()) = base;
  out[base.size()] = extra;
  return out;
}

// The system the solver iterates on: the chart's solve residual (or the
// stacked tensor residual), plus one scale-fixing row.  Without that row the
// zero set is a union of rays and the least-squares landscape has minima at
// infinity (collapsed or blown-up metrics with slowly decaying residual), so
// descent from generic points escapes instead of converging.
Vec solve_system(const Chart& chart, const Vec& params, const SolveOptions& options) {
  Vec base = chart.solve_residual ? chart.solve_residual(params)
                                  : tensor_residual(chart, params);
  const double level = pin_level(chart, options);
  if (level != 0.0) {
    auto [g, h] = chart.eval(params);
    return append_row(
        std::move(base),
        (g.inverse() * h_squared(*chart.space, g, h).components()).trace() - level);
  }
  if (chart.gauge_row) return append_row(std::move(base), chart.gauge_row(params));
  return base;
}

Mat central_jacobian(const std::function<Vec(const Vec&)>& map, const Vec& x,
                     const std::function<bool(const Vec&)>& domain, double step_scale) {
  const int d = static_cast<int>(x.size());
  Mat j;
  for (int i = 0; i < d; ++i) {
    double h = step_scale * std::max(1.0, std::abs(x[i]));
    Vec xp = x, xm = x;
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    if (domain) {
      // x is interior, so a small enough stencil always fits
      int shrink = 0;
      while ((!domain(xp) || !domain(xm)) && shrink < 60) {
        h *= 0.5;
        xp[i] = x[i] + h;
        xm[i] = x[i] - h;
        ++shrink;
      }
      if (shrink == 60)
        throw OutOfDomain("finite-difference stencil leaves the chart domain");
    }
    const Vec fp = map(xp), fm = map(xm);
    if (j.size() == 0) j.resize(fp.size(), d);
    j.col(i) = (fp - fm) / (2 * h);
  }
  return j;
}

int svd_rank(const Vec& sigma, double rtol) {
  if (sigma.size() == 0) return 0;
  const double cut = rtol * sigma[0];
  int rank = 0;
  for (int i = 0; i < sigma.size(); ++i)
    if (sigma[i] > cut) ++rank;
  return rank;
}

}  // namespace

namespace {

struct LmAttempt {
  Vec x;
  double system_norm = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::max_iterations;
};

LmAttempt lm_attempt(const Chart& chart, const Vec& start, const SolveOptions& options,
                     const std::function<Vec(const Vec&)>& residual) {
  LmAttempt out;
  Vec x = start;
  Vec r = residual(x);
  double cost = r.squaredNorm();
  double lm_lambda = 1e-3;
  out.status = SolveStatus::max_iterations;

  if (r.norm() < options.tol) {
    out.status = SolveStatus::converged;
  } else {
    for (; out.iterations < options.max_iterations; ++out.iterations) {
      const Mat j = central_jacobian(residual, x, chart.domain_check, 1e-6);
      const Mat jtj = j.transpose() * j;
      const Vec jtr = j.transpose() * r;
      if (jtr.cwiseAbs().maxCoeff() < 1e-16 * (1.0 + cost)) {
        out.status =
            r.norm() < options.tol ? SolveStatus::converged : SolveStatus::stalled;
        break;
      }

      bool accepted = false;
      bool boundary_trapped = false;
      for (int attempt = 0; attempt < 60 && !accepted; ++attempt) {
        Mat damped = jtj;
        for (int i = 0; i < damped.rows(); ++i)
          damped(i, i) += lm_lambda * std::max(jtj(i, i), 1e-12);
        Vec step = damped.ldlt().solve(-jtr);

        // keep the trial point inside the open domain
        int halvings = 0;
        Vec trial = x + step;
        while (!chart.domain_check(trial) && halvings < 60) {
          step *= 0.5;
          trial = x + step;
          ++halvings;
        }
        if (halvings == 60) {
          boundary_trapped = true;
          break;
        }

        const Vec r_trial = residual(trial);
        const double cost_trial = r_trial.squaredNorm();
        if (cost_trial < cost) {
          x = trial;
          r = r_trial;
          cost = cost_trial;
          lm_lambda = std::max(lm_lambda / 3.0, 1e-14);
          accepted = true;
        } else {
          lm_lambda *= 4.0;
          if (lm_lambda > 1e12) break;
        }
      }

      if (r.norm() < options.tol) {
        out.status = SolveStatus::converged;
        ++out.iterations;
        break;
      }
      if (!accepted) {
        out.status =
            boundary_trapped ? SolveStatus::left_domain : SolveStatus::stalled;
        break;
      }
    }
  }

  out.x = x;
  out.system_norm = r.norm();
  return out;
}

}  // namespace

SolveReport solve(const Chart& chart, const Vec& initial, const SolveOptions& options) {
  if (initial.size() != chart.dim())
    throw DimensionMismatch("initial point does not match chart dimension");
  if (!chart.domain_check(initial))
    throw OutOfDomain("initial point outside the chart domain");

  auto residual = [&](const Vec& x) { return solve_system(chart, x, options); };

  LmAttempt best = lm_attempt(chart, initial, options, residual);
  int total_iterations = best.iterations;
  if (best.status != SolveStatus::converged && chart.restart_point) {
    // Reseeding from the stall point clears the spurious local minima of the
    // least-squares cost (torsion-free critical points, boundary stalls).
    std::mt19937_64 rng(0x5eedULL);
    Vec stall = best.x;
    for (int k = 0; k < options.restarts; ++k) {
      const Vec start = chart.restart_point(stall, rng);
      if (!chart.domain_check(start)) break;
      LmAttempt next = lm_attempt(chart, start, options, residual);
      total_iterations += next.iterations;
      stall = next.x;
      if (next.system_norm < best.system_norm) best = std::move(next);
      if (best.status == SolveStatus::converged) break;
    }
  }

  SolveReport report;
  report.raw_params = best.x;
  report.params = (options.apply_normalize && chart.normalize) ? chart.normalize(best.x)
                                                               : best.x;
  report.residual_norm = tensor_residual(chart, best.x).norm();
  report.iterations = total_iterations;
  report.converged = best.status == SolveStatus::converged;
  report.status = best.status;
  auto tensor = [&](const Vec& x) { return tensor_residual(chart, x); };
  const Mat j = central_jacobian(tensor, best.x, chart.domain_check, 1e-6);
  Eigen::JacobiSVD<Mat> svd(j);
  report.singular_values = svd.singularValues();
  report.jacobian_rank = svd_rank(report.singular_values, 1e-6);
  return report;
}

std::vector<SolveReport> solve_multistart(const Chart& chart, int count, std::uint64_t seed,
                                          const SolveOptions& options, int threads) {
  if (!chart.sample_initial)
    throw ConfigError("chart does not provide an initial-point sampler");
  std::vector<SolveReport> reports(count);
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, count));

  // Per-index generators keep the result independent of scheduling.
  auto run = [&](int index) {
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    const Vec init = chart.sample_initial(rng);
    reports[index] = solve(chart, init, options);
  };

  if (threads == 1) {
    for (int i = 0; i < count; ++i) run(i);
  } else {
    std::atomic<int> next(0);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&]() {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) run(i);
      });
    for (auto& th : pool) th.join();
  }
  return reports;
}

DifferentialReport differential_at(const Chart& chart, const Vec& params,
                                   const std::function<Vec(const Vec&)>& map,
                                   const DifferentialOptions& options) {
  if (!chart.domain_check(params)) throw OutOfDomain("point outside the chart domain");
  DifferentialReport report;
  report.jacobian = central_jacobian(map, params, chart.domain_check, options.step_scale);
  Eigen::JacobiSVD<Mat> svd(report.jacobian);
  report.singular_values = svd.singularValues();
  report.rank = svd_rank(report.singular_values, options.rank_rtol);
  return report;
}

Vec gauge_normalize(const Vec& params) {
  if (params.size() < 5)
    throw DimensionMismatch("expected at least (mu, a, b, c, s)");
  Vec out = params;
  out[3] = std::hypot(params[3], params[4]);
  out[4] = 0.0;
  return out;
}

}  // namespace grfhomog
