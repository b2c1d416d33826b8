#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "grfhomog/catalog.hpp"
#include "grfhomog/errors.hpp"
#include "grfhomog/flow.hpp"

using namespace grfhomog;

namespace {

std::vector<double> sorted_real_parts(const Eigen::VectorXcd& eig) {
  std::vector<double> out;
  for (int i = 0; i < eig.size(); ++i) out.push_back(eig[i].real());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("closed-form system values and domain") {
  const Eigen::Vector3d r = mpq_ode_rhs(1.0, 1.0, 1.0, 2, 1, 1.0);
  CHECK(r[0] == doctest::Approx(4.95).epsilon(1e-14));
  CHECK(r[1] == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(r[2] == doctest::Approx(3.04).epsilon(1e-14));
  CHECK_THROWS_AS(mpq_ode_rhs(1.0, -0.1, 1.0, 2, 1, 1.0), OutOfDomain);
}

TEST_CASE("fixed points of the closed-form system") {
  const Eigen::Vector3d f21 = fixed_point_mpq(2, 1, 1.0);
  CHECK((f21 - Eigen::Vector3d(10.0, 0.2, 0.8)).cwiseAbs().maxCoeff() < 1e-14);
  const Eigen::Vector3d f11 = fixed_point_mpq(1, 1, 1.0);
  CHECK((f11 - Eigen::Vector3d(4.0, 0.5, 0.5)).cwiseAbs().maxCoeff() < 1e-14);
  const Eigen::Vector3d f32 = fixed_point_mpq(3, 2, 0.5);
  CHECK((f32 - Eigen::Vector3d(13.0, 2.0 / 13.0, 4.5 / 13.0)).cwiseAbs().maxCoeff() <
        1e-14);

  for (auto [p, q, lambda] :
       {std::tuple{2, 1, 1.0}, std::tuple{3, 2, 0.5}, std::tuple{1, 1, 2.0}}) {
    const Eigen::Vector3d fp = fixed_point_mpq(p, q, lambda);
    CHECK(mpq_ode_rhs(fp[0], fp[1], fp[2], p, q, lambda).cwiseAbs().maxCoeff() <
          1e-14);
  }
}

TEST_CASE("linearization eigenvalues at the fixed point") {
  struct Case {
    int p, q;
    double lambda;
    std::vector<double> eig;
  };
  const std::vector<Case> cases = {
      {2, 1, 1.0, {-6.25, -5.0, -1.25}},
      {2, 1, 2.0, {-3.125, -2.5, -0.625}},
      {3, 2, 0.5, {-169.0 / 18.0, -6.5, -13.0 / 4.5}},
      {1, 1, 1.0, {-4.0, -2.0, -2.0}},
  };
  for (const auto& c : cases) {
    auto field = [&c](const Vec& y) {
      return Vec(mpq_ode_rhs(y[0], y[1], y[2], c.p, c.q, c.lambda));
    };
    const JacobianReport report =
        jacobian_eigen(field, Vec(fixed_point_mpq(c.p, c.q, c.lambda)));
    CHECK(report.asymptotically_stable);
    std::vector<double> expected = c.eig;
    std::sort(expected.begin(), expected.end());
    const std::vector<double> got = sorted_real_parts(report.eigenvalues);
    REQUIRE(got.size() == 3);
    for (int i = 0; i < 3; ++i)
      CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-8));
  }
}

TEST_CASE("chart-projected field equals the closed-form system on diagonal data") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unit(0.4, 2.5);
  for (auto [p, q] : {std::pair{2, 1}, std::pair{5, 2}}) {
    const MpqSpace m = mpq(p, q);
    const FlowChart chart = m.flow_chart();
    const AltForm h0 = m.harmonic_h(1.0);
    for (int trial = 0; trial < 25; ++trial) {
      FlowState state;
      state.metric_params = (Vec(3) << unit(rng), unit(rng), unit(rng)).finished();
      state.b_params = Vec::Zero(chart.b_dim());
      const Vec field = grf_vector_field(chart, state, h0);
      const Eigen::Vector3d closed =
          mpq_ode_rhs(state.metric_params[0], state.metric_params[1],
                      state.metric_params[2], p, q, 1.0);
      const double scale = std::max(1.0, closed.cwiseAbs().maxCoeff());
      CHECK((field.head(3) - closed).cwiseAbs().maxCoeff() < 1e-10 * scale);
      CHECK(field.tail(chart.b_dim()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("field values on the five-parameter chart with off-diagonal data") {
  const MpqSpace m = mpq(1, 1);
  const FlowChart chart = m.flow_chart();
  REQUIRE(chart.metric_dim() == 5);
  REQUIRE(chart.b_dim() == 4);
  FlowState state;
  state.metric_params = (Vec(5) << 2.0, 1.1, 0.9, 0.2, 0.1).finished();
  state.b_params = Vec::Zero(4);
  const Vec f = grf_vector_field(chart, state, m.harmonic_h(1.0));
  Vec expected(9);
  expected << 2.28157537347216, -0.518617021276596, -0.36436170212766,
      -0.501063829787234, -0.250531914893617, 0.0, 0.0, -1.27659574468085,
      -0.638297872340426;
  CHECK((f - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("the five-parameter stationary point is a saddle of the full flow") {
  const MpqSpace m = mpq(1, 1);
  const FlowChart chart = m.flow_chart();
  const AltForm h0 = m.harmonic_h(2.0);
  Vec x0(9);
  x0 << 8, 1, 1, 0, 0, 0, 0, 0, 0;
  auto field = [&](const Vec& y) {
    FlowState st;
    st.metric_params = y.head(5);
    st.b_params = y.tail(4);
    return grf_vector_field(chart, st, h0);
  };
  CHECK(field(x0).cwiseAbs().maxCoeff() < 1e-12);

  const JacobianReport report = jacobian_eigen(field, x0);
  CHECK_FALSE(report.asymptotically_stable);
  const double r = std::sqrt(13.0) / 2.0;
  std::vector<double> expected = {-1.0 - r, -1.0 - r, -2.0, -1.0, -1.0,
                                  0.0,      0.0,      -1.0 + r, -1.0 + r};
  std::sort(expected.begin(), expected.end());
  const std::vector<double> got = sorted_real_parts(report.eigenvalues);
  REQUIRE(got.size() == 9);
  for (int i = 0; i < 9; ++i)
    CHECK(std::abs(got[i] - expected[i]) < 1e-6);
}

TEST_CASE("flow chart assembles metrics and guards the domain") {
  const MpqSpace m = mpq(1, 1);
  const FlowChart chart = m.flow_chart();
  const Vec params = (Vec(5) << 2.0, 1.1, 0.9, 0.2, 0.1).finished();
  const Mat g = chart.metric_matrix(params);
  CHECK(g(0, 0) == 2.0);
  CHECK(g(1, 1) == 1.1);
  CHECK(g(3, 3) == 0.9);
  CHECK(g(1, 3) == 0.2);
  CHECK(g(2, 4) == 0.2);
  CHECK(g(1, 4) == 0.1);
  CHECK(g(2, 3) == -0.1);
  CHECK((g - g.transpose()).cwiseAbs().maxCoeff() == 0.0);

  CHECK(chart.metric_in_domain(params));
  CHECK_FALSE(chart.metric_in_domain((Vec(5) << 2, 1, 1, 1.2, 0).finished()));
  CHECK_FALSE(chart.metric_in_domain((Vec(5) << -1, 1, 1, 0, 0).finished()));
  CHECK_THROWS_AS(chart.metric_matrix(Vec::Ones(3)), DimensionMismatch);
}

TEST_CASE("integration converges to the diagonal fixed point") {
  const MpqSpace m = mpq(2, 1);
  const FlowProblem problem{m.flow_chart(), m.harmonic_h(1.0)};
  FlowState initial;
  initial.metric_params = (Vec(3) << 1.0, 0.3, 2.0).finished();
  initial.b_params = Vec::Zero(2);

  IntegrateOptions options;
  options.sample_times = {50.0, 100.0, 150.0, 200.0};
  const FlowTrajectory traj = integrate(problem, initial, 200.0, options);

  REQUIRE(!traj.samples.empty());
  const FlowSample& last = traj.samples.back();
  Vec target(3);
  target << 10.0, 0.2, 0.8;
  CHECK((last.state.metric_params - target).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(last.residual_norm < 1e-8);
  CHECK(last.scal == doctest::Approx(4.6875).epsilon(1e-7));
  CHECK(last.norm_h2 == doctest::Approx(18.75).epsilon(1e-7));

  for (std::size_t i = 1; i < traj.samples.size(); ++i)
    CHECK(traj.samples[i].state.t > traj.samples[i - 1].state.t);
  for (double t : options.sample_times) {
    bool hit = false;
    for (const auto& s : traj.samples) hit = hit || std::abs(s.state.t - t) < 1e-9;
    CHECK(hit);
  }
  for (const auto& s : traj.samples)
    CHECK(s.state.b_params.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("integration stops immediately at a stationary state") {
  const MpqSpace m = mpq(1, 1);
  const FlowProblem problem{m.flow_chart(), m.harmonic_h(2.0)};
  FlowState initial;
  initial.metric_params = (Vec(5) << 8.0, 1.0, 1.0, 0.0, 0.0).finished();
  initial.b_params = Vec::Zero(4);
  const FlowTrajectory traj = integrate(problem, initial, 50.0, {});
  CHECK(traj.converged);
  CHECK(traj.status == FlowStatus::converged);
  CHECK(traj.samples.back().state.t < 1.0);
}

TEST_CASE("generic five-parameter data reaches the cone boundary and stops") {
  const MpqSpace m = mpq(1, 1);
  const FlowProblem problem{m.flow_chart(), m.harmonic_h(1.0)};
  FlowState initial;
  initial.metric_params = (Vec(5) << 2.0, 1.1, 0.9, 0.2, 0.1).finished();
  initial.b_params = Vec::Zero(4);

  IntegrateOptions options;
  options.sample_times = {1.0, 5.0, 9.0};
  const FlowTrajectory traj = integrate(problem, initial, 10.0, options);

  CHECK(traj.status == FlowStatus::domain_exit);
  CHECK_FALSE(traj.converged);
  const double t_last = traj.samples.back().state.t;
  CHECK(t_last > 1.5);
  CHECK(t_last < 2.5);
  for (const auto& s : traj.samples) {
    CHECK(problem.chart.metric_in_domain(s.state.metric_params));
    CHECK(std::isfinite(s.residual_norm));
    CHECK(std::isfinite(s.scal));
  }
}

TEST_CASE("generic integrator accuracy on a scalar linear problem") {
  auto rhs = [](double, const Vec& y) { return Vec(-y); };
  const Vec y0 = Vec::Ones(1);

  IntegrateOptions options;
  options.sample_times = {1.0};
  const OdeResult adaptive = integrate_ode(rhs, nullptr, 0.0, y0, 2.0, options);
  CHECK(adaptive.status == FlowStatus::reached_t_max);
  CHECK(std::abs(adaptive.y[0] - std::exp(-2.0)) < 1e-9);
  bool hit = false;
  for (const auto& [t, y] : adaptive.samples)
    if (std::abs(t - 1.0) < 1e-9) {
      hit = true;
      CHECK(std::abs(y[0] - std::exp(-1.0)) < 1e-9);
    }
  CHECK(hit);

  IntegrateOptions fixed;
  fixed.fixed_step = 0.05;
  const OdeResult stepped = integrate_ode(rhs, nullptr, 0.0, y0, 2.0, fixed);
  CHECK(std::abs(stepped.y[0] - std::exp(-2.0)) < 1e-8);
}

TEST_CASE("generic integrator reports domain exits with the last valid state") {
  auto rhs = [](double, const Vec& y) { return Vec(-Vec::Ones(y.size())); };
  auto domain = [](const Vec& y) { return y[0] > 0.0; };
  const OdeResult run =
      integrate_ode(rhs, domain, 0.0, 0.5 * Vec::Ones(1), 2.0, {});
  CHECK(run.status == FlowStatus::domain_exit);
  CHECK(run.y[0] > 0.0);
  CHECK(run.t > 0.45);
  CHECK(run.t < 0.5 + 1e-6);
}

TEST_CASE("integration rejects initial data outside the domain") {
  const MpqSpace m = mpq(2, 1);
  const FlowProblem problem{m.flow_chart(), m.harmonic_h(1.0)};
  FlowState initial;
  initial.metric_params = (Vec(3) << -1.0, 0.3, 2.0).finished();
  initial.b_params = Vec::Zero(2);
  CHECK_THROWS_AS(integrate(problem, initial, 10.0, {}), OutOfDomain);
}
