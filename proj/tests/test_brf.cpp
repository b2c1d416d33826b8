#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "grfhomog/brf.hpp"
#include "grfhomog/catalog.hpp"
#include "grfhomog/errors.hpp"

using namespace grfhomog;

namespace {

Vec random_diagonal_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.4, 2.5);
  return (Vec(4) << unit(rng), unit(rng), unit(rng), unit(rng)).finished();
}

}  // namespace

TEST_CASE("residual blocks vanish at the reference solutions") {
  for (auto [p, q] : {std::pair{2, 1}, std::pair{3, 1}, std::pair{3, 2},
                      std::pair{5, 2}, std::pair{1, 1}}) {
    const MpqSpace m = mpq(p, q);
    const auto [g, h] = m.brf_chart().eval(m.brf_solution_params());
    const ResidualBlocks blocks = brf_residual(m.space(), g, h);
    CHECK(blocks.max_norm() < 1e-10);
    CHECK(blocks.stacked().size() == 15 + 5 + 10);
    CHECK(blocks.stacked().cwiseAbs().maxCoeff() == doctest::Approx(blocks.max_norm()));
  }
}

TEST_CASE("diagonal-chart polynomials are cleared-denominator tensor rows") {
  std::mt19937_64 rng(29);
  for (auto [p, q] : {std::pair{2, 1}, std::pair{3, 2}}) {
    const MpqSpace m = mpq(p, q);
    const Chart chart = m.brf_chart();
    const double s2 = double(p * p + q * q);
    for (int trial = 0; trial < 20; ++trial) {
      const Vec x = random_diagonal_params(rng);
      const double mu = x[0], a = x[1], b = x[2], h1 = x[3];
      const double a2 = a * a, b2 = b * b, mu2 = mu * mu;
      const double p1 = mu2 * mu2 * (a2 * a2 * p * p + b2 * b2 * q * q) -
                        4.0 * s2 * s2 * h1 * h1 * (q * q * b2 * b2 + p * p * a2 * a2);
      const double p2 = mu2 * (4.0 * a2 * s2 * s2 - mu2 * q * q) -
                        4.0 * s2 * s2 * q * q * h1 * h1;
      const double p4 = mu2 * (4.0 * b2 * s2 * s2 - mu2 * p * p) -
                        4.0 * s2 * s2 * p * p * h1 * h1;

      const auto [g, h] = chart.eval(x);
      const Mat sym = ricci(m.space(), g).components() -
                      0.25 * h_squared(m.space(), g, h).components();
      CHECK(std::abs(p1 - 8.0 * a2 * a2 * b2 * b2 * s2 * s2 * sym(0, 0)) <
            1e-9 * std::max(1.0, std::abs(p1)));
      CHECK(std::abs(p2 - 8.0 * a2 * s2 * s2 * mu2 * sym(1, 1)) <
            1e-10 * std::max(1.0, std::abs(p2)));
      CHECK(std::abs(p4 - 8.0 * b2 * s2 * s2 * mu2 * sym(3, 3)) <
            1e-10 * std::max(1.0, std::abs(p4)));

      REQUIRE(chart.solve_residual(x).size() == 3);
    }

    const Vec solution = m.brf_solution_params();
    CHECK(chart.solve_residual(solution).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(chart.gauge_row(solution)) < 1e-13);
  }
}

TEST_CASE("chart solve rows are fixed multiples of the raw polynomials") {
  const MpqSpace m = mpq(2, 1);
  const Chart chart = m.brf_chart();
  std::mt19937_64 rng(31);
  const double s2 = 5.0;
  Vec factors = Vec::Zero(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec x = random_diagonal_params(rng);
    const double mu = x[0], a = x[1], b = x[2], h1 = x[3];
    const double a2 = a * a, b2 = b * b, mu2 = mu * mu;
    Vec poly(3);
    poly << mu2 * mu2 * (a2 * a2 * 4.0 + b2 * b2) -
                4.0 * s2 * s2 * h1 * h1 * (b2 * b2 + 4.0 * a2 * a2),
        mu2 * (4.0 * a2 * s2 * s2 - mu2) - 4.0 * s2 * s2 * h1 * h1,
        mu2 * (4.0 * b2 * s2 * s2 - mu2 * 4.0) - 16.0 * s2 * s2 * h1 * h1;
    const Vec rows = chart.solve_residual(x);
    for (int i = 0; i < 3; ++i) {
      if (trial == 0) {
        factors[i] = rows[i] / poly[i];
        CHECK(std::isfinite(factors[i]));
      } else {
        CHECK(rows[i] == doctest::Approx(factors[i] * poly[i]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("polynomial system for the five-parameter chart") {
  const Vec xo = mpq(1, 1).brf_solution_params();
  CHECK(residual_polynomials_p_eq_q(xo).cwiseAbs().maxCoeff() < 1e-12);

  for (double t : {0.5, 1.0, 2.0}) {
    Vec gamma(5);
    gamma << 2.0 * std::sqrt(2.0) * t, t, t, 0.0, 2.0 * t * t;
    const double scale = std::pow(std::max(t, 1.0), 8);
    CHECK(residual_polynomials_p_eq_q(gamma).cwiseAbs().maxCoeff() < 1e-11 * scale);
  }

  Vec off(5);
  off << 2.0, 1.1, 0.9, 0.2, 1.0;
  CHECK(residual_polynomials_p_eq_q(off).cwiseAbs().maxCoeff() > 1e-2);
  CHECK_THROWS_AS(residual_polynomials_p_eq_q((Vec(5) << 1, 1, 1, 2, 1).finished()),
                  OutOfDomain);
}

TEST_CASE("solver reaches the diagonal solution from the reference initial") {
  const MpqSpace m = mpq(2, 1);
  const SolveReport report = solve(m.brf_chart(), (Vec(4) << 1, 1, 1, 1).finished());
  CHECK(report.converged);
  CHECK(report.status == SolveStatus::converged);
  CHECK(report.residual_norm < 1e-10);
  CHECK(report.iterations > 0);
  Vec expected(4);
  expected << std::sqrt(10.0), std::sqrt(0.2), std::sqrt(0.8), 1.0;
  CHECK((report.params - expected).cwiseAbs().maxCoeff() < 1e-7);
  CHECK(report.jacobian_rank == 3);
  CHECK(report.singular_values.size() == 4);
  CHECK(report.singular_values.minCoeff() <
        1e-6 * report.singular_values.maxCoeff());
}

TEST_CASE("solver reaches the five-parameter anchor point") {
  const MpqSpace m = mpq(1, 1);
  const SolveReport report =
      solve(m.brf_chart(), (Vec(5) << 3.0, 1.1, 0.9, 0.05, 1.8).finished());
  CHECK(report.converged);
  CHECK(report.residual_norm < 1e-10);
  CHECK((report.params - m.brf_solution_params()).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("pinned solve lands on the trace-normalized representative") {
  const MpqSpace m = mpq(2, 1);
  const Chart chart = m.brf_chart();
  SolveOptions options;
  options.pin_scale = true;
  const SolveReport report = solve(chart, (Vec(4) << 1, 1, 1, 1).finished(), options);
  CHECK(report.converged);
  CHECK(report.residual_norm < 1e-10);
  const auto [g, h] = chart.eval(report.raw_params);
  CHECK(form_norm_sq(m.space(), g, h) == doctest::Approx(18.75).epsilon(1e-9));
  Vec expected(4);
  expected << std::sqrt(10.0), std::sqrt(0.2), std::sqrt(0.8), 1.0;
  Vec folded = report.raw_params;
  folded[3] = std::abs(folded[3]);
  CHECK((folded - expected).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("multistart is deterministic and thread-count independent") {
  const MpqSpace m = mpq(2, 1);
  const Chart chart = m.brf_chart();
  const auto a = solve_multistart(chart, 8, 11, SolveOptions{}, 1);
  const auto b = solve_multistart(chart, 8, 11, SolveOptions{}, 4);
  REQUIRE(a.size() == 8);
  REQUIRE(b.size() == 8);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].converged);
    CHECK((a[i].params - b[i].params).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a[i].residual_norm == b[i].residual_norm);
  }
}

TEST_CASE("multistart reports stay on the solution ray for p = q") {
  const MpqSpace m = mpq(1, 1);
  const Vec xo = m.brf_solution_params();
  const auto reports = solve_multistart(m.brf_chart(), 6, 7);
  for (const auto& r : reports) {
    CHECK(r.converged);
    Vec folded = r.params;
    folded[3] = std::abs(folded[3]);
    CHECK((folded - xo).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("solve rejects out-of-domain initials") {
  const MpqSpace m = mpq(2, 1);
  CHECK_THROWS_AS(solve(m.brf_chart(), (Vec(4) << -1, 1, 1, 1).finished()),
                  OutOfDomain);
}

TEST_CASE("finite-difference differential of the polynomial map") {
  const MpqSpace m = mpq(1, 1);
  const Chart chart = m.brf_chart();
  const auto report = differential_at(
      chart, m.brf_solution_params(),
      [](const Vec& x) { return Vec(residual_polynomials_p_eq_q(x)); });
  CHECK(report.rank == 4);
  CHECK(report.jacobian.rows() == 4);
  CHECK(report.jacobian.cols() == 5);
  CHECK(report.singular_values.size() == 4);
  CHECK(report.jacobian(0, 0) == doctest::Approx(128.0 * std::sqrt(2.0)).epsilon(1e-6));
  CHECK(report.jacobian(3, 3) == doctest::Approx(-192.0).epsilon(1e-6));

  Vec tangent(5);
  tangent << 2.0 * std::sqrt(2.0), 1.0, 1.0, 0.0, 4.0;
  CHECK((report.jacobian * tangent).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("gauge rotation folds the off-diagonal pair into its first slot") {
  const Vec rotated = gauge_normalize((Vec(5) << 1, 1, 1, 0.3, 0.4).finished());
  CHECK(rotated[3] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(rotated[4] == 0.0);
  CHECK(rotated[0] == 1.0);
}

TEST_CASE("normalize maps arbitrary ray points to the reference representative") {
  const MpqSpace m = mpq(2, 1);
  const Chart chart = m.brf_chart();
  const Vec solution = m.brf_solution_params();
  for (double t : {0.5, 2.0, 3.0}) {
    Vec ray(4);
    ray << t * solution[0], t * solution[1], t * solution[2],
        t * t * solution[3];
    CHECK((chart.normalize(ray) - solution).cwiseAbs().maxCoeff() < 1e-12);
  }

  const MpqSpace m11 = mpq(1, 1);
  const Chart chart11 = m11.brf_chart();
  const Vec xo = m11.brf_solution_params();
  Vec ray(5);
  const double t = 1.7;
  ray << t * xo[0], t * xo[1], t * xo[2], t * t * xo[3], t * t * xo[4];
  CHECK((chart11.normalize(ray) - xo).cwiseAbs().maxCoeff() < 1e-12);
}
