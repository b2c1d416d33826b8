#include "grfhomog/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "grfhomog/curvature.hpp"
#include "grfhomog/json_io.hpp"

namespace grfhomog {

namespace {

void check(std::vector<CheckResult>& out, std::string name, double computed,
           double expected, double tol) {
  const bool pass = std::abs(computed - expected) <= tol;
  out.push_back({std::move(name), computed, expected, tol, pass});
}

// Indicator check: computed is 1 when the quantity exceeds the threshold.
void check_nonzero(std::vector<CheckResult>& out, std::string name, double value,
                   double threshold) {
  check(out, std::move(name) + " (1 = above " + fmt_double(threshold) + ")",
        value > threshold ? 1.0 : 0.0, 1.0, 0.0);
}

Vec basis_vec(int n, int i) {
  Vec e = Vec::Zero(n);
  e[i] = 1.0;
  return e;
}

void mpq_structure_checks(std::vector<CheckResult>& out, const MpqSpace& m) {
  const ReductiveSpace& s = m.space();
  const LieAlgebra& l = s.algebra();
  const double p = m.p(), q = m.q();
  const double s2 = p * p + q * q;

  const Mat b = killing_form(l);
  check(out, "killing(e2,e2)", b(1, 1), -1.0, 1e-12);
  check(out, "killing(e1,e1)", b(0, 0), -2.0 * s2, 1e-12);
  check(out, "killing(e1,e6)", b(0, 5), 0.0, 1e-12);

  const Vec ad62 = l.bracket(basis_vec(6, 5), basis_vec(6, 1));
  check(out, "bracket(e6,e2) e3-coefficient", ad62[2], p, 1e-12);
  check(out, "bracket(e6,e2) off-component max",
        (ad62 - p * basis_vec(6, 2)).cwiseAbs().maxCoeff(), 0.0, 1e-12);
  const Vec ad64 = l.bracket(basis_vec(6, 5), basis_vec(6, 3));
  check(out, "bracket(e6,e4) e5-coefficient", ad64[4], q, 1e-12);

  const Vec br23 = l.bracket(basis_vec(6, 1), basis_vec(6, 2));
  check(out, "bracket(e2,e3) e1-coefficient", br23[0], q / (2.0 * s2), 1e-12);
  check(out, "bracket(e2,e3) e6-coefficient", br23[5], p / (2.0 * s2), 1e-12);
  check(out, "unimodular", l.is_unimodular(1e-12) ? 1.0 : 0.0, 1.0, 0.0);
}

void mpq_form_checks(std::vector<CheckResult>& out, const MpqSpace& m,
                     std::mt19937_64& rng) {
  const ReductiveSpace& s = m.space();
  const double p = m.p(), q = m.q();
  const double s2 = p * p + q * q;
  std::uniform_real_distribution<double> unit(0.5, 2.0);

  // exterior differential of the generic torsion form
  const double h1 = unit(rng), h2 = unit(rng);
  const AltForm h_generic =
      AltForm::from_terms(5, 3, {{{0, 1, 2}, h1}, {{0, 3, 4}, h2}});
  const AltForm dh = koszul_d(s, h_generic);
  check(out, "dH(e2,e3,e4,e5) for generic (h1,h2)", dh.value({1, 2, 3, 4}),
        (p * h1 - q * h2) / (2.0 * s2), 1e-12);
  const AltForm dh_closed = koszul_d(s, m.harmonic_h(1.3));
  check(out, "dH max at (h1,h2) = lambda (q,p)", dh_closed.max_abs(), 0.0, 1e-12);

  const double mu = unit(rng), a = unit(rng), bb = unit(rng);
  const Metric g_diag(
      (Vec(5) << mu * mu, a * a, a * a, bb * bb, bb * bb).finished().asDiagonal());

  // volume form and the double star
  AltForm one(5, 0);
  one.coeff(0) = 1.0;
  const AltForm vol = hodge_star(s, g_diag, one);
  check(out, "*1 coefficient e12345", vol.coeff(0), mu * a * a * bb * bb, 1e-12);
  const AltForm hss = hodge_star(s, g_diag, hodge_star(s, g_diag, h_generic));
  check(out, "** on 3-forms, max deviation", (hss - h_generic).max_abs(), 0.0, 1e-12);

  if (m.p() != m.q()) {
    const AltForm star = hodge_star(s, g_diag, h_generic);
    check(out, "*H coefficient e23", star.value({1, 2}),
          a * a / (mu * bb * bb) * h2, 1e-12);
    check(out, "*H coefficient e45", star.value({3, 4}),
          bb * bb / (mu * a * a) * h1, 1e-12);
    AltForm star_rest = star;
    star_rest.coeff({1, 2}) = 0.0;
    star_rest.coeff({3, 4}) = 0.0;
    check(out, "*H other components max", star_rest.max_abs(), 0.0, 1e-12);

    const AltForm delta = codifferential(s, g_diag, m.harmonic_h(0.7));
    check(out, "deltaH max on the diagonal chart", delta.max_abs(), 0.0, 1e-12);
  } else {
    const double c = 0.6 * a * bb, h3 = unit(rng), h4 = unit(rng);
    Mat gmat = g_diag.components();
    gmat(1, 3) = gmat(3, 1) = c;
    gmat(2, 4) = gmat(4, 2) = c;
    const Metric g(gmat);
    const AltForm h = AltForm::from_terms(5, 3,
                                          {{{0, 1, 2}, h1},
                                           {{0, 3, 4}, h1},
                                           {{0, 1, 4}, h3},
                                           {{0, 2, 3}, -h3},
                                           {{0, 1, 3}, h4},
                                           {{0, 2, 4}, h4}});
    const AltForm star = hodge_star(s, g, h);
    const double den = mu * (a * a * bb * bb - c * c);
    check(out, "*H coefficient e23", star.value({1, 2}),
          (h1 * (a * a * a * a + c * c) - 2.0 * a * a * c * h3) / den, 1e-12);
    check(out, "*H coefficient e45", star.value({3, 4}),
          (h1 * (bb * bb * bb * bb + c * c) - 2.0 * bb * bb * c * h3) / den, 1e-12);
    check(out, "*H coefficient e24", star.value({1, 3}), -h4 / mu, 1e-12);
    check(out, "*H coefficient e35", star.value({2, 4}), -h4 / mu, 1e-12);
    const double mixed =
        (h3 * (a * a * bb * bb + c * c) - c * h1 * (a * a + bb * bb)) / den;
    check(out, "*H coefficient e25", star.value({1, 4}), -mixed, 1e-12);
    check(out, "*H coefficient e34", star.value({2, 3}), mixed, 1e-12);

    const AltForm dstar = koszul_d(s, star);
    check(out, "d*H coefficient e125", dstar.value({0, 1, 4}), 2.0 * h4 / mu, 1e-12);
    check(out, "d*H coefficient e124", dstar.value({0, 1, 3}), -2.0 * mixed, 1e-12);

    // coclosedness at the printed (h3, h4) and failure away from it
    const double h3_star = c * h1 * (a * a + bb * bb) / (a * a * bb * bb + c * c);
    const AltForm h_harm = AltForm::from_terms(5, 3,
                                               {{{0, 1, 2}, h1},
                                                {{0, 3, 4}, h1},
                                                {{0, 1, 4}, h3_star},
                                                {{0, 2, 3}, -h3_star}});
    check(out, "deltaH max at h3 = c h1 (a^2+b^2)/(a^2 b^2+c^2), h4 = 0",
          codifferential(s, g, h_harm).max_abs(), 0.0, 1e-10);
    check_nonzero(out, "deltaH with h3 detuned",
                  codifferential(s, g, h).max_abs(), 1e-6);
  }
}

void mpq_table_checks(std::vector<CheckResult>& out, const MpqSpace& m,
                      std::mt19937_64& rng) {
  const ReductiveSpace& s = m.space();
  const double p = m.p(), q = m.q();
  const double s2 = p * p + q * q;
  std::uniform_real_distribution<double> unit(0.5, 2.0);
  const double mu = unit(rng), a = unit(rng), b = unit(rng);

  if (m.p() != m.q()) {
    const Metric g(
        (Vec(5) << mu * mu, a * a, a * a, b * b, b * b).finished().asDiagonal());
    const Mat ric = ricci(s, g).components();
    const double a4 = a * a * a * a, b4 = b * b * b * b;
    check(out, "Ric(e1,e1) closed form", ric(0, 0),
          mu * mu * mu * mu * (a4 * p * p + b4 * q * q) / (8.0 * a4 * b4 * s2 * s2),
          1e-12 * std::max(1.0, std::abs(ric(0, 0))));
    check(out, "Ric(e2,e2) closed form", ric(1, 1),
          (4.0 * a * a * s2 * s2 - mu * mu * q * q) / (8.0 * a * a * s2 * s2), 1e-12);
    check(out, "Ric(e4,e4) closed form", ric(3, 3),
          (4.0 * b * b * s2 * s2 - mu * mu * p * p) / (8.0 * b * b * s2 * s2), 1e-12);
    check(out, "Ric off-diagonal max",
          (ric - Mat(ric.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 0.0, 1e-12);

    const Mat h2m = h_squared(s, g, m.harmonic_h(1.0)).components();
    check(out, "H2(e1,e1) closed form", h2m(0, 0),
          2.0 * (a4 * p * p + b4 * q * q) / (a4 * b4),
          1e-12 * std::max(1.0, std::abs(h2m(0, 0))));
    check(out, "H2(e2,e2) closed form", h2m(1, 1), 2.0 * q * q / (a * a * mu * mu),
          1e-12);
    check(out, "H2(e4,e4) closed form", h2m(3, 3), 2.0 * p * p / (b * b * mu * mu),
          1e-12);
  } else {
    const double c = 0.55 * a * b, h1 = unit(rng);
    Mat gmat = (Vec(5) << mu * mu, a * a, a * a, b * b, b * b).finished().asDiagonal();
    gmat(1, 3) = gmat(3, 1) = c;
    gmat(2, 4) = gmat(4, 2) = c;
    const Metric g(gmat);
    const double a2 = a * a, b2 = b * b, c2 = c * c, mu2 = mu * mu;
    const double dm = a2 * b2 - c2, dp = a2 * b2 + c2;

    const Mat ric = ricci(s, g).components();
    check(out, "Ric(e1,e1) closed form", ric(0, 0),
          (2.0 * c2 * (64.0 * c2 - 64.0 * a2 * b2 - mu2 * mu2) +
           mu2 * mu2 * (a2 * a2 + b2 * b2)) /
              (32.0 * dm * dm),
          1e-11 * std::max(1.0, std::abs(ric(0, 0))));
    check(out, "Ric(e2,e2) closed form", ric(1, 1),
          (64.0 * a2 * c2 + mu2 * (16.0 * a2 * b2 - b2 * mu2 - 16.0 * c2)) /
              (32.0 * mu2 * dm),
          1e-12);
    check(out, "Ric(e4,e4) closed form", ric(3, 3),
          (64.0 * b2 * c2 + mu2 * (16.0 * a2 * b2 - a2 * mu2 - 16.0 * c2)) /
              (32.0 * mu2 * dm),
          1e-12);
    check(out, "Ric(e2,e4) closed form", ric(1, 3),
          c * (64.0 * a2 * b2 - mu2 * mu2) / (32.0 * mu2 * dm), 1e-12);

    const double h3 = c * h1 * (a2 + b2) / dp;
    const AltForm h = AltForm::from_terms(5, 3,
                                          {{{0, 1, 2}, h1},
                                           {{0, 3, 4}, h1},
                                           {{0, 1, 4}, h3},
                                           {{0, 2, 3}, -h3}});
    const Mat h2m = h_squared(s, g, h).components();
    const double hh = 2.0 * h1 * h1;
    check(out, "H2(e1,e1) closed form", h2m(0, 0),
          hh * (a2 * a2 + b2 * b2 - 2.0 * c2) / (dm * dp), 1e-12);
    check(out, "H2(e2,e2) closed form", h2m(1, 1),
          hh * (a2 * c2 * (a2 * a2 + b2 * b2) - c2 * c2 * (2.0 * a2 + b2) +
                a2 * a2 * b2 * b2 * b2) /
              (mu2 * dm * dp * dp),
          1e-12);
    check(out, "H2(e4,e4) closed form", h2m(3, 3),
          hh * (b2 * c2 * (a2 * a2 + b2 * b2) - c2 * c2 * (a2 + 2.0 * b2) +
                a2 * a2 * a2 * b2 * b2) /
              (mu2 * dm * dp * dp),
          1e-12);
    check(out, "H2(e2,e4) closed form", h2m(1, 3),
          c * hh * (a2 * b2 * (a2 * a2 + a2 * b2 + b2 * b2 - 2.0 * c2) - c2 * c2) /
              (mu2 * dm * dp * dp),
          1e-12);
  }
}

void mpq_brf_checks(std::vector<CheckResult>& out, const MpqSpace& m) {
  const ReductiveSpace& s = m.space();
  const Chart chart = m.brf_chart();
  const Vec solution = m.brf_solution_params();
  const auto [g, h] = chart.eval(solution);

  check(out, "BRF residual at the reference solution",
        brf_residual(s, g, h).max_norm(), 0.0, 1e-10);
  check(out, "isotropy invariance defect of the solution metric",
        isotropy_invariance_check(s, g.components()).defect, 0.0, 1e-10);
  check(out, "isotropy invariance defect of the solution torsion",
        isotropy_invariance_check(s, h).defect, 0.0, 1e-10);

  check(out, "Scal - 1/4 trace H2 at the solution",
        scalar(s, g) - 0.25 * form_norm_sq(s, g, h), 0.0, 1e-10);

  const auto harmonic = is_harmonic(s, g, h);
  check(out, "dH norm at the solution", harmonic.d_norm, 0.0, 1e-10);
  check(out, "deltaH norm at the solution", harmonic.delta_norm, 0.0, 1e-10);
  const double pq = static_cast<double>(m.p()) * m.q();
  const AltForm sigma = fundamental_four_form(s, g, h);
  if (m.p() != m.q()) {
    check(out, "sigma_H coefficient e2345", sigma.value({1, 2, 3, 4}),
          pq / (2.0 * (m.p() * m.p() + m.q() * m.q())), 1e-12);
  } else {
    check_nonzero(out, "sigma_H max (torsion not parallel)", sigma.max_abs(), 1e-3);
  }

  check_nonzero(out, "Bismut curvature max (non-flatness)",
                curvature_tensor(s, bismut_nomizu(s, g, h)).max_abs(), 1e-3);
  const Mat ric_contracted =
      ricci_from_curvature(s, g, curvature_tensor(s, levi_civita_nomizu(s, g)))
          .components();
  check(out, "Ricci vs curvature contraction",
        (ric_contracted - ricci(s, g).components()).cwiseAbs().maxCoeff(), 0.0, 1e-9);

  if (m.p() == m.q()) {
    check(out, "polynomials at x_o",
          residual_polynomials_p_eq_q(solution).cwiseAbs().maxCoeff(), 0.0, 1e-9);
    for (double t : {0.5, 2.0}) {
      Vec gamma(5);
      gamma << 2.0 * std::sqrt(2.0) * t, t, t, 0.0, 2.0 * t * t;
      const double scale = std::pow(std::max(t, 1.0), 8);
      check(out, "polynomials on the scaling curve, t = " + fmt_double(t),
            residual_polynomials_p_eq_q(gamma).cwiseAbs().maxCoeff(), 0.0,
            1e-9 * scale);
    }

    const auto diff = differential_at(
        chart, solution, [](const Vec& x) { return Vec(residual_polynomials_p_eq_q(x)); });
    Mat expected(4, 5);
    expected << 128.0 * std::sqrt(2.0), 0, 0, 0, -128.0,
                0, 256.0, 0, 0, -64.0,
                0, 0, 256.0, 0, -64.0,
                0, 0, 0, -192.0, 0;
    check(out, "differential matrix vs printed entries",
          (diff.jacobian - expected).cwiseAbs().maxCoeff(), 0.0,
          1e-6 * expected.cwiseAbs().maxCoeff());
    check(out, "differential rank", diff.rank, 4.0, 0.0);
    Vec tangent(5);
    tangent << 2.0 * std::sqrt(2.0), 1.0, 1.0, 0.0, 4.0;
    check(out, "scaling-curve tangent in the kernel",
          (diff.jacobian * tangent).norm(), 0.0, 1e-5);

    const Vec rotated = gauge_normalize((Vec(5) << 1, 1, 1, 0.3, 0.4).finished());
    check(out, "gauge_normalize c entry", rotated[3], 0.5, 1e-15);
    check(out, "gauge_normalize s entry", rotated[4], 0.0, 0.0);
  }

  Vec initial;
  if (m.p() == m.q())
    initial = (Vec(5) << 3.0, 1.1, 0.9, 0.05, 1.8).finished();
  else
    initial = (Vec(4) << 1.0, 1.0, 1.0, 1.0).finished();
  const SolveReport report = solve(chart, initial);
  check(out, "solver converged from the reference initial",
        report.converged ? 1.0 : 0.0, 1.0, 0.0);
  check(out, "solver residual", report.residual_norm, 0.0, 1e-10);
  check(out, "solver distance to the normalized solution",
        (report.params - solution).cwiseAbs().maxCoeff(), 0.0, 1e-5);
}

void mpq_flow_checks(std::vector<CheckResult>& out, const MpqSpace& m,
                     std::mt19937_64& rng) {
  const int p = m.p(), q = m.q();
  const double lambda = 1.0;
  const Eigen::Vector3d fp = fixed_point_mpq(p, q, lambda);
  check(out, "mpq_ode_rhs at the fixed point",
        mpq_ode_rhs(fp[0], fp[1], fp[2], p, q, lambda).cwiseAbs().maxCoeff(), 0.0,
        1e-14);

  const FlowChart chart = m.flow_chart();
  const AltForm h0 = m.harmonic_h(lambda);
  FlowState state;
  state.metric_params = Vec::Zero(chart.metric_dim());
  state.metric_params.head(3) = fp;
  state.b_params = Vec::Zero(chart.b_dim());
  check(out, "grf_vector_field at the fixed point",
        grf_vector_field(chart, state, h0).cwiseAbs().maxCoeff(), 0.0, 1e-12);

  std::uniform_real_distribution<double> unit(0.5, 2.0);
  FlowState random_state;
  random_state.metric_params = Vec::Zero(chart.metric_dim());
  for (int i = 0; i < 3; ++i) random_state.metric_params[i] = unit(rng);
  random_state.b_params = Vec::Zero(chart.b_dim());
  const Vec field = grf_vector_field(chart, random_state, h0);
  const Eigen::Vector3d closed =
      mpq_ode_rhs(random_state.metric_params[0], random_state.metric_params[1],
                  random_state.metric_params[2], p, q, lambda);
  check(out, "grf_vector_field vs closed-form system",
        (field.head(3) - closed).cwiseAbs().maxCoeff(), 0.0,
        1e-10 * std::max(1.0, closed.cwiseAbs().maxCoeff()));
  if (chart.b_dim() > 0)
    check(out, "b derivative at the random diagonal point",
          field.tail(chart.b_dim()).cwiseAbs().maxCoeff(), 0.0, 1e-12);

  auto field_fn = [p, q, lambda](const Vec& y) {
    return Vec(mpq_ode_rhs(y[0], y[1], y[2], p, q, lambda));
  };
  const JacobianReport jac = jacobian_eigen(field_fn, Vec(fp));
  std::vector<double> eig;
  for (int i = 0; i < jac.eigenvalues.size(); ++i)
    eig.push_back(jac.eigenvalues[i].real());
  std::sort(eig.begin(), eig.end());
  const double s2 = p * p + q * q;
  std::vector<double> expected = {-s2 * s2 / (lambda * p * p * q * q),
                                  -s2 / (lambda * q * q), -s2 / (lambda * p * p)};
  std::sort(expected.begin(), expected.end());
  for (int i = 0; i < 3; ++i)
    check(out, "flow Jacobian eigenvalue " + std::to_string(i + 1), eig[i],
          expected[i], 1e-8 * std::max(1.0, std::abs(expected[i])));
  check(out, "fixed point asymptotically stable",
        jac.asymptotically_stable ? 1.0 : 0.0, 1.0, 0.0);

  if (p != q) {
    IntegrateOptions options;
    auto domain = [](const Vec& y) { return y.minCoeff() > 0.0; };
    const OdeResult run = integrate_ode(
        [&](double, const Vec& y) { return field_fn(y); }, domain, 0.0,
        (Vec(3) << 1.0, 0.3, 2.0).finished(), 200.0, options);
    check(out, "flow from (1, 0.3, 2) reaches the fixed point",
          (run.y - Vec(fp)).norm(), 0.0, 1e-8);
  }
}

}  // namespace

std::vector<CheckResult> verify_mpq(int p, int q, std::uint64_t seed) {
  const MpqSpace m = mpq(p, q);
  std::mt19937_64 rng(seed);
  std::vector<CheckResult> out;
  mpq_structure_checks(out, m);
  mpq_form_checks(out, m, rng);
  mpq_table_checks(out, m, rng);
  mpq_brf_checks(out, m);
  mpq_flow_checks(out, m, rng);
  return out;
}

std::vector<CheckResult> verify_group_su2() {
  std::vector<CheckResult> out;
  const LieAlgebra l = su2();
  const Mat b = killing_form(l);
  check(out, "killing(E,E)", b(1, 1), -1.0, 1e-14);
  check(out, "killing(V,V)", b(2, 2), -1.0, 1e-14);
  check(out, "killing(H,H)", b(0, 0), -2.0, 1e-14);

  const BiInvariantModel model = bi_invariant_group(l, 1.0);
  const ReductiveSpace& s = *model.space;
  check(out, "Bismut curvature max",
        curvature_tensor(s, bismut_nomizu(s, model.g, model.h)).max_abs(), 0.0,
        1e-12);
  check(out, "BRF residual max",
        brf_residual(s, model.g, model.h).max_norm(), 0.0, 1e-12);
  check(out, "H2 equals the metric",
        (h_squared(s, model.g, model.h).components() - model.g.components())
            .cwiseAbs()
            .maxCoeff(),
        0.0, 1e-12);
  check(out, "scalar curvature", scalar(s, model.g), 0.75, 1e-12);
  check(out, "trace identity Scal = 1/4 |H|^2",
        scalar(s, model.g) - 0.25 * form_norm_sq(s, model.g, model.h), 0.0, 1e-12);

  const BiInvariantModel product = bi_invariant_group(su2_su2(), 1.0);
  check(out, "product model Bismut curvature max",
        curvature_tensor(*product.space,
                         bismut_nomizu(*product.space, product.g, product.h))
            .max_abs(),
        0.0, 1e-12);
  check(out, "product model BRF residual",
        brf_residual(*product.space, product.g, product.h).max_norm(), 0.0, 1e-12);
  return out;
}

std::vector<CheckResult> verify_torus(int n) {
  std::vector<CheckResult> out;
  const FlatTorus torus = flat_torus(n);
  const ReductiveSpace& s = *torus.space;
  check(out, "Ricci max", ricci(s, torus.g).max_abs(), 0.0, 1e-15);
  check(out, "curvature max",
        curvature_tensor(s, levi_civita_nomizu(s, torus.g)).max_abs(), 0.0, 1e-15);

  FlowChart chart;
  chart.space = torus.space;
  for (int i = 0; i < n; ++i) {
    chart.metric_param_names.push_back("g" + std::to_string(i + 1));
    Mat e = Mat::Zero(n, n);
    e(i, i) = 1.0;
    chart.metric_basis.push_back(e);
  }
  FlowState state;
  state.metric_params = Vec::Ones(n);
  state.b_params = Vec();
  check(out, "flow field max", grf_vector_field(chart, state, torus.h).cwiseAbs().maxCoeff(),
        0.0, 1e-15);
  return out;
}

bool all_pass(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

std::string verify_text_report(const std::vector<CheckResult>& results) {
  std::ostringstream out;
  int passed = 0;
  for (const auto& r : results) {
    out << (r.pass ? "PASS" : "FAIL") << "  " << r.name
        << ": computed = " << fmt_double(r.computed)
        << ", expected = " << fmt_double(r.expected)
        << ", tolerance = " << fmt_double(r.tolerance)
        << ", defect = " << fmt_double(std::abs(r.computed - r.expected)) << "\n";
    passed += r.pass ? 1 : 0;
  }
  out << passed << "/" << results.size() << " checks passed\n";
  return out.str();
}

std::string mpq_table_report(const MpqSpace& m) {
  const ReductiveSpace& s = m.space();
  const auto [g, h] = m.brf_chart().eval(m.brf_solution_params());
  const Mat ric = ricci(s, g).components();
  const Mat h2m = h_squared(s, g, h).components();
  const Mat bis = bismut_ricci(s, g, h).components();

  std::ostringstream out;
  out << "tables at the normalized BRF point of mpq(" << m.p() << "," << m.q()
      << ")\n";
  auto table = [&out](const char* title, const Mat& t) {
    out << title << ":\n";
    for (int i = 0; i < t.rows(); ++i) {
      out << " ";
      for (int j = 0; j < t.cols(); ++j) out << " " << fmt_double(t(i, j));
      out << "\n";
    }
  };
  table("Ric", ric);
  table("H^2", h2m);
  table("Bismut Ricci", bis);
  const double full = form_norm_sq(s, g, h);
  out << "|H|^2 (full contraction) = " << fmt_double(full) << "\n";
  out << "|H|^2 (increasing tuples) = " << fmt_double(full / 6.0) << "\n";
  out << "Scal = " << fmt_double(scalar(s, g)) << "\n";
  return out.str();
}

}  // namespace grfhomog
