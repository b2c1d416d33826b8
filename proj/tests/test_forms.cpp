#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "grfhomog/catalog.hpp"
#include "grfhomog/errors.hpp"
#include "grfhomog/forms.hpp"

using namespace grfhomog;

namespace {

AltForm random_form(int n, int degree, std::mt19937_64& rng) {
  AltForm a(n, degree);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int i = 0; i < a.size(); ++i) a.coeff(i) = unit(rng);
  return a;
}

Metric random_diagonal_metric(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.5, 2.0);
  Vec d(n);
  for (int i = 0; i < n; ++i) d[i] = unit(rng);
  return Metric(Mat(d.asDiagonal()));
}

// Matrix of the isotropy action on degree-k coefficient vectors; invariant
// forms are its kernel.
Mat isotropy_action_on_forms(const ReductiveSpace& s, int degree) {
  const AltForm basis(s.dim_m(), degree);
  const int size = basis.size();
  Mat action = Mat::Zero(std::max(1, s.dim_k()) * size, size);
  for (int z = 0; z < s.dim_k(); ++z) {
    const Mat& a = s.isotropy_action(z);
    for (int c = 0; c < size; ++c) {
      AltForm unit(s.dim_m(), degree);
      unit.coeff(c) = 1.0;
      for (int r = 0; r < size; ++r) {
        const auto& tuple = basis.tuples()[r];
        double v = 0.0;
        for (std::size_t slot = 0; slot < tuple.size(); ++slot)
          for (int image = 0; image < s.dim_m(); ++image) {
            if (a(image, tuple[slot]) == 0.0) continue;
            std::vector<int> idx(tuple.begin(), tuple.end());
            idx[slot] = image;
            v += a(image, tuple[slot]) * unit.value(idx);
          }
        action(z * size + r, c) = v;
      }
    }
  }
  return action;
}

AltForm random_invariant_form(const ReductiveSpace& s, int degree,
                              std::mt19937_64& rng) {
  AltForm out(s.dim_m(), degree);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  if (s.dim_k() == 0) {
    for (int i = 0; i < out.size(); ++i) out.coeff(i) = unit(rng);
    return out;
  }
  const Eigen::FullPivLU<Mat> lu(isotropy_action_on_forms(s, degree));
  const Mat kernel = lu.kernel();
  Vec weights(kernel.cols());
  for (int i = 0; i < weights.size(); ++i) weights[i] = unit(rng);
  out.coeffs() = kernel * weights;
  return out;
}

}  // namespace

TEST_CASE("alternating forms evaluate with permutation signs") {
  const AltForm h = AltForm::from_terms(5, 3, {{{0, 1, 2}, 2.0}, {{0, 3, 4}, -1.5}});
  CHECK(h.value({0, 1, 2}) == 2.0);
  CHECK(h.value({1, 0, 2}) == -2.0);
  CHECK(h.value({2, 0, 1}) == 2.0);
  CHECK(h.value({0, 0, 2}) == 0.0);
  CHECK(h.value({0, 3, 4}) == -1.5);
  CHECK(h.size() == 10);

  const Vec x = 2.0 * Vec::Unit(5, 0), y = Vec::Unit(5, 1), z = Vec::Unit(5, 2);
  CHECK(h.evaluate({x, y, z}) == 4.0);
}

TEST_CASE("permutation sign") {
  CHECK(permutation_sign({0, 1, 2}) == 1);
  CHECK(permutation_sign({1, 0, 2}) == -1);
  CHECK(permutation_sign({2, 0, 1}) == 1);
  CHECK(permutation_sign({1, 1, 2}) == 0);
}

TEST_CASE("wedge products and degree overflow") {
  AltForm e1(4, 1), e23(4, 2);
  e1.coeff({0}) = 1.0;
  e23.coeff({1, 2}) = 1.0;
  const AltForm w = wedge(e1, e23);
  CHECK(w.degree() == 3);
  CHECK(w.value({0, 1, 2}) == 1.0);

  const AltForm w2 = wedge(e23, e1);
  CHECK(w2.value({0, 1, 2}) == 1.0);

  AltForm top(4, 3);
  top.coeff({0, 1, 2}) = 1.0;
  CHECK_THROWS_AS(wedge(top, e23), DegreeOverflow);
}

TEST_CASE("interior product contracts the first slot") {
  AltForm h(5, 3);
  h.coeff({0, 1, 2}) = 3.0;
  const AltForm c = interior_product(h, Vec::Unit(5, 0));
  CHECK(c.degree() == 2);
  CHECK(c.value({1, 2}) == 3.0);
  CHECK(c.max_abs() == 3.0);
}

TEST_CASE("Koszul differential of the generic torsion form on M_{2,1}") {
  const MpqSpace m = mpq(2, 1);
  const double h1 = 0.7, h2 = 1.9;
  const AltForm h = AltForm::from_terms(5, 3, {{{0, 1, 2}, h1}, {{0, 3, 4}, h2}});
  const AltForm dh = koszul_d(m.space(), h);
  CHECK(dh.value({1, 2, 3, 4}) ==
        doctest::Approx((2.0 * h1 - 1.0 * h2) / 10.0).epsilon(1e-12));

  const AltForm closed = koszul_d(m.space(), m.harmonic_h(1.3));
  CHECK(closed.max_abs() < 1e-14);
}

TEST_CASE("d of d vanishes on random invariant forms") {
  const MpqSpace m = mpq(3, 2);
  std::mt19937_64 rng(5);
  for (int degree = 0; degree <= 3; ++degree)
    for (int trial = 0; trial < 25; ++trial) {
      const AltForm a = random_invariant_form(m.space(), degree, rng);
      REQUIRE(isotropy_invariance_check(m.space(), a).defect < 1e-12);
      CHECK(koszul_d(m.space(), koszul_d(m.space(), a)).max_abs() < 1e-12);
    }
}

TEST_CASE("differential of a top-degree form is rejected") {
  const MpqSpace m = mpq(2, 1);
  AltForm top(5, 5);
  top.coeff(0) = 1.0;
  CHECK_THROWS_AS(koszul_d(m.space(), top), DegreeOverflow);
}

TEST_CASE("Hodge star squares to the sign of the degree pairing") {
  const MpqSpace m = mpq(2, 1);
  std::mt19937_64 rng(17);
  for (int degree = 0; degree <= 5; ++degree)
    for (int trial = 0; trial < 20; ++trial) {
      const AltForm a = random_form(5, degree, rng);
      const Metric g = random_diagonal_metric(5, rng);
      const AltForm ss = hodge_star(m.space(), g, hodge_star(m.space(), g, a));
      const double sign = (degree * (5 - degree)) % 2 == 0 ? 1.0 : -1.0;
      CHECK((ss - sign * a).max_abs() < 1e-12);
    }
}

TEST_CASE("volume form normalization") {
  const MpqSpace m = mpq(2, 1);
  AltForm one(5, 0);
  one.coeff(0) = 1.0;
  const Metric g(
      (Vec(5) << 4.0, 0.25, 0.25, 2.25, 2.25).finished().asDiagonal());
  const AltForm vol = hodge_star(m.space(), g, one);
  CHECK(vol.value({0, 1, 2, 3, 4}) == doctest::Approx(2.0 * 0.25 * 2.25).epsilon(1e-14));
}

TEST_CASE("full-contraction norm of a unit 3-form is 3 factorial") {
  const MpqSpace m = mpq(2, 1);
  AltForm h(5, 3);
  h.coeff({0, 1, 2}) = 1.0;
  const Metric g(Mat(Mat::Identity(5, 5)));
  CHECK(form_norm_sq(m.space(), g, h) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(inner_product(g, h, h) == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("codifferential is adjoint to the differential") {
  const MpqSpace m = mpq(2, 1);
  std::mt19937_64 rng(23);
  for (int degree = 1; degree <= 4; ++degree)
    for (int trial = 0; trial < 25; ++trial) {
      const AltForm beta = random_form(5, degree - 1, rng);
      const AltForm alpha = random_form(5, degree, rng);
      const Metric g = random_diagonal_metric(5, rng);
      const double lhs = inner_product(g, koszul_d(m.space(), beta), alpha);
      const double rhs = inner_product(g, beta, codifferential(m.space(), g, alpha));
      CHECK(std::abs(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("harmonicity report at the Bismut-Ricci-flat torsion") {
  const MpqSpace m = mpq(2, 1);
  const Chart chart = m.brf_chart();
  const auto [g, h] = chart.eval(m.brf_solution_params());
  const auto report = is_harmonic(m.space(), g, h);
  CHECK(report.harmonic);
  CHECK(report.d_norm < 1e-12);
  CHECK(report.delta_norm < 1e-12);

  AltForm detuned = h;
  detuned.coeff({0, 1, 3}) = 0.4;
  CHECK_FALSE(is_harmonic(m.space(), g, detuned).harmonic);
}

TEST_CASE("H squared of the bi-invariant su(2) torsion equals the metric") {
  const BiInvariantModel model = bi_invariant_group(su2(), 1.0);
  const Mat diff =
      h_squared(*model.space, model.g, model.h).components() - model.g.components();
  CHECK(diff.cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("fundamental 4-form at the normalized solution") {
  const MpqSpace m = mpq(2, 1);
  const Chart chart = m.brf_chart();
  const auto [g, h] = chart.eval(m.brf_solution_params());
  const AltForm sigma = fundamental_four_form(m.space(), g, h);
  CHECK(sigma.value({1, 2, 3, 4}) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(std::abs(sigma.value({0, 1, 2, 3})) < 1e-13);
  CHECK(koszul_d(m.space(), h).max_abs() < 1e-13);
}

TEST_CASE("metric construction validates positive definiteness") {
  Mat bad = Mat::Identity(3, 3);
  bad(0, 0) = -1.0;
  CHECK_THROWS_AS(Metric{bad}, SingularMetric);

  Mat ok(2, 2);
  ok << 2.0, 0.3, 0.3, 1.0;
  const Metric g(ok);
  const Mat gram = g.frame().transpose() * g.components() * g.frame();
  CHECK((gram - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(g.sqrt_det() == doctest::Approx(std::sqrt(ok.determinant())).epsilon(1e-14));
  CHECK((g.inverse() - ok.inverse()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("form arithmetic rejects mismatched spaces") {
  AltForm a(5, 2), b(5, 3), c(4, 2);
  CHECK_THROWS_AS(a += b, DimensionMismatch);
  CHECK_THROWS_AS(a += c, DimensionMismatch);
}
