#include "grfhomog/catalog.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "grfhomog/errors.hpp"

namespace grfhomog {

namespace {

std::vector<std::vector<std::vector<double>>> cube(int n) {
  return std::vector<std::vector<std::vector<double>>>(
      n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
}

void set_bracket(std::vector<std::vector<std::vector<double>>>& c, int i, int j,
                 int k, double v) {
  c[i][j][k] = v;
  c[j][i][k] = -v;
}

}  // namespace

LieAlgebra su2() {
  auto c = cube(3);
  set_bracket(c, 0, 1, 2, 1.0);   // [H,E] = V
  set_bracket(c, 0, 2, 1, -1.0);  // [H,V] = -E
  set_bracket(c, 1, 2, 0, 0.5);   // [E,V] = H/2
  return build_lie_algebra(c, {"H", "E", "V"});
}

LieAlgebra su2_su2() {
  const LieAlgebra sum = direct_sum(su2(), su2());
  std::vector<double> c;
  c.reserve(6 * 6 * 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k) c.push_back(sum.c(i, j, k));
  return LieAlgebra(6, std::move(c), {"H1", "E1", "V1", "H2", "E2", "V2"});
}

LieAlgebra abelian(int n) {
  std::vector<std::string> labels;
  for (int i = 1; i <= n; ++i) labels.push_back("X" + std::to_string(i));
  return LieAlgebra(n, std::vector<double>(static_cast<std::size_t>(n) * n * n, 0.0),
                    std::move(labels));
}

MpqSpace::MpqSpace(int p, int q) : p_(p), q_(q) {
  if (q < 1 || p < q) throw BadOrder("mpq requires p >= q >= 1");
  if (std::gcd(p, q) != 1) throw NotCoprime("mpq requires gcd(p, q) = 1");

  Mat basis = Mat::Zero(6, 6);
  basis.col(0) << q, 0, 0, -p, 0, 0;
  basis.col(1) << 0, 1, 0, 0, 0, 0;
  basis.col(2) << 0, 0, 1, 0, 0, 0;
  basis.col(3) << 0, 0, 0, 0, 1, 0;
  basis.col(4) << 0, 0, 0, 0, 0, 1;
  basis.col(5) << p, 0, 0, q, 0, 0;

  const LieAlgebra raw = change_basis(su2_su2(), basis);
  std::vector<double> c;
  c.reserve(6 * 6 * 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k) c.push_back(raw.c(i, j, k));
  LieAlgebra algebra(6, std::move(c), {"e1", "e2", "e3", "e4", "e5", "e6"});
  space_ = std::make_shared<const ReductiveSpace>(std::move(algebra),
                                                  std::vector<int>{5},
                                                  std::vector<int>{0, 1, 2, 3, 4}, +1);
}

AltForm MpqSpace::harmonic_h(double lambda) const {
  return AltForm::from_terms(5, 3,
                             {{{0, 1, 2}, lambda * q_}, {{0, 3, 4}, lambda * p_}});
}

double MpqSpace::mu_o() const { return std::sqrt(2.0 * (p_ * p_ + q_ * q_)); }

namespace {

Mat diagonal_metric(double mu, double a, double b) {
  Vec d(5);
  d << mu * mu, a * a, a * a, b * b, b * b;
  return d.asDiagonal();
}

}  // namespace

Chart MpqSpace::diagonal_chart() const {
  Chart chart;
  chart.space = space_;
  chart.param_names = {"mu", "a", "b", "h1"};
  const int p = p_, q = q_;
  chart.eval = [p, q](const Vec& x) {
    const Mat g = diagonal_metric(x[0], x[1], x[2]);
    const AltForm h = AltForm::from_terms(
        5, 3, {{{0, 1, 2}, x[3] * q}, {{0, 3, 4}, x[3] * p}});
    return std::make_pair(Metric(g), h);
  };
  chart.domain_check = [](const Vec& x) {
    return x.size() == 4 && x[0] > 0 && x[1] > 0 && x[2] > 0 && x[3] != 0;
  };
  const double mu_target = mu_o();
  chart.normalize = [mu_target](const Vec& x) {
    const double t = mu_target / x[0];
    Vec out(4);
    out << mu_target, std::abs(t * x[1]), std::abs(t * x[2]),
        std::abs(t * t * x[3]);
    return out;
  };
  chart.sample_initial = [](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> scale(0.2, 3.0);
    std::uniform_int_distribution<int> sign(0, 1);
    Vec x(4);
    x << scale(rng), scale(rng), scale(rng),
        (sign(rng) ? 1.0 : -1.0) * scale(rng);
    return x;
  };

  const double s2 = static_cast<double>(p_ * p_ + q_ * q_);
  // Cleared-denominator rows of the diagonal equations, each divided by the
  // sum of its monomials' magnitudes at the reference solution so that the
  // rows are O(1) there.  Unlike the rational rows, these grow at infinity,
  // which removes the flat-limit escapes from the least-squares landscape.
  {
    const double p2 = p * p, q2 = q * q;
    const double mu2 = 2.0 * s2, a2 = q2 / s2, b2 = p2 / s2;
    const double scale1 = mu2 * mu2 * (a2 * a2 * p2 + b2 * b2 * q2) +
                          4.0 * s2 * s2 * (q2 * b2 * b2 + p2 * a2 * a2);
    const double scale2 =
        mu2 * (4.0 * a2 * s2 * s2 + mu2 * q2) + 4.0 * s2 * s2 * q2;
    const double scale4 =
        mu2 * (4.0 * b2 * s2 * s2 + mu2 * p2) + 4.0 * s2 * s2 * p2;
    chart.solve_residual = [p2, q2, s2, scale1, scale2, scale4](const Vec& x) {
      const double mu2 = x[0] * x[0], a2 = x[1] * x[1], b2 = x[2] * x[2],
                   h2 = x[3] * x[3];
      const double a4 = a2 * a2, b4 = b2 * b2;
      Vec rows(3);
      rows[0] = (mu2 * mu2 * (a4 * p2 + b4 * q2) -
                 4.0 * s2 * s2 * h2 * (q2 * b4 + p2 * a4)) /
                scale1;
      rows[1] =
          (mu2 * (4.0 * a2 * s2 * s2 - mu2 * q2) - 4.0 * s2 * s2 * q2 * h2) /
          scale2;
      rows[2] =
          (mu2 * (4.0 * b2 * s2 * s2 - mu2 * p2) - 4.0 * s2 * s2 * p2 * h2) /
          scale4;
      return rows;
    };
  }
  chart.gauge_row = [mu_target](const Vec& x) { return x[0] - mu_target; };
  chart.restart_point = [mu_target](const Vec& stall, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> jitter(0.8, 1.25);
    std::uniform_real_distribution<double> fresh(0.5, 2.0);
    std::uniform_int_distribution<int> sign(0, 1);
    Vec x(4);
    x << mu_target, std::clamp(std::abs(stall[1]), 0.05, 20.0) * jitter(rng),
        std::clamp(std::abs(stall[2]), 0.05, 20.0) * jitter(rng),
        (sign(rng) ? 1.0 : -1.0) * fresh(rng);
    return x;
  };
  chart.scale_pin = 3.0 * s2 * s2 / (p_ * p_ * q_ * q_);
  return chart;
}

Chart MpqSpace::p_eq_q_chart() const {
  Chart chart;
  chart.space = space_;
  chart.param_names = {"mu", "a", "b", "c", "h1"};
  chart.eval = [](const Vec& x) {
    const double mu = x[0], a = x[1], b = x[2], c = x[3], h1 = x[4];
    Mat g = diagonal_metric(mu, a, b);
    g(1, 3) = g(3, 1) = c;
    g(2, 4) = g(4, 2) = c;
    const double h3 = c * h1 * (a * a + b * b) / (a * a * b * b + c * c);
    const AltForm h = AltForm::from_terms(5, 3,
                                          {{{0, 1, 2}, h1},
                                           {{0, 3, 4}, h1},
                                           {{0, 1, 4}, h3},
                                           {{0, 2, 3}, -h3}});
    return std::make_pair(Metric(g), h);
  };
  chart.domain_check = [](const Vec& x) {
    return x.size() == 5 && x[0] > 0 && x[1] > 0 && x[2] > 0 &&
           x[1] * x[1] * x[2] * x[2] - x[3] * x[3] > 0 && x[4] != 0;
  };
  const double mu_target = 2.0 * std::sqrt(2.0);
  chart.normalize = [mu_target](const Vec& x) {
    const double t = mu_target / x[0];
    Vec out(5);
    out << mu_target, std::abs(t * x[1]), std::abs(t * x[2]), t * t * x[3],
        std::abs(t * t * x[4]);
    return out;
  };
  chart.sample_initial = [](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> scale(0.5, 3.0);
    std::uniform_real_distribution<double> frac(-0.6, 0.6);
    std::uniform_int_distribution<int> sign(0, 1);
    Vec x(5);
    const double a = scale(rng), b = scale(rng);
    x << scale(rng), a, b, frac(rng) * a * b,
        (sign(rng) ? 1.0 : -1.0) * scale(rng);
    return x;
  };
  // The cleared-denominator rows vanish on whole boundary strata (collapsed
  // a, b and degenerate a^2 b^2 = c^2 metrics), so the solver keeps the
  // rational rows here: they blow up at those boundaries and cannot report a
  // false convergence.
  chart.gauge_row = [mu_target](const Vec& x) { return x[0] - mu_target; };
  chart.restart_point = [mu_target](const Vec& stall, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> jitter(0.8, 1.25);
    std::uniform_real_distribution<double> fresh(0.5, 2.0);
    std::uniform_real_distribution<double> off(-0.1, 0.1);
    std::uniform_int_distribution<int> sign(0, 1);
    Vec x(5);
    x << mu_target, std::clamp(std::abs(stall[1]), 0.05, 20.0) * jitter(rng),
        std::clamp(std::abs(stall[2]), 0.05, 20.0) * jitter(rng), off(rng),
        (sign(rng) ? 1.0 : -1.0) * fresh(rng);
    return x;
  };
  chart.scale_pin = 6.0;
  return chart;
}

Chart MpqSpace::brf_chart() const {
  return p_ == q_ ? p_eq_q_chart() : diagonal_chart();
}

FlowChart MpqSpace::flow_chart() const {
  FlowChart chart;
  chart.space = space_;
  auto sym_unit = [](int i, int j) {
    Mat e = Mat::Zero(5, 5);
    e(i, j) = e(j, i) = 1.0;
    return e;
  };
  chart.metric_param_names = {"M", "A", "B"};
  chart.metric_basis = {sym_unit(0, 0), sym_unit(1, 1) + sym_unit(2, 2),
                        sym_unit(3, 3) + sym_unit(4, 4)};
  chart.b_basis = {AltForm::from_terms(5, 2, {{{1, 2}, 1.0}}),
                   AltForm::from_terms(5, 2, {{{3, 4}, 1.0}})};
  if (p_ == q_) {
    chart.metric_param_names.push_back("C");
    chart.metric_param_names.push_back("S");
    chart.metric_basis.push_back(sym_unit(1, 3) + sym_unit(2, 4));
    chart.metric_basis.push_back(sym_unit(1, 4) - sym_unit(2, 3));
    chart.b_basis.push_back(AltForm::from_terms(5, 2, {{{1, 3}, 1.0}, {{2, 4}, 1.0}}));
    chart.b_basis.push_back(AltForm::from_terms(5, 2, {{{1, 4}, 1.0}, {{2, 3}, -1.0}}));
  }
  return chart;
}

Vec MpqSpace::brf_solution_params() const {
  if (p_ == q_) {
    Vec x(5);
    x << 2.0 * std::sqrt(2.0), 1.0, 1.0, 0.0, 2.0;
    return x;
  }
  const double s = p_ * p_ + q_ * q_;
  Vec x(4);
  x << mu_o(), std::sqrt(q_ * q_ / s), std::sqrt(p_ * p_ / s), 1.0;
  return x;
}

MpqSpace mpq(int p, int q) { return MpqSpace(p, q); }

BiInvariantModel bi_invariant_group(const LieAlgebra& l, double scale) {
  if (scale <= 0) throw OutOfDomain("metric scale must be positive");
  const int n = l.dim();
  const Mat b = killing_form(l);
  const Eigen::SelfAdjointEigenSolver<Mat> es(b);
  const double max_eig = es.eigenvalues().maxCoeff();
  const double min_eig = es.eigenvalues().minCoeff();
  if (max_eig >= -1e-10 * std::max(1.0, std::abs(min_eig)))
    throw NotCompactType("Killing form is not negative definite");

  std::vector<int> m_idx(n);
  for (int i = 0; i < n; ++i) m_idx[i] = i;
  auto space = std::make_shared<const ReductiveSpace>(l, std::vector<int>{},
                                                      m_idx, +1);
  const Mat g = -scale * b;

  AltForm h(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Vec bij = Vec::Zero(n);
      for (int k = 0; k < n; ++k) bij[k] = l.c(i, j, k);
      const Vec row = g * bij;
      for (int k = j + 1; k < n; ++k) h.coeff({i, j, k}) = -row[k];
    }
  return BiInvariantModel{std::move(space), Metric(g), std::move(h), scale};
}

FlatTorus flat_torus(int n) {
  if (n < 1) throw DimensionMismatch("torus dimension must be positive");
  std::vector<int> m_idx(n);
  for (int i = 0; i < n; ++i) m_idx[i] = i;
  auto space = std::make_shared<const ReductiveSpace>(abelian(n), std::vector<int>{},
                                                      m_idx, +1);
  return FlatTorus{std::move(space), Metric(Mat::Identity(n, n)),
                   AltForm(n, std::min(3, n))};
}

namespace {

// omega_hat(X,Y) = g0(i_X omega, i_Y omega) on the basis, via an orthonormal
// frame: hat = W W^T with W(x, i) = omega(e_x, u_i).
Mat two_form_hat(const Metric& g0, const AltForm& omega) {
  const int n = g0.components().rows();
  Mat o(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) o(x, y) = omega.value({x, y});
  const Mat w = o * g0.frame();
  return w * w.transpose();
}

}  // namespace

KobayashiReport kobayashi_check(const KobayashiData& data) {
  if (data.lambda <= 0 || data.mu <= 0)
    throw OutOfDomain("lambda and mu must be positive");
  if (data.alpha.max_abs() == 0.0) throw OutOfDomain("alpha must be non-zero");
  const int n = data.g0.components().rows();
  if (data.alpha.degree() != 2 || data.beta.degree() != 2)
    throw DimensionMismatch("alpha and beta must be 2-forms");

  KobayashiReport report;
  const double tol = 1e-10;

  double defect_a = 0.0;
  if (data.alpha.degree() + data.beta.degree() <= n)
    defect_a = wedge(data.alpha, data.beta).max_abs();
  if (defect_a > tol * std::max(1.0, data.alpha.max_abs() * data.beta.max_abs())) {
    report.violated = 'a';
    report.defect = defect_a;
    return report;
  }

  const Mat alpha_hat = two_form_hat(data.g0, data.alpha);
  const Mat beta_hat = two_form_hat(data.g0, data.beta);
  const double norm_alpha = (data.g0.inverse() * alpha_hat).trace();
  const double norm_beta = (data.g0.inverse() * beta_hat).trace();
  const double defect_b = std::abs(norm_beta - data.lambda * norm_alpha);
  if (defect_b > tol * std::max(1.0, data.lambda * norm_alpha)) {
    report.violated = 'b';
    report.defect = defect_b;
    return report;
  }

  const Mat cond_c = data.ric0 - 2.0 * alpha_hat - data.mu * beta_hat;
  const double defect_c = cond_c.cwiseAbs().maxCoeff();
  if (defect_c > tol * std::max(1.0, data.ric0.cwiseAbs().maxCoeff())) {
    report.violated = 'c';
    report.defect = defect_c;
    return report;
  }

  report.ok = true;
  report.c = std::sqrt(data.lambda * data.mu);
  report.h = 2.0 * data.mu * std::sqrt(data.lambda);
  const double c2 = report.c * report.c;
  const Mat eq1 =
      data.ric0 - 2.0 * alpha_hat - (report.h * report.h / (4.0 * c2)) * beta_hat;
  report.eq1_defect = eq1.cwiseAbs().maxCoeff();
  report.eq2_defect = std::abs(4.0 * c2 * c2 - data.lambda * report.h * report.h);
  return report;
}

}  // namespace grfhomog
