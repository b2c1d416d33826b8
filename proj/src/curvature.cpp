#include "grfhomog/curvature.hpp"

#include <cmath>

#include "grfhomog/errors.hpp"

namespace grfhomog {

double CurvatureTensor::max_abs() const {
  double m = 0.0;
  for (const Mat& e : endo_) m = std::max(m, e.cwiseAbs().maxCoeff());
  return m;
}

namespace {

void check_ricci_preconditions(const ReductiveSpace& s, const Metric& g) {
  if (g.dim() != s.dim_m()) throw DimensionMismatch("metric does not live on m");
  if (!s.algebra().is_unimodular(validation_tolerance()))
    throw NotUnimodular("ambient algebra is not unimodular");
  const InvarianceReport inv = isotropy_invariance_check(s, g.components());
  if (!inv.invariant)
    throw NonInvariantMetric("metric is not isotropy-invariant (defect " +
                             std::to_string(inv.defect) + ")");
}

}  // namespace

Bilinear ricci(const ReductiveSpace& s, const Metric& g) {
  check_ricci_preconditions(s, g);
  const int n = s.dim_m();
  const Mat& e = g.frame();
  const Mat& b = s.killing_m();
  const Mat& gm = g.components();

  // Frame brackets [E_i, E_j]_m, cached once.
  std::vector<Vec> frame_brackets(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      frame_brackets[i * n + j] = s.bracket_m(e.col(i), e.col(j));

  auto q = [&](const Vec& x) {
    double t1 = 0.0;
    for (int i = 0; i < n; ++i) {
      const Vec br = s.bracket_m(x, e.col(i));
      t1 += br.dot(gm * br);
    }
    const double t2 = x.dot(b * x);
    double t3 = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double v = frame_brackets[i * n + j].dot(gm * x);
        t3 += v * v;
      }
    return -0.5 * t1 - 0.5 * t2 + 0.5 * t3;
  };

  Mat out(n, n);
  Vec ei = Vec::Zero(n);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) {
    ei.setZero();
    ei[i] = 1.0;
    diag[i] = q(ei);
    out(i, i) = diag[i];
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      ei.setZero();
      ei[i] = 1.0;
      ei[j] = 1.0;
      const double v = 0.5 * (q(ei) - diag[i] - diag[j]);
      out(i, j) = out(j, i) = v;
    }
  return Bilinear(out);
}

double scalar(const ReductiveSpace& s, const Metric& g) {
  return (g.inverse() * ricci(s, g).components()).trace();
}

Bilinear bismut_ricci(const ReductiveSpace& s, const Metric& g, const AltForm& h) {
  if (h.degree() != 3) throw DimensionMismatch("torsion must be a 3-form");
  const int n = s.dim_m();
  Mat out = ricci(s, g).components() - 0.25 * h_squared(s, g, h).components();
  const AltForm delta_h = codifferential(s, g, h);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) -= delta_h.value({i, j});
  return Bilinear(out);
}

NomizuMap levi_civita_nomizu(const ReductiveSpace& s, const Metric& g) {
  if (g.dim() != s.dim_m()) throw DimensionMismatch("metric does not live on m");
  const int n = s.dim_m();
  const Mat& gm = g.components();
  std::vector<Mat> endo(n, Mat::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec rhs(n);
      for (int l = 0; l < n; ++l) {
        const Vec& bli = s.bracket_m(l, i);
        const Vec& blj = s.bracket_m(l, j);
        rhs[l] = 0.5 * (bli.dot(gm.col(j)) + blj.dot(gm.col(i)));
      }
      endo[i].col(j) = 0.5 * s.bracket_m(i, j) + g.inverse() * rhs;
    }
  return NomizuMap(std::move(endo));
}

NomizuMap bismut_nomizu(const ReductiveSpace& s, const Metric& g, const AltForm& h) {
  if (h.degree() != 3) throw DimensionMismatch("torsion must be a 3-form");
  const int n = s.dim_m();
  const NomizuMap lc = levi_civita_nomizu(s, g);
  std::vector<Mat> endo(n);
  for (int i = 0; i < n; ++i) {
    Mat add(n, n);
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) add(l, j) = h.value({i, j, l});
    endo[i] = lc.endo(i) + 0.5 * g.inverse() * add;
  }
  return NomizuMap(std::move(endo));
}

CurvatureTensor curvature_tensor(const ReductiveSpace& s, const NomizuMap& lambda) {
  const int n = s.dim_m();
  if (lambda.dim() != n) throw DimensionMismatch("Nomizu map does not live on m");
  std::vector<Mat> endo(static_cast<std::size_t>(n) * n, Mat::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Mat r = lambda.endo(i) * lambda.endo(j) - lambda.endo(j) * lambda.endo(i);
      const Vec& brm = s.bracket_m(i, j);
      for (int c = 0; c < n; ++c)
        if (brm[c] != 0.0) r -= brm[c] * lambda.endo(c);
      const Vec& brk = s.bracket_k(i, j);
      for (int z = 0; z < s.dim_k(); ++z)
        if (brk[z] != 0.0) r -= brk[z] * s.isotropy_action(z);
      endo[i * n + j] = std::move(r);
    }
  return CurvatureTensor(n, std::move(endo));
}

FlatnessReport is_flat(const CurvatureTensor& r) {
  const double m = r.max_abs();
  return {m < 1e-10, m};
}

Bilinear ricci_from_curvature(const ReductiveSpace& s, const Metric& g,
                              const CurvatureTensor& r) {
  const int n = s.dim_m();
  const Mat& e = g.frame();
  const Mat& gm = g.components();
  Mat out = Mat::Zero(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        // R(u_i, e_x) e_y, expanded over the basis components of u_i
        Vec v = Vec::Zero(n);
        for (int a = 0; a < n; ++a)
          if (e(a, i) != 0.0) v += e(a, i) * r.endo(a, x).col(y);
        sum += v.dot(gm * e.col(i));
      }
      out(x, y) = sum;
    }
  return Bilinear(out);
}

}  // namespace grfhomog
