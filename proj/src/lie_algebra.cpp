#include "grfhomog/lie_algebra.hpp"

#include <cmath>
#include <cstdio>

#include "grfhomog/errors.hpp"

namespace grfhomog {

double& validation_tolerance() {
  static double tol = 1e-12;
  return tol;
}

double& invariance_tolerance() {
  static double tol = 1e-10;
  return tol;
}

LieAlgebra::LieAlgebra(int dim, std::vector<double> constants,
                       std::vector<std::string> labels)
    : dim_(dim), c_(std::move(constants)), labels_(std::move(labels)) {
  const double tol = validation_tolerance();
  if (dim_ <= 0) throw DimensionMismatch("algebra dimension must be positive");
  if (c_.size() != static_cast<std::size_t>(dim_) * dim_ * dim_)
    throw DimensionMismatch("structure constants are not a cubical dim^3 array");
  if (!labels_.empty() && labels_.size() != static_cast<std::size_t>(dim_))
    throw DimensionMismatch("label count does not match dimension");

  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k)
        if (std::abs(c(i, j, k) + c(j, i, k)) > tol) {
          char buf[128];
          std::snprintf(buf, sizeof(buf),
                        "C[%d][%d][%d] = %g but C[%d][%d][%d] = %g", i, j, k,
                        c(i, j, k), j, i, k, c(j, i, k));
          throw AntisymmetryViolation(buf);
        }

  // Jacobi: [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j] = 0.
  double worst = 0.0;
  int wi = 0, wj = 0, wk = 0;
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      for (int k = j + 1; k < dim_; ++k) {
        for (int m = 0; m < dim_; ++m) {
          double sum = 0.0;
          for (int a = 0; a < dim_; ++a)
            sum += c(i, j, a) * c(a, k, m) + c(j, k, a) * c(a, i, m) +
                   c(k, i, a) * c(a, j, m);
          if (std::abs(sum) > worst) {
            worst = std::abs(sum);
            wi = i, wj = j, wk = k;
          }
        }
      }
  if (worst > tol) {
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "Jacobi identity fails at triple (%d,%d,%d), defect %.3e", wi,
                  wj, wk, worst);
    throw JacobiViolation(buf, wi, wj, wk, worst);
  }
}

Vec LieAlgebra::bracket(const Vec& x, const Vec& y) const {
  if (x.size() != dim_ || y.size() != dim_)
    throw DimensionMismatch("bracket arguments must have length dim");
  Vec out = Vec::Zero(dim_);
  for (int i = 0; i < dim_; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < dim_; ++j) {
      if (y[j] == 0.0) continue;
      const double f = x[i] * y[j];
      for (int k = 0; k < dim_; ++k) out[k] += f * c(i, j, k);
    }
  }
  return out;
}

Mat LieAlgebra::ad(int i) const {
  Mat a(dim_, dim_);
  for (int j = 0; j < dim_; ++j)
    for (int k = 0; k < dim_; ++k) a(k, j) = c(i, j, k);
  return a;
}

Mat LieAlgebra::ad(const Vec& x) const {
  if (x.size() != dim_) throw DimensionMismatch("ad argument must have length dim");
  Mat a = Mat::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    if (x[i] != 0.0) a += x[i] * ad(i);
  return a;
}

bool LieAlgebra::is_unimodular(double tol) const {
  for (int i = 0; i < dim_; ++i)
    if (std::abs(ad(i).trace()) > tol) return false;
  return true;
}

LieAlgebra build_lie_algebra(const std::vector<std::vector<std::vector<double>>>& constants,
                             std::vector<std::string> labels) {
  const int n = static_cast<int>(constants.size());
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(n) * n * n);
  for (const auto& plane : constants) {
    if (static_cast<int>(plane.size()) != n)
      throw DimensionMismatch("structure constants are not a cubical dim^3 array");
    for (const auto& row : plane) {
      if (static_cast<int>(row.size()) != n)
        throw DimensionMismatch("structure constants are not a cubical dim^3 array");
      flat.insert(flat.end(), row.begin(), row.end());
    }
  }
  return LieAlgebra(n, std::move(flat), std::move(labels));
}

Vec bracket(const LieAlgebra& l, const Vec& x, const Vec& y) { return l.bracket(x, y); }

Mat killing_form(const LieAlgebra& l) {
  const int n = l.dim();
  std::vector<Mat> ads;
  ads.reserve(n);
  for (int i = 0; i < n; ++i) ads.push_back(l.ad(i));
  Mat b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) b(i, j) = b(j, i) = (ads[i] * ads[j]).trace();
  return b;
}

LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b) {
  const int n1 = a.dim(), n2 = b.dim(), n = n1 + n2;
  std::vector<double> c(static_cast<std::size_t>(n) * n * n, 0.0);
  auto at = [&](int i, int j, int k) -> double& {
    return c[(static_cast<std::size_t>(i) * n + j) * n + k];
  };
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j)
      for (int k = 0; k < n1; ++k) at(i, j, k) = a.c(i, j, k);
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < n2; ++j)
      for (int k = 0; k < n2; ++k) at(n1 + i, n1 + j, n1 + k) = b.c(i, j, k);
  std::vector<std::string> labels;
  if (!a.labels().empty() && !b.labels().empty()) {
    labels = a.labels();
    labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  }
  return LieAlgebra(n, std::move(c), std::move(labels));
}

LieAlgebra change_basis(const LieAlgebra& l, const Mat& p) {
  const int n = l.dim();
  if (p.rows() != n || p.cols() != n)
    throw DimensionMismatch("change-of-basis matrix must be dim x dim");
  const Mat pinv = p.fullPivLu().inverse();
  std::vector<double> c(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Vec br = pinv * l.bracket(p.col(i), p.col(j));
      for (int k = 0; k < n; ++k)
        c[(static_cast<std::size_t>(i) * n + j) * n + k] = br[k];
    }
  return LieAlgebra(n, std::move(c));
}

}  // namespace grfhomog
