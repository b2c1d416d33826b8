#pragma once

#include <string>
#include <vector>

#include "grfhomog/common.hpp"

namespace grfhomog {

// Real Lie algebra given by structure constants over a fixed basis:
// [e_i, e_j] = sum_k C[i][j][k] e_k. Validated on construction
// (antisymmetry and the Jacobi identity, within validation_tolerance()).
class LieAlgebra {
 public:
  LieAlgebra(int dim, std::vector<double> constants,
             std::vector<std::string> labels = {});

  int dim() const { return dim_; }
  double c(int i, int j, int k) const { return c_[(i * dim_ + j) * dim_ + k]; }
  const std::vector<std::string>& labels() const { return labels_; }

  Vec bracket(const Vec& x, const Vec& y) const;
  // Matrix of ad(e_i) acting on coefficient vectors: (ad e_i)(v) = [e_i, v].
  Mat ad(int i) const;
  Mat ad(const Vec& x) const;
  // trace(ad e_i) = 0 for every i, within tol.
  bool is_unimodular(double tol) const;

 private:
  int dim_;
  std::vector<double> c_;
  std::vector<std::string> labels_;
};

LieAlgebra build_lie_algebra(const std::vector<std::vector<std::vector<double>>>& constants,
                             std::vector<std::string> labels = {});
Vec bracket(const LieAlgebra& l, const Vec& x, const Vec& y);
// B(X,Y) = trace(ad X ad Y) on the stored basis.
Mat killing_form(const LieAlgebra& l);
LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b);
// Re-expresses the algebra in the basis given by the columns of p (old coords).
LieAlgebra change_basis(const LieAlgebra& l, const Mat& p);

}  // namespace grfhomog
