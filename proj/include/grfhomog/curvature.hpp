#pragma once

#include <vector>

#include "grfhomog/common.hpp"
#include "grfhomog/forms.hpp"
#include "grfhomog/reductive_space.hpp"

namespace grfhomog {

// Invariant connection on a reductive space as a Nomizu map m -> End(m).
// endo(i) maps coefficient vectors: Y -> Lambda(e_i) Y.
class NomizuMap {
 public:
  explicit NomizuMap(std::vector<Mat> endo) : endo_(std::move(endo)) {}

  int dim() const { return static_cast<int>(endo_.size()); }
  const Mat& endo(int i) const { return endo_[i]; }
  // Lambda(e_i)e_j = sum_k component(i,j,k) e_k.
  double component(int i, int j, int k) const { return endo_[i](k, j); }

 private:
  std::vector<Mat> endo_;
};

// R[i][j] is the endomorphism R(e_i,e_j): m -> m in coefficient coordinates.
class CurvatureTensor {
 public:
  CurvatureTensor(int n, std::vector<Mat> endo) : n_(n), endo_(std::move(endo)) {}

  int dim() const { return n_; }
  const Mat& endo(int i, int j) const { return endo_[i * n_ + j]; }
  // R(e_i,e_j)e_k = sum_l component(i,j,k,l) e_l.
  double component(int i, int j, int k, int l) const { return endo_[i * n_ + j](l, k); }
  double max_abs() const;

 private:
  int n_;
  std::vector<Mat> endo_;
};

// Riemannian Ricci tensor of an invariant metric through the unimodular
// homogeneous formula
//   Ric(X,X) = -1/2 sum_i |[X,E_i]_m|^2 - 1/2 B(X,X)
//              + 1/2 sum_{i<j} g([E_i,E_j]_m, X)^2
// over a g-orthonormal frame {E_i}, polarized for off-diagonal entries.
Bilinear ricci(const ReductiveSpace& s, const Metric& g);

double scalar(const ReductiveSpace& s, const Metric& g);

// Ric of the Bismut connection: Ric_g - 1/4 H^2 - delta_g H (the 2-form
// supplies the antisymmetric part).
Bilinear bismut_ricci(const ReductiveSpace& s, const Metric& g, const AltForm& h);

// Levi-Civita Nomizu map: Lambda(X)Y = 1/2 [X,Y]_m + U(X,Y) with
// 2 g(U(X,Y),Z) = g([Z,X]_m, Y) + g(X, [Z,Y]_m).
NomizuMap levi_civita_nomizu(const ReductiveSpace& s, const Metric& g);

// Bismut connection with totally skew torsion H:
// g(Lambda(X)Y, Z) = g(Lambda^g(X)Y, Z) + 1/2 H(X,Y,Z).
NomizuMap bismut_nomizu(const ReductiveSpace& s, const Metric& g, const AltForm& h);

// R(X,Y)Z = Lambda(X)Lambda(Y)Z - Lambda(Y)Lambda(X)Z - Lambda([X,Y]_m)Z
//           - [[X,Y]_k, Z] (isotropy part acting by the ambient bracket).
CurvatureTensor curvature_tensor(const ReductiveSpace& s, const NomizuMap& lambda);

struct FlatnessReport {
  bool flat;
  double max_component;
};
FlatnessReport is_flat(const CurvatureTensor& r);

// Ricci contraction sum_i g(R(u_i,X)Y, u_i) over a g-orthonormal frame;
// equals ricci(s,g) for the Levi-Civita curvature.
Bilinear ricci_from_curvature(const ReductiveSpace& s, const Metric& g,
                              const CurvatureTensor& r);

}  // namespace grfhomog
