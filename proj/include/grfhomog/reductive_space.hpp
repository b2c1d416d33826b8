#pragma once

#include <vector>

#include "grfhomog/common.hpp"
#include "grfhomog/lie_algebra.hpp"

namespace grfhomog {

// Reductive decomposition g = k + m of a Lie algebra: k is the isotropy
// subalgebra, m the tangent module, with [k,k] in k and [k,m] in m.
// Caches the projected bracket on m and the isotropy action on m.
class ReductiveSpace {
 public:
  ReductiveSpace(LieAlgebra algebra, std::vector<int> isotropy_indices,
                 std::vector<int> m_indices, int orientation = +1);

  const LieAlgebra& algebra() const { return algebra_; }
  const std::vector<int>& isotropy_indices() const { return iso_idx_; }
  const std::vector<int>& m_indices() const { return m_idx_; }
  int dim_m() const { return static_cast<int>(m_idx_.size()); }
  int dim_k() const { return static_cast<int>(iso_idx_.size()); }
  int orientation() const { return orientation_; }

  // m-projection of [e_a, e_b] for m-basis positions a, b; coefficients over
  // the m-basis.
  const Vec& bracket_m(int a, int b) const { return cm_[a * dim_m() + b]; }
  Vec bracket_m(const Vec& x, const Vec& y) const;
  // k-projection of [e_a, e_b], coefficients over the isotropy basis.
  const Vec& bracket_k(int a, int b) const { return ck_[a * dim_m() + b]; }
  // ad(z)|_m in m coordinates for the z-th isotropy basis vector.
  const Mat& isotropy_action(int z) const { return iso_act_[z]; }
  // Matrix of y -> [x,y]_m for an m-coefficient vector x.
  Mat ad_m(const Vec& x) const;
  // Ambient Killing form restricted to m.
  const Mat& killing_m() const { return killing_m_; }

 private:
  LieAlgebra algebra_;
  std::vector<int> iso_idx_, m_idx_;
  int orientation_;
  std::vector<Vec> cm_, ck_;
  std::vector<Mat> iso_act_;
  Mat killing_m_;
};

ReductiveSpace reductive_split(const LieAlgebra& l,
                               std::vector<int> isotropy_indices,
                               std::vector<int> m_indices,
                               int orientation = +1);

struct InvarianceReport {
  bool invariant;
  double defect;
};

// Infinitesimal invariance of a bilinear form on m under the isotropy action:
// defect = max_z max_ij |b([z,e_i]_m, e_j) + b(e_i, [z,e_j]_m)|.
InvarianceReport isotropy_invariance_check(const ReductiveSpace& s, const Mat& bilinear);

}  // namespace grfhomog
