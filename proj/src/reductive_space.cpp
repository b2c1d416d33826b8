#include "grfhomog/reductive_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "grfhomog/errors.hpp"

namespace grfhomog {

ReductiveSpace::ReductiveSpace(LieAlgebra algebra, std::vector<int> isotropy_indices,
                               std::vector<int> m_indices, int orientation)
    : algebra_(std::move(algebra)),
      iso_idx_(std::move(isotropy_indices)),
      m_idx_(std::move(m_indices)),
      orientation_(orientation) {
  const int n = algebra_.dim();
  const double tol = validation_tolerance();
  if (orientation_ != 1 && orientation_ != -1)
    throw DimensionMismatch("orientation must be +1 or -1");

  std::vector<int> seen(n, 0);
  for (int i : iso_idx_) {
    if (i < 0 || i >= n || seen[i]++) throw DimensionMismatch("index sets must partition the basis");
  }
  for (int i : m_idx_) {
    if (i < 0 || i >= n || seen[i]++) throw DimensionMismatch("index sets must partition the basis");
  }
  if (std::any_of(seen.begin(), seen.end(), [](int s) { return s != 1; }))
    throw DimensionMismatch("index sets must partition the basis");

  // position of each ambient index inside its block
  std::vector<int> in_m(n, -1), in_k(n, -1);
  for (int a = 0; a < dim_m(); ++a) in_m[m_idx_[a]] = a;
  for (int z = 0; z < dim_k(); ++z) in_k[iso_idx_[z]] = z;

  auto check_subspace = [&](int i, int j, bool want_m, const char* what) {
    for (int k = 0; k < n; ++k) {
      const double v = algebra_.c(i, j, k);
      if (std::abs(v) <= tol) continue;
      const bool lands_m = in_m[k] >= 0;
      if (lands_m != want_m) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "%s fails: [e_%d, e_%d] has component %g on e_%d", what,
                      i + 1, j + 1, v, k + 1);
        throw NotReductive(buf);
      }
    }
  };
  for (int zi : iso_idx_)
    for (int zj : iso_idx_) check_subspace(zi, zj, false, "[k,k] in k");
  for (int zi : iso_idx_)
    for (int mj : m_idx_) check_subspace(zi, mj, true, "[k,m] in m");

  const int nm = dim_m(), nk = dim_k();
  cm_.resize(static_cast<std::size_t>(nm) * nm);
  ck_.resize(static_cast<std::size_t>(nm) * nm);
  for (int a = 0; a < nm; ++a)
    for (int b = 0; b < nm; ++b) {
      Vec vm = Vec::Zero(nm), vk = Vec::Zero(std::max(nk, 0));
      for (int k = 0; k < n; ++k) {
        const double v = algebra_.c(m_idx_[a], m_idx_[b], k);
        if (v == 0.0) continue;
        if (in_m[k] >= 0)
          vm[in_m[k]] += v;
        else
          vk[in_k[k]] += v;
      }
      cm_[a * nm + b] = std::move(vm);
      ck_[a * nm + b] = std::move(vk);
    }

  iso_act_.resize(nk);
  for (int z = 0; z < nk; ++z) {
    Mat act(nm, nm);
    for (int b = 0; b < nm; ++b)
      for (int a = 0; a < nm; ++a)
        act(a, b) = algebra_.c(iso_idx_[z], m_idx_[b], m_idx_[a]);
    iso_act_[z] = std::move(act);
  }

  const Mat b_full = killing_form(algebra_);
  killing_m_.resize(nm, nm);
  for (int a = 0; a < nm; ++a)
    for (int b = 0; b < nm; ++b) killing_m_(a, b) = b_full(m_idx_[a], m_idx_[b]);
}

Vec ReductiveSpace::bracket_m(const Vec& x, const Vec& y) const {
  const int nm = dim_m();
  if (x.size() != nm || y.size() != nm)
    throw DimensionMismatch("bracket_m arguments must have length dim_m");
  Vec out = Vec::Zero(nm);
  for (int a = 0; a < nm; ++a) {
    if (x[a] == 0.0) continue;
    for (int b = 0; b < nm; ++b) {
      if (y[b] == 0.0) continue;
      out += (x[a] * y[b]) * bracket_m(a, b);
    }
  }
  return out;
}

Mat ReductiveSpace::ad_m(const Vec& x) const {
  const int nm = dim_m();
  Mat out = Mat::Zero(nm, nm);
  for (int b = 0; b < nm; ++b) {
    Vec eb = Vec::Zero(nm);
    eb[b] = 1.0;
    out.col(b) = bracket_m(x, eb);
  }
  return out;
}

ReductiveSpace reductive_split(const LieAlgebra& l, std::vector<int> isotropy_indices,
                               std::vector<int> m_indices, int orientation) {
  return ReductiveSpace(l, std::move(isotropy_indices), std::move(m_indices), orientation);
}

InvarianceReport isotropy_invariance_check(const ReductiveSpace& s, const Mat& bilinear) {
  const int nm = s.dim_m();
  if (bilinear.rows() != nm || bilinear.cols() != nm)
    throw DimensionMismatch("bilinear form must be dim_m x dim_m");
  double defect = 0.0;
  for (int z = 0; z < s.dim_k(); ++z) {
    const Mat& a = s.isotropy_action(z);
    const Mat d = a.transpose() * bilinear + bilinear * a;
    defect = std::max(defect, d.cwiseAbs().maxCoeff());
  }
  return {defect < invariance_tolerance(), defect};
}

}  // namespace grfhomog
