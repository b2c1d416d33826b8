#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "grfhomog/common.hpp"
#include "grfhomog/reductive_space.hpp"

namespace grfhomog {

// Invariant Riemannian metric on m: symmetric positive definite matrix.
class Metric {
 public:
  explicit Metric(Mat components);

  int dim() const { return static_cast<int>(g_.rows()); }
  const Mat& components() const { return g_; }
  double operator()(int i, int j) const { return g_(i, j); }
  const Mat& inverse() const { return ginv_; }
  // Columns form a g-orthonormal frame (inverse transpose of the lower
  // Cholesky factor).
  const Mat& frame() const { return frame_; }
  double sqrt_det() const { return sqrt_det_; }

 private:
  Mat g_, ginv_, frame_;
  double sqrt_det_;
};

// General bilinear form on m (not necessarily symmetric).
class Bilinear {
 public:
  Bilinear() = default;
  explicit Bilinear(Mat components) : b_(std::move(components)) {}
  static Bilinear zero(int n) { return Bilinear(Mat::Zero(n, n)); }

  int dim() const { return static_cast<int>(b_.rows()); }
  const Mat& components() const { return b_; }
  Mat& components() { return b_; }
  double operator()(int i, int j) const { return b_(i, j); }
  Mat symmetric_part() const { return 0.5 * (b_ + b_.transpose()); }
  Mat antisymmetric_part() const { return 0.5 * (b_ - b_.transpose()); }
  double max_abs() const { return b_.size() ? b_.cwiseAbs().maxCoeff() : 0.0; }

 private:
  Mat b_;
};

// Alternating k-form on R^n, stored densely on strictly increasing index
// tuples in lexicographic order; evaluation on arbitrary tuples by sign
// extension.
class AltForm {
 public:
  AltForm(int n, int degree);

  int n() const { return n_; }
  int degree() const { return k_; }
  int size() const { return static_cast<int>(tuples_.size()); }
  const std::vector<std::vector<int>>& tuples() const { return tuples_; }

  double& coeff(int idx) { return c_[idx]; }
  double coeff(int idx) const { return c_[idx]; }
  // Coefficient on an increasing tuple.
  double& coeff(const std::vector<int>& tuple);
  // Value on an arbitrary index tuple (0 on repeated indices).
  double value(const std::vector<int>& idx) const;
  double value(std::initializer_list<int> idx) const;
  // Multilinear evaluation on k coefficient vectors.
  double evaluate(const std::vector<Vec>& vectors) const;

  const Vec& coeffs() const { return c_; }
  Vec& coeffs() { return c_; }
  double max_abs() const { return c_.size() ? c_.cwiseAbs().maxCoeff() : 0.0; }

  AltForm& operator+=(const AltForm& other);
  AltForm& operator-=(const AltForm& other);
  AltForm& operator*=(double s);
  friend AltForm operator+(AltForm a, const AltForm& b) { return a += b; }
  friend AltForm operator-(AltForm a, const AltForm& b) { return a -= b; }
  friend AltForm operator*(double s, AltForm a) { return a *= s; }

  // terms: 0-based strictly increasing tuples with values.
  static AltForm from_terms(int n, int degree,
                            const std::vector<std::pair<std::vector<int>, double>>& terms);

 private:
  int n_, k_;
  std::vector<std::vector<int>> tuples_;
  Vec c_;
};

// Sign of the permutation sorting `idx`; 0 if an index repeats.
int permutation_sign(std::vector<int> idx);

AltForm wedge(const AltForm& a, const AltForm& b);
AltForm interior_product(const AltForm& a, const Vec& v);

// Invariant exterior differential via the Koszul formula:
// d a(X_0,...,X_k) = sum_{i<j} (-1)^{i+j} a([X_i,X_j]_m, ...rest in order...).
AltForm koszul_d(const ReductiveSpace& s, const AltForm& a);

// Hodge star for the volume form sqrt(det g) e^{1...n} in the stored
// orientation; ** = (-1)^{k(n-k)}.
AltForm hodge_star(const ReductiveSpace& s, const Metric& g, const AltForm& a);

// Formal adjoint of koszul_d for the full-contraction inner product,
// implemented as k (-1)^{n(k+1)+1} * d * on degree k.
AltForm codifferential(const ReductiveSpace& s, const Metric& g, const AltForm& a);

// Full ordered contraction: <a,b> = k! sum over increasing orthonormal-frame
// tuples of a(u_T) b(u_T).
double inner_product(const Metric& g, const AltForm& a, const AltForm& b);
double form_norm_sq(const ReductiveSpace& s, const Metric& g, const AltForm& a);

struct HarmonicReport {
  bool harmonic;
  double d_norm;
  double delta_norm;
};
HarmonicReport is_harmonic(const ReductiveSpace& s, const Metric& g, const AltForm& a);

// H^2(X,Y) = <i_X H, i_Y H> with the full-contraction inner product on 2-forms:
// H^2(X,X) = sum_{i,j} H(X,u_i,u_j)^2 over a g-orthonormal frame.
Bilinear h_squared(const ReductiveSpace& s, const Metric& g, const AltForm& h);

// sigma_H = 1/2 sum_i i_{u_i}H ^ i_{u_i}H over a g-orthonormal frame.
AltForm fundamental_four_form(const ReductiveSpace& s, const Metric& g, const AltForm& h);

InvarianceReport isotropy_invariance_check(const ReductiveSpace& s, const AltForm& a);

}  // namespace grfhomog
