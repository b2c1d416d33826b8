#include "grfhomog/forms.hpp"

#include <algorithm>
#include <cmath>

#include "grfhomog/errors.hpp"

namespace grfhomog {

namespace {

std::vector<std::vector<int>> increasing_tuples(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> t(k);
  for (int i = 0; i < k; ++i) t[i] = i;
  while (true) {
    out.push_back(t);
    if (k == 0) break;
    int pos = k - 1;
    while (pos >= 0 && t[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++t[pos];
    for (int i = pos + 1; i < k; ++i) t[i] = t[i - 1] + 1;
  }
  return out;
}

// Lexicographic rank of a strictly increasing tuple among C(n,k) tuples.
int tuple_rank(int n, const std::vector<int>& t) {
  static auto binom = [](int nn, int kk) -> long {
    if (kk < 0 || kk > nn) return 0;
    long r = 1;
    for (int i = 0; i < kk; ++i) r = r * (nn - i) / (i + 1);
    return r;
  };
  const int k = static_cast<int>(t.size());
  long rank = 0;
  int prev = -1;
  for (int pos = 0; pos < k; ++pos) {
    for (int v = prev + 1; v < t[pos]; ++v) rank += binom(n - v - 1, k - pos - 1);
    prev = t[pos];
  }
  return static_cast<int>(rank);
}

}  // namespace

int permutation_sign(std::vector<int> idx) {
  int sign = 1;
  for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
    std::size_t mn = i;
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      if (idx[j] == idx[mn]) return 0;
      if (idx[j] < idx[mn]) mn = j;
    }
    if (mn != i) {
      std::swap(idx[i], idx[mn]);
      sign = -sign;
    }
  }
  return sign;
}

Metric::Metric(Mat components) : g_(std::move(components)) {
  if (g_.rows() != g_.cols() || g_.rows() == 0)
    throw DimensionMismatch("metric must be a square matrix");
  if ((g_ - g_.transpose()).cwiseAbs().maxCoeff() > 1e-14)
    throw SingularMetric("metric is not symmetric");
  Eigen::LLT<Mat> llt(g_);
  if (llt.info() != Eigen::Success)
    throw SingularMetric("metric is not positive definite");
  const Mat l = llt.matrixL();
  frame_ = l.transpose().triangularView<Eigen::Upper>().solve(
      Mat::Identity(g_.rows(), g_.cols()));
  ginv_ = llt.solve(Mat::Identity(g_.rows(), g_.cols()));
  sqrt_det_ = l.diagonal().prod();
}

AltForm::AltForm(int n, int degree) : n_(n), k_(degree) {
  if (degree < 0) throw DegreeUnderflow("form degree must be nonnegative");
  // degree > n is the zero space: no coefficients stored
  tuples_ = increasing_tuples(n, degree);
  c_ = Vec::Zero(static_cast<int>(tuples_.size()));
}

double& AltForm::coeff(const std::vector<int>& tuple) {
  if (static_cast<int>(tuple.size()) != k_)
    throw DimensionMismatch("tuple length does not match form degree");
  return c_[tuple_rank(n_, tuple)];
}

double AltForm::value(const std::vector<int>& idx) const {
  if (static_cast<int>(idx.size()) != k_)
    throw DimensionMismatch("tuple length does not match form degree");
  const int sign = permutation_sign(idx);
  if (sign == 0) return 0.0;
  std::vector<int> sorted = idx;
  std::sort(sorted.begin(), sorted.end());
  return sign * c_[tuple_rank(n_, sorted)];
}

double AltForm::value(std::initializer_list<int> idx) const {
  return value(std::vector<int>(idx));
}

double AltForm::evaluate(const std::vector<Vec>& vectors) const {
  if (static_cast<int>(vectors.size()) != k_)
    throw DimensionMismatch("need exactly degree-many vectors");
  if (k_ == 0) return c_[0];
  double total = 0.0;
  Mat minor(k_, k_);
  for (int t = 0; t < size(); ++t) {
    if (c_[t] == 0.0) continue;
    for (int r = 0; r < k_; ++r)
      for (int col = 0; col < k_; ++col) minor(r, col) = vectors[r][tuples_[t][col]];
    total += c_[t] * minor.determinant();
  }
  return total;
}

AltForm& AltForm::operator+=(const AltForm& other) {
  if (other.n_ != n_ || other.k_ != k_)
    throw DimensionMismatch("form shapes do not match");
  c_ += other.c_;
  return *this;
}

AltForm& AltForm::operator-=(const AltForm& other) {
  if (other.n_ != n_ || other.k_ != k_)
    throw DimensionMismatch("form shapes do not match");
  c_ -= other.c_;
  return *this;
}

AltForm& AltForm::operator*=(double s) {
  c_ *= s;
  return *this;
}

AltForm AltForm::from_terms(int n, int degree,
                            const std::vector<std::pair<std::vector<int>, double>>& terms) {
  AltForm out(n, degree);
  for (const auto& [tuple, val] : terms) {
    if (!std::is_sorted(tuple.begin(), tuple.end()) ||
        std::adjacent_find(tuple.begin(), tuple.end()) != tuple.end())
      throw DimensionMismatch("term tuples must be strictly increasing");
    out.coeff(tuple) += val;
  }
  return out;
}

AltForm wedge(const AltForm& a, const AltForm& b) {
  if (a.n() != b.n()) throw DimensionMismatch("forms live on different spaces");
  if (a.degree() + b.degree() > a.n())
    throw DegreeOverflow("wedge degree exceeds dimension");
  AltForm out(a.n(), a.degree() + b.degree());
  for (int s = 0; s < a.size(); ++s) {
    if (a.coeff(s) == 0.0) continue;
    for (int t = 0; t < b.size(); ++t) {
      if (b.coeff(t) == 0.0) continue;
      std::vector<int> joined = a.tuples()[s];
      joined.insert(joined.end(), b.tuples()[t].begin(), b.tuples()[t].end());
      const int sign = permutation_sign(joined);
      if (sign == 0) continue;
      std::sort(joined.begin(), joined.end());
      out.coeff(joined) += sign * a.coeff(s) * b.coeff(t);
    }
  }
  return out;
}

AltForm interior_product(const AltForm& a, const Vec& v) {
  if (a.degree() == 0) throw DegreeUnderflow("interior product of a 0-form");
  if (v.size() != a.n()) throw DimensionMismatch("vector length does not match form");
  AltForm out(a.n(), a.degree() - 1);
  for (int t = 0; t < out.size(); ++t) {
    double sum = 0.0;
    std::vector<int> idx(a.degree());
    std::copy(out.tuples()[t].begin(), out.tuples()[t].end(), idx.begin() + 1);
    for (int c = 0; c < a.n(); ++c) {
      if (v[c] == 0.0) continue;
      idx[0] = c;
      sum += v[c] * a.value(idx);
    }
    out.coeff(t) = sum;
  }
  return out;
}

AltForm koszul_d(const ReductiveSpace& s, const AltForm& a) {
  const int n = s.dim_m();
  if (a.n() != n) throw DimensionMismatch("form does not live on m");
  if (a.degree() == n) throw DegreeOverflow("differential of a top-degree form");
  const int k = a.degree();
  AltForm out(n, k + 1);
  std::vector<int> arg(k);
  for (int t = 0; t < out.size(); ++t) {
    const std::vector<int>& tup = out.tuples()[t];
    double total = 0.0;
    for (int i = 0; i <= k; ++i)
      for (int j = i + 1; j <= k; ++j) {
        const Vec& br = s.bracket_m(tup[i], tup[j]);
        int pos = 1;
        for (int r = 0; r <= k; ++r)
          if (r != i && r != j) arg[pos++] = tup[r];
        double val = 0.0;
        for (int c = 0; c < n; ++c) {
          if (br[c] == 0.0) continue;
          arg[0] = c;
          val += br[c] * a.value(arg);
        }
        total += (((i + j) % 2) ? -1.0 : 1.0) * val;
      }
    out.coeff(t) = total;
  }
  return out;
}

AltForm hodge_star(const ReductiveSpace& s, const Metric& g, const AltForm& a) {
  const int n = s.dim_m();
  if (a.n() != n || g.dim() != n)
    throw DimensionMismatch("form/metric do not live on m");
  const int k = a.degree();
  const Mat& ginv = g.inverse();
  AltForm out(n, n - k);
  for (int t = 0; t < out.size(); ++t) {
    const std::vector<int>& j_tup = out.tuples()[t];
    // complement of the output tuple, increasing
    std::vector<int> comp;
    comp.reserve(k);
    {
      std::vector<char> used(n, 0);
      for (int v : j_tup) used[v] = 1;
      for (int v = 0; v < n; ++v)
        if (!used[v]) comp.push_back(v);
    }
    // index-raised component of a on the complement via k x k Gram minors
    double raised = 0.0;
    if (k == 0) {
      raised = a.coeff(0);
    } else {
      Mat minor(k, k);
      for (int u = 0; u < a.size(); ++u) {
        if (a.coeff(u) == 0.0) continue;
        const std::vector<int>& k_tup = a.tuples()[u];
        for (int r = 0; r < k; ++r)
          for (int cidx = 0; cidx < k; ++cidx)
            minor(r, cidx) = ginv(comp[r], k_tup[cidx]);
        raised += minor.determinant() * a.coeff(u);
      }
    }
    std::vector<int> perm = comp;
    perm.insert(perm.end(), j_tup.begin(), j_tup.end());
    out.coeff(t) = s.orientation() * g.sqrt_det() * permutation_sign(perm) * raised;
  }
  return out;
}

AltForm codifferential(const ReductiveSpace& s, const Metric& g, const AltForm& a) {
  const int n = s.dim_m();
  const int k = a.degree();
  if (k == 0) throw DegreeUnderflow("codifferential of a 0-form");
  const AltForm starred = hodge_star(s, g, a);
  const AltForm dstar = koszul_d(s, starred);
  AltForm out = hodge_star(s, g, dstar);
  const double sign = ((n * (k + 1) + 1) % 2) ? -1.0 : 1.0;
  out *= sign * k;
  return out;
}

double inner_product(const Metric& g, const AltForm& a, const AltForm& b) {
  if (a.n() != b.n() || a.degree() != b.degree())
    throw DimensionMismatch("forms must share space and degree");
  const int k = a.degree();
  const Mat& e = g.frame();
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  double total = 0.0;
  std::vector<Vec> cols(k);
  for (int t = 0; t < a.size(); ++t) {
    for (int r = 0; r < k; ++r) cols[r] = e.col(a.tuples()[t][r]);
    total += a.evaluate(cols) * b.evaluate(cols);
  }
  return fact * total;
}

double form_norm_sq(const ReductiveSpace& s, const Metric& g, const AltForm& a) {
  if (a.n() != s.dim_m()) throw DimensionMismatch("form does not live on m");
  return inner_product(g, a, a);
}

HarmonicReport is_harmonic(const ReductiveSpace& s, const Metric& g, const AltForm& a) {
  const int n = s.dim_m();
  const double d_norm =
      a.degree() < n ? std::sqrt(form_norm_sq(s, g, koszul_d(s, a))) : 0.0;
  const double delta_norm =
      a.degree() > 0 ? std::sqrt(form_norm_sq(s, g, codifferential(s, g, a))) : 0.0;
  return {d_norm < 1e-10 && delta_norm < 1e-10, d_norm, delta_norm};
}

Bilinear h_squared(const ReductiveSpace& s, const Metric& g, const AltForm& h) {
  const int n = s.dim_m();
  if (h.degree() != 3) throw DimensionMismatch("h_squared expects a 3-form");
  if (h.n() != n || g.dim() != n) throw DimensionMismatch("form/metric do not live on m");
  const Mat& e = g.frame();
  // w(x, c, d) = H(e_x, u_c, u_d) over the orthonormal frame
  std::vector<Mat> w(n, Mat::Zero(n, n));
  std::vector<int> idx(3);
  for (int x = 0; x < n; ++x)
    for (int c = 0; c < n; ++c)
      for (int d = 0; d < n; ++d) {
        double v = 0.0;
        for (int cc = 0; cc < n; ++cc) {
          if (e(cc, c) == 0.0) continue;
          for (int dd = 0; dd < n; ++dd) {
            if (e(dd, d) == 0.0) continue;
            idx[0] = x, idx[1] = cc, idx[2] = dd;
            v += e(cc, c) * e(dd, d) * h.value(idx);
          }
        }
        w[x](c, d) = v;
      }
  Mat out(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = x; y < n; ++y) {
      const double v = w[x].cwiseProduct(w[y]).sum();
      out(x, y) = out(y, x) = v;
    }
  return Bilinear(out);
}

AltForm fundamental_four_form(const ReductiveSpace& s, const Metric& g, const AltForm& h) {
  const int n = s.dim_m();
  if (h.degree() != 3) throw DimensionMismatch("fundamental_four_form expects a 3-form");
  if (h.n() != n || g.dim() != n) throw DimensionMismatch("form/metric do not live on m");
  AltForm out(n, std::min(4, n));
  if (n < 4) return out;  // a 4-form on dim < 4 vanishes
  const Mat& e = g.frame();
  for (int i = 0; i < n; ++i) {
    const AltForm iv = interior_product(h, e.col(i));
    out += 0.5 * wedge(iv, iv);
  }
  return out;
}

InvarianceReport isotropy_invariance_check(const ReductiveSpace& s, const AltForm& a) {
  if (a.n() != s.dim_m()) throw DimensionMismatch("form does not live on m");
  const int k = a.degree();
  double defect = 0.0;
  std::vector<int> idx(k);
  for (int z = 0; z < s.dim_k(); ++z) {
    const Mat& act = s.isotropy_action(z);
    for (int t = 0; t < a.size(); ++t) {
      const std::vector<int>& tup = a.tuples()[t];
      double sum = 0.0;
      for (int pos = 0; pos < k; ++pos) {
        std::copy(tup.begin(), tup.end(), idx.begin());
        for (int c = 0; c < a.n(); ++c) {
          if (act(c, tup[pos]) == 0.0) continue;
          idx[pos] = c;
          sum += act(c, tup[pos]) * a.value(idx);
        }
        idx[pos] = tup[pos];
      }
      defect = std::max(defect, std::abs(sum));
    }
  }
  return {defect < invariance_tolerance(), defect};
}

}  // namespace grfhomog
