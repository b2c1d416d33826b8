#pragma once

#include <memory>

#include "grfhomog/brf.hpp"
#include "grfhomog/flow.hpp"
#include "grfhomog/forms.hpp"
#include "grfhomog/lie_algebra.hpp"

namespace grfhomog {

// su(2) in the basis (H,E,V) with [H,E]=V, [H,V]=-E, [E,V]=H/2.
LieAlgebra su2();
LieAlgebra su2_su2();
LieAlgebra abelian(int n);

// The homogeneous space SU(2)^2 / K_{p,q} with k = span(e6), m = span(e1..e5)
// in the basis e1=(qH,-pH), e2=(E,0), e3=(V,0), e4=(0,E), e5=(0,V),
// e6=(pH,qH).
class MpqSpace {
 public:
  MpqSpace(int p, int q);

  int p() const { return p_; }
  int q() const { return q_; }
  const ReductiveSpace& space() const { return *space_; }
  std::shared_ptr<const ReductiveSpace> space_ptr() const { return space_; }

  // Closed invariant torsion lambda (q e^123 + p e^145).
  AltForm harmonic_h(double lambda) const;

  // Diagonal BRF chart (mu, a, b, h1): g = diag(mu^2,a^2,a^2,b^2,b^2),
  // H = h1 (q e^123 + p e^145).
  Chart diagonal_chart() const;
  // Five-parameter chart (mu, a, b, c, h1) for p = q = 1, s gauge-fixed to 0,
  // with H closed and coclosed (h2 = h1, h3 = c h1 (a^2+b^2)/(a^2 b^2 + c^2),
  // h4 = 0).
  Chart p_eq_q_chart() const;
  // The chart the BRF solver runs on: diagonal for p != q, five-parameter
  // for p = q.
  Chart brf_chart() const;

  // Linear flow chart in squared parameters: (M,A,B) for p != q, plus the
  // off-diagonal pair (C,S) and the invariant 2-form potential basis for
  // p = q.
  FlowChart flow_chart() const;

  // Normalized BRF point of the brf_chart: (mu_o,a_o,b_o,1) for p != q,
  // (2 sqrt 2, 1, 1, 0, 2) for p = q = 1.
  Vec brf_solution_params() const;
  double mu_o() const;

 private:
  int p_, q_;
  std::shared_ptr<const ReductiveSpace> space_;
};

MpqSpace mpq(int p, int q);

// Compact semisimple Lie group with g = -scale * B and the torsion
// normalized so the Bismut connection is literally zero:
// H(X,Y,Z) = -g([X,Y],Z), i.e. form_scale * omega_B with
// omega_B(X,Y,Z) = B([X,Y],Z).
struct BiInvariantModel {
  std::shared_ptr<const ReductiveSpace> space;
  Metric g;
  AltForm h;
  double form_scale;  // coefficient of omega_B in h
};

BiInvariantModel bi_invariant_group(const LieAlgebra& l, double scale);

struct FlatTorus {
  std::shared_ptr<const ReductiveSpace> space;
  Metric g;
  AltForm h;  // zero 3-form
};

FlatTorus flat_torus(int n);

// Pointwise data for the circle-bundle construction over a base model space.
struct KobayashiData {
  Metric g0;
  Mat ric0;
  AltForm alpha;
  AltForm beta;
  double lambda;
  double mu;
};

struct KobayashiReport {
  bool ok = false;
  char violated = 0;   // 'a', 'b' or 'c' when a condition fails
  double defect = 0.0;
  double c = 0.0;      // sqrt(lambda mu)
  double h = 0.0;      // 2 mu sqrt(lambda)
  double eq1_defect = 0.0;  // Ric0 - 2 alpha_hat - (h^2/4c^2) beta_hat
  double eq2_defect = 0.0;  // 4 c^4 - lambda h^2
};

// Verifies a) alpha ^ beta = 0, b) |beta|^2 = lambda |alpha|^2,
// c) Ric0 = 2 alpha_hat + mu beta_hat, and on success returns the bundle
// constants c = sqrt(lambda mu), h = 2 mu sqrt(lambda) together with the
// residuals of the two bundle equations.
KobayashiReport kobayashi_check(const KobayashiData& data);

}  // namespace grfhomog
