#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "grfhomog/catalog.hpp"
#include "grfhomog/errors.hpp"
#include "grfhomog/lie_algebra.hpp"
#include "grfhomog/reductive_space.hpp"

using namespace grfhomog;

namespace {

Vec basis_vec(int n, int i) {
  Vec v = Vec::Zero(n);
  v[i] = 1.0;
  return v;
}

}  // namespace

TEST_CASE("su(2) brackets in the (H,E,V) basis") {
  const LieAlgebra l = su2();
  REQUIRE(l.dim() == 3);
  const Vec h = basis_vec(3, 0), e = basis_vec(3, 1), v = basis_vec(3, 2);
  CHECK((l.bracket(h, e) - v).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((l.bracket(h, v) + e).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((l.bracket(e, v) - 0.5 * h).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(l.is_unimodular(1e-14));
}

TEST_CASE("bracket is bilinear and antisymmetric") {
  const LieAlgebra l = su2_su2();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Vec x(6), y(6), z(6);
    for (int i = 0; i < 6; ++i) {
      x[i] = unit(rng);
      y[i] = unit(rng);
      z[i] = unit(rng);
    }
    CHECK((l.bracket(x, y) + l.bracket(y, x)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((l.bracket(x + 2.0 * z, y) - l.bracket(x, y) - 2.0 * l.bracket(z, y))
              .cwiseAbs()
              .maxCoeff() < 1e-13);
    CHECK((l.ad(x) * y - l.bracket(x, y)).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("Killing form of su(2) and of the product algebra") {
  const Mat b = killing_form(su2());
  Mat expected = Mat::Zero(3, 3);
  expected(0, 0) = -2.0;
  expected(1, 1) = -1.0;
  expected(2, 2) = -1.0;
  CHECK((b - expected).cwiseAbs().maxCoeff() < 1e-14);

  const Mat b2 = killing_form(su2_su2());
  CHECK((b2.topLeftCorner(3, 3) - expected).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((b2.bottomRightCorner(3, 3) - expected).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(b2.topRightCorner(3, 3).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("Killing form degenerates on an appended abelian slot") {
  const LieAlgebra l = direct_sum(su2(), abelian(1));
  CHECK(l.dim() == 4);
  const Mat b = killing_form(l);
  CHECK(b.row(3).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(b.col(3).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(std::abs(b(0, 0) + 2.0) < 1e-14);
}

TEST_CASE("abelian algebras have zero brackets and zero Killing form") {
  const LieAlgebra l = abelian(3);
  CHECK(killing_form(l).cwiseAbs().maxCoeff() == 0.0);
  CHECK(l.bracket(basis_vec(3, 0), basis_vec(3, 1)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(l.is_unimodular(0.0));
}

TEST_CASE("construction rejects antisymmetry violations") {
  std::vector<std::vector<std::vector<double>>> c(
      2, std::vector<std::vector<double>>(2, std::vector<double>(2, 0.0)));
  c[0][1][0] = 1.0;
  c[1][0][0] = 1.0;
  CHECK_THROWS_AS(build_lie_algebra(c), AntisymmetryViolation);
}

TEST_CASE("construction rejects Jacobi violations and reports the worst triple") {
  std::vector<std::vector<std::vector<double>>> c(
      3, std::vector<std::vector<double>>(3, std::vector<double>(3, 0.0)));
  c[0][1][2] = 1.0;
  c[1][0][2] = -1.0;
  c[0][2][1] = 1.0;
  c[2][0][1] = -1.0;
  CHECK_NOTHROW(build_lie_algebra(c));

  c[1][2][1] = 1.0;
  c[2][1][1] = -1.0;
  try {
    build_lie_algebra(c);
    CHECK(false);
  } catch (const JacobiViolation& err) {
    CHECK(err.defect > 0.1);
    const std::vector<int> triple = {err.i, err.j, err.k};
    CHECK(triple[0] >= 0);
    CHECK(triple[2] <= 2);
  }
}

TEST_CASE("change_basis preserves the bracket and transforms the Killing form") {
  const LieAlgebra l = su2();
  Mat p(3, 3);
  p << 2, 0, 0, 0, 1, 1, 0, -1, 1;
  const LieAlgebra m = change_basis(l, p);
  const Mat bk = killing_form(m);
  const Mat expected = p.transpose() * killing_form(l) * p;
  CHECK((bk - expected).cwiseAbs().maxCoeff() < 1e-12);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vec x(3), y(3);
  for (int i = 0; i < 3; ++i) {
    x[i] = unit(rng);
    y[i] = unit(rng);
  }
  const Vec lhs = p * m.bracket(x, y);
  const Vec rhs = l.bracket(p * x, p * y);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("reductive split of the M_{p,q} algebra") {
  const MpqSpace m = mpq(2, 1);
  const ReductiveSpace& s = m.space();
  CHECK(s.dim_m() == 5);
  CHECK(s.dim_k() == 1);
  CHECK(s.algebra().dim() == 6);
  CHECK(s.algebra().is_unimodular(1e-14));

  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      CHECK((s.bracket_m(a, b) + s.bracket_m(b, a)).cwiseAbs().maxCoeff() < 1e-14);

  const Mat act = s.isotropy_action(0);
  CHECK((act + act.transpose()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("non-reductive splits are rejected") {
  std::vector<std::vector<std::vector<double>>> c(
      2, std::vector<std::vector<double>>(2, std::vector<double>(2, 0.0)));
  c[0][1][1] = 1.0;
  c[1][0][1] = -1.0;
  const LieAlgebra l = build_lie_algebra(c);
  CHECK_THROWS_AS(reductive_split(l, {1}, {0}), NotReductive);
}

TEST_CASE("isotropy invariance check separates invariant and generic tensors") {
  const MpqSpace m = mpq(2, 1);
  const ReductiveSpace& s = m.space();
  const Mat g = (Vec(5) << 1.7, 0.6, 0.6, 1.2, 1.2).finished().asDiagonal();
  const auto ok = isotropy_invariance_check(s, g);
  CHECK(ok.invariant);
  CHECK(ok.defect < 1e-12);

  Mat bad = g;
  bad(1, 2) = bad(2, 1) = 0.3;
  bad(1, 1) = 0.9;
  const auto report = isotropy_invariance_check(s, bad);
  CHECK_FALSE(report.invariant);
  CHECK(report.defect > 1e-3);
}
