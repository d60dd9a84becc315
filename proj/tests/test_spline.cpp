#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "curvebeam/spline.hpp"

using namespace curvebeam;

namespace {

NurbsCurve quarter_circle_xy(double R) {
  // Exact quadratic rational arc from (R,0,0) to (0,R,0), center at the origin.
  NurbsCurve c;
  c.basis = KnotVector(2, {0, 0, 0, 1, 1, 1});
  c.points.resize(3, 3);
  c.points << R, 0, 0, R, R, 0, 0, R, 0;
  c.weights.resize(3);
  c.weights << 1.0, std::sqrt(2.0) / 2.0, 1.0;
  c.validate();
  return c;
}

}  // namespace

TEST_CASE("uniform open knot vectors, both continuities") {
  const KnotVector a = make_knot_vector(2, 2, Continuity::CPm1);
  CHECK(a.knots() == std::vector<double>{0, 0, 0, 0.5, 1, 1, 1});
  CHECK(a.num_basis() == 4);  // elements + degree

  const KnotVector b = make_knot_vector(2, 2, Continuity::C0);
  CHECK(b.knots() == std::vector<double>{0, 0, 0, 0.5, 0.5, 1, 1, 1});
  CHECK(b.num_basis() == 5);

  for (int p = 1; p <= 5; ++p) {
    for (int ne : {1, 2, 3, 7}) {
      const KnotVector kv = make_knot_vector(p, ne, Continuity::CPm1);
      CHECK(kv.num_basis() == ne + p);
      CHECK(kv.num_elements() == ne);
      CHECK(static_cast<int>(kv.knots().size()) == kv.num_basis() + p + 1);
    }
  }
}

TEST_CASE("partition of unity and derivative sums at random parameters") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int p : {2, 3, 4}) {
    for (auto cont : {Continuity::CPm1, Continuity::C0}) {
      const KnotVector kv = make_knot_vector(p, 5, cont);
      for (int s = 0; s < 20; ++s) {
        const double xi = uni(rng);
        const MatX d = kv.basis_ders(xi, 2);
        CHECK(std::abs(d.row(0).sum() - 1.0) <= 1e-14);
        CHECK(std::abs(d.row(1).sum()) <= 1e-11);
        CHECK(std::abs(d.row(2).sum()) <= 1e-9);
        for (int j = 0; j < d.cols(); ++j) CHECK(d(0, j) >= -1e-15);
      }
    }
  }
}

TEST_CASE("basis derivatives agree with central finite differences") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uni(0.05, 0.95);
  const double h = 1e-6;
  for (int p : {2, 3, 4}) {
    const KnotVector kv = make_knot_vector(p, 4, Continuity::CPm1);
    for (int s = 0; s < 20; ++s) {
      double xi = uni(rng);
      // keep the FD stencil inside one span
      for (double brk : kv.breakpoints())
        if (std::abs(xi - brk) < 10 * h) xi += 20 * h;
      const VecX v0 = kv.basis_row(xi - h, 0);
      const VecX v1 = kv.basis_row(xi + h, 0);
      const VecX d1 = kv.basis_row(xi, 1);
      const VecX fd1 = (v1 - v0) / (2 * h);
      CHECK((d1 - fd1).cwiseAbs().maxCoeff() <= 1e-6 * std::max(1.0, d1.cwiseAbs().maxCoeff()));

      const VecX g0 = kv.basis_row(xi - h, 1);
      const VecX g1 = kv.basis_row(xi + h, 1);
      const VecX d2 = kv.basis_row(xi, 2);
      const VecX fd2 = (g1 - g0) / (2 * h);
      CHECK((d2 - fd2).cwiseAbs().maxCoeff() <= 1e-5 * std::max(1.0, d2.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("quadratic rational arc is an exact quarter circle") {
  const double R = 2.5;
  const NurbsCurve c = quarter_circle_xy(R);
  for (int i = 0; i <= 50; ++i) {
    const double xi = i / 50.0;
    const Vec3 r = c.point(xi);
    CHECK(std::abs(r.norm() - R) <= 1e-12 * R);
    CHECK(std::abs(r.z()) <= 1e-13 * R);
  }
  CHECK((c.point(0.0) - Vec3(R, 0, 0)).norm() <= 1e-13 * R);
  CHECK((c.point(1.0) - Vec3(0, R, 0)).norm() <= 1e-13 * R);
}

TEST_CASE("knot insertion and k-refinement preserve the curve") {
  const double R = 1.0;
  const NurbsCurve c = quarter_circle_xy(R);

  NurbsCurve ins = insert_knot(insert_knot(c, 0.3), 0.7);
  for (int i = 0; i <= 200; ++i) {
    const double xi = i / 200.0;
    CHECK((ins.point(xi) - c.point(xi)).norm() <= 1e-12);
  }

  for (auto cont : {Continuity::CPm1, Continuity::C0}) {
    for (int p : {2, 3, 4}) {
      const NurbsCurve fine = k_refine(c, p, 8, cont);
      CHECK(fine.basis.degree() == p);
      CHECK(fine.basis.num_elements() == 8);
      if (cont == Continuity::CPm1) CHECK(fine.basis.num_basis() == 8 + p);
      for (int i = 0; i <= 200; ++i) {
        const double xi = i / 200.0;
        CHECK((fine.point(xi) - c.point(xi)).norm() <= 1e-12);
        // still an exact circle after refinement
        CHECK(std::abs(fine.point(xi).norm() - R) <= 1e-12);
      }
    }
  }
}

TEST_CASE("C0 spaces have basis-derivative jumps at interior breakpoints") {
  const KnotVector kv = make_knot_vector(3, 2, Continuity::C0);
  const double eps = 1e-9;
  const VecX dm = kv.basis_row(0.5 - eps, 1);
  const VecX dp = kv.basis_row(0.5 + eps, 1);
  CHECK((dm - dp).cwiseAbs().maxCoeff() > 1.0);  // genuine kink, not roundoff

  const KnotVector smooth = make_knot_vector(3, 2, Continuity::CPm1);
  const VecX sm = smooth.basis_row(0.5 - eps, 1);
  const VecX sp = smooth.basis_row(0.5 + eps, 1);
  CHECK((sm - sp).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(make_knot_vector(0, 2, Continuity::CPm1), ConfigError);
  CHECK_THROWS_AS(make_knot_vector(2, 0, Continuity::CPm1), ConfigError);
  CHECK_THROWS_AS(KnotVector(2, {0, 0, 0, 0.6, 0.4, 1, 1, 1}), ConfigError);
  CHECK_THROWS_AS(KnotVector(2, {0, 0, 0.5, 1, 1, 1}), ConfigError);

  NurbsCurve bad = quarter_circle_xy(1.0);
  bad.weights[1] = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  NurbsCurve multi = insert_knot(quarter_circle_xy(1.0), 0.5);
  CHECK_THROWS_AS(degree_elevate(multi, 1), ConfigError);
}

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  for (int n = 1; n <= 8; ++n) {
    const QuadratureRule q = gauss_legendre(n, 0.0, 1.0);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += q.weights[i] * std::pow(q.points[i], k);
      CHECK(std::abs(s - 1.0 / (k + 1)) <= 1e-13);
    }
  }
}
