#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "curvebeam/geometry.hpp"

using namespace curvebeam;

namespace {

NurbsCurve quarter_circle_xy(double R) {
  NurbsCurve c;
  c.basis = KnotVector(2, {0, 0, 0, 1, 1, 1});
  c.points.resize(3, 3);
  c.points << R, 0, 0, R, R, 0, 0, R, 0;
  c.weights.resize(3);
  c.weights << 1.0, std::sqrt(2.0) / 2.0, 1.0;
  return c;
}

NurbsCurve random_space_cubic(unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  NurbsCurve c;
  c.basis = make_knot_vector(3, 3, Continuity::CPm1);
  const int n = c.basis.num_basis();
  c.points.resize(n, 3);
  for (int i = 0; i < n; ++i)
    c.points.row(i) = Vec3(2.0 * i + 0.3 * uni(rng), uni(rng), uni(rng)).transpose();
  c.weights = VecX::Ones(n);
  return c;
}

NurbsCurve straight_line(double L) {
  NurbsCurve c;
  c.basis = KnotVector(1, {0, 0, 1, 1});
  c.points.resize(2, 3);
  c.points << 0, 0, 0, L, 0, 0;
  c.weights = VecX::Ones(2);
  return c;
}

}  // namespace

TEST_CASE("third curve derivatives match finite differences") {
  const NurbsCurve c = random_space_cubic(3);
  const double h = 1e-5;
  for (double xi : {0.11, 0.29, 0.47, 0.62, 0.85}) {
    Vec3 r, r1, r11, r111, ra, rb, d1, d11a, d11b, dummy;
    c.evaluate3(xi, r, r1, r11, r111);
    c.evaluate(xi - h, ra, d1, d11a);
    c.evaluate(xi + h, rb, d1, d11b);
    CHECK((r111 - (d11b - d11a) / (2 * h)).norm() <= 1e-5 * std::max(1.0, r111.norm()));
    (void)dummy;
  }
}

TEST_CASE("circle metrics: curvature toward the center, zero torsion") {
  const double R = 2.0;
  const NurbsCurve c = quarter_circle_xy(R);
  const FrenetFrameProvider ff(&c);
  for (double xi : {0.05, 0.3, 0.5, 0.77, 0.95}) {
    const FrameData fd = initial_frame_data(c, ff, xi);
    CHECK(fd.K2() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fd.K3() == doctest::Approx(1.0 / R).epsilon(1e-12));
    CHECK(std::abs(fd.K1) <= 1e-12);
    // Frenet normal points toward the center
    CHECK((fd.g2 + fd.r.normalized()).norm() <= 1e-12);
    CHECK((fd.g3 - Vec3(0, 0, 1)).norm() <= 1e-12);
    // Christoffel symbol equals d(sqrt_g)/dxi / sqrt_g
    const double h = 1e-6;
    const FrameData fa = initial_frame_data(c, ff, xi - h);
    const FrameData fb = initial_frame_data(c, ff, xi + h);
    const double fd_gamma = (fb.g - fa.g) / (2 * h) / (2 * fd.g);
    CHECK(fd.Gamma == doctest::Approx(fd_gamma).epsilon(1e-6));
  }
}

TEST_CASE("Frenet director derivatives match finite differences (nonplanar axis)") {
  const NurbsCurve c = random_space_cubic(11);
  const FrenetFrameProvider ff(&c);
  const double h = 1e-6;
  for (double xi : {0.15, 0.37, 0.58, 0.81}) {
    Vec3 g2, g3, g2_1, g3_1, a2, a3, b2, b3, d1, d2;
    ff.frames(xi, g2, g3, g2_1, g3_1);
    ff.frames(xi - h, a2, a3, d1, d2);
    ff.frames(xi + h, b2, b3, d1, d2);
    CHECK((g2_1 - (b2 - a2) / (2 * h)).norm() <= 1e-6 * std::max(1.0, g2_1.norm()));
    CHECK((g3_1 - (b3 - a3) / (2 * h)).norm() <= 1e-6 * std::max(1.0, g3_1.norm()));
  }
}

TEST_CASE("adapted-frame derivative identities") {
  // For any orthonormal adapted frame: g2' = -(Kt3/g) r1 + K1 g3,
  //                                    g3' = +(Kt2/g) r1 - K1 g2.
  const NurbsCurve c = random_space_cubic(29);
  const FrenetFrameProvider ff(&c);
  for (double xi : {0.2, 0.44, 0.71, 0.9}) {
    const FrameData fd = initial_frame_data(c, ff, xi);
    const Vec3 lhs2 = fd.g2_1 - (-(fd.Kt3 / fd.g) * fd.r1 + fd.K1 * fd.g3);
    const Vec3 lhs3 = fd.g3_1 - ((fd.Kt2 / fd.g) * fd.r1 - fd.K1 * fd.g2);
    CHECK(lhs2.norm() <= 1e-10 * std::max(1.0, fd.g2_1.norm()));
    CHECK(lhs3.norm() <= 1e-10 * std::max(1.0, fd.g3_1.norm()));
    // nonplanar cubic: torsion should actually be nonzero somewhere
  }
}

TEST_CASE("straight axis: Frenet frames refuse, explicit directors work") {
  const NurbsCurve line = straight_line(3.0);
  const FrenetFrameProvider ff(&line);
  Vec3 a, b, d, e;
  CHECK_THROWS_AS(ff.frames(0.5, a, b, d, e), NumericalError);

  const ExplicitFrameProvider ep(Vec3(0, 1, 0), Vec3(0, 0, 1));
  const FrameData fd = initial_frame_data(line, ep, 0.5);
  CHECK(fd.g == doctest::Approx(9.0));
  CHECK(fd.K1 == 0.0);
  CHECK(fd.Kt2 == 0.0);
  CHECK(fd.Kt3 == 0.0);
  CHECK(fd.Gamma == 0.0);

  CHECK_THROWS_AS(ExplicitFrameProvider(Vec3(0, 1, 0), Vec3(0, 2, 0)), ConfigError);
}

TEST_CASE("configuration measures are invariant under rigid rotation") {
  const NurbsCurve c = quarter_circle_xy(1.5);
  // rotate the whole control net by a random rotation + translation
  const Eigen::AngleAxisd rot(0.83, Vec3(0.2, -0.5, 0.9).normalized());
  NurbsCurve cr = c;
  for (int i = 0; i < cr.points.rows(); ++i)
    cr.points.row(i) = (rot * (c.points.row(i).transpose() + Vec3(0.3, -2, 1))).transpose();
  const FrenetFrameProvider f0(&c), f1(&cr);
  for (double xi : {0.1, 0.42, 0.88}) {
    const Vec4 m0 = initial_frame_data(c, f0, xi).measures();
    const Vec4 m1 = initial_frame_data(cr, f1, xi).measures();
    CHECK((m0 - m1).norm() <= 1e-12 * std::max(1.0, m0.norm()));
  }
}
