#include "curvebeam/frames.hpp"

#include <cmath>

namespace curvebeam {

Vec3 smallest_rotation(const Vec3& v, const Vec3& a, const Vec3& b) {
  const double denom = 1.0 + a.dot(b);
  if (denom <= 1e-10)
    throw NumericalError("smallest rotation undefined: tangent flipped by ~180 degrees");
  return v - (b.dot(v) / denom) * (a + b);
}

Vec3 rodrigues(const Vec3& t, double phi, const Vec3& v) {
  const double c = std::cos(phi), s = std::sin(phi);
  return c * v + s * t.cross(v) + (1.0 - c) * t.dot(v) * t;
}

DirectorPair sr_transport(const Vec3& g2r, const Vec3& g2r_1, const Vec3& g3r,
                          const Vec3& g3r_1, const Vec3& a, const Vec3& a_1,
                          const Vec3& b, const Vec3& b_1) {
  const double denom = 1.0 + a.dot(b);
  if (denom <= 1e-10)
    throw NumericalError("smallest rotation undefined: tangent flipped by ~180 degrees");
  const Vec3 ab = a + b;
  const Vec3 ab_1 = a_1 + b_1;
  const double denom_1 = a_1.dot(b) + a.dot(b_1);

  auto transport = [&](const Vec3& v, const Vec3& v_1, Vec3& out, Vec3& out_1) {
    const double f = b.dot(v) / denom;
    const double f_1 = (b_1.dot(v) + b.dot(v_1)) / denom - f * denom_1 / denom;
    out = v - f * ab;
    out_1 = v_1 - f_1 * ab - f * ab_1;
  };

  DirectorPair p;
  transport(g2r, g2r_1, p.g2, p.g2_1);
  transport(g3r, g3r_1, p.g3, p.g3_1);
  return p;
}

void twist_adapted(DirectorPair& f, double phi, double phi_1) {
  const double c = std::cos(phi), s = std::sin(phi);
  const Vec3 g2 = c * f.g2 + s * f.g3;
  const Vec3 g3 = -s * f.g2 + c * f.g3;
  const Vec3 g2_1 =
      c * f.g2_1 + s * f.g3_1 + phi_1 * (-s * f.g2 + c * f.g3);
  const Vec3 g3_1 =
      -s * f.g2_1 + c * f.g3_1 + phi_1 * (-c * f.g2 - s * f.g3);
  f.g2 = g2;
  f.g3 = g3;
  f.g2_1 = g2_1;
  f.g3_1 = g3_1;
}

double adapted_angle(const Vec3& r2, const Vec3& r3, const Vec3& c2) {
  return std::atan2(c2.dot(r3), c2.dot(r2));
}

}  // namespace curvebeam
