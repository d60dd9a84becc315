#include "curvebeam/geometry.hpp"

#include <cmath>

namespace curvebeam {

void FrameData::finalize() {
  g = r1.squaredNorm();
  if (!(g > 1e-24)) throw NumericalError("FrameData: degenerate axial metric");
  sqrt_g = std::sqrt(g);
  Gamma = r1.dot(r11) / g;
  Kt2 = -r11.dot(g3);
  Kt3 = r11.dot(g2);
  K1 = g2_1.dot(g3);
}

void FrenetFrameProvider::frames(double xi, Vec3& g2, Vec3& g3, Vec3& g2_1,
                                 Vec3& g3_1) const {
  Vec3 r, r1, r11, r111;
  curve_->evaluate3(xi, r, r1, r11, r111);
  const double g = r1.squaredNorm();
  const Vec3 c = r1.cross(r11);
  const double cn = c.norm();
  if (cn <= 1e-12 * g)
    throw NumericalError(
        "Frenet frames degenerate (straight or inflected axis); supply explicit directors");
  const double sqrt_g = std::sqrt(g);

  const Vec3 b = c / cn;
  const Vec3 t = r1 / sqrt_g;
  const Vec3 n = b.cross(t);

  // Parametric derivatives: b from the normalized cross product, t from the
  // normalized velocity, n = b x t by the product rule.
  const Vec3 cp = r1.cross(r111);
  const Vec3 bp = (cp - cp.dot(b) * b) / cn;
  const double Gamma = r1.dot(r11) / g;
  const Vec3 tp = (r11 - Gamma * r1) / sqrt_g;
  const Vec3 np = bp.cross(t) + b.cross(tp);

  g2 = n;
  g3 = b;
  g2_1 = np;
  g3_1 = bp;
}

ExplicitFrameProvider::ExplicitFrameProvider(const Vec3& g2, const Vec3& g3) {
  if (g2.norm() < 1e-12 || g3.norm() < 1e-12)
    throw ConfigError("ExplicitFrameProvider: zero director");
  g2_ = g2.normalized();
  Vec3 g3o = g3 - g3.dot(g2_) * g2_;
  if (g3o.norm() < 1e-12)
    throw ConfigError("ExplicitFrameProvider: directors are parallel");
  g3_ = g3o.normalized();
}

void ExplicitFrameProvider::frames(double, Vec3& g2, Vec3& g3, Vec3& g2_1,
                                   Vec3& g3_1) const {
  g2 = g2_;
  g3 = g3_;
  g2_1.setZero();
  g3_1.setZero();
}

FrameData initial_frame_data(const NurbsCurve& curve, const InitialFrameProvider& frames,
                             double xi) {
  FrameData fd;
  curve.evaluate(xi, fd.r, fd.r1, fd.r11);
  frames.frames(xi, fd.g2, fd.g3, fd.g2_1, fd.g3_1);
  fd.finalize();
  return fd;
}

}  // namespace curvebeam
