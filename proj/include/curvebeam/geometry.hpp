#pragma once

#include <memory>

#include "curvebeam/common.hpp"
#include "curvebeam/spline.hpp"

/// Pointwise differential geometry of the beam axis: metric, Christoffel
/// symbol, curvature components, and construction of the initial section
/// frames (Frenet-type or explicit directors for straight axes).
namespace curvebeam {

/// Complete geometric state at one axis point: position derivatives, unit
/// section directors with their parametric derivatives, and derived metric /
/// curvature quantities. The strain measures of the beam are differences of
/// measures() between two configurations.
struct FrameData {
  Vec3 r = Vec3::Zero(), r1 = Vec3::Zero(), r11 = Vec3::Zero();
  Vec3 g2 = Vec3::Zero(), g3 = Vec3::Zero();
  Vec3 g2_1 = Vec3::Zero(), g3_1 = Vec3::Zero();

  // derived by finalize():
  double g = 0.0;       ///< axial metric g11 = r1.r1
  double sqrt_g = 0.0;
  double Gamma = 0.0;   ///< Christoffel symbol (r1.r11)/g
  double K1 = 0.0;      ///< parametric torsional curvature g2_1 . g3
  double Kt2 = 0.0;     ///< -r11 . g3 (parametric-weighted bending curvature)
  double Kt3 = 0.0;     ///< +r11 . g2

  Vec3 tangent() const { return r1 / sqrt_g; }
  double K2() const { return Kt2 / g; }  ///< physical (per arc length) curvature
  double K3() const { return Kt3 / g; }
  double curviness(double section_dim) const {
    return std::sqrt(K2() * K2() + K3() * K3()) * section_dim;
  }

  /// [g11/2, K1, Kt2, Kt3]: configuration measures whose differences are the
  /// axial/torsional/bending strain increments.
  Vec4 measures() const { return Vec4(0.5 * g, K1, Kt2, Kt3); }

  /// Compute the derived quantities from r1, r11 and the directors.
  /// Throws NumericalError if the axial metric degenerates.
  void finalize();
};

/// Supplies the initial section directors (and parametric derivatives) along
/// the undeformed axis.
class InitialFrameProvider {
 public:
  virtual ~InitialFrameProvider() = default;
  virtual void frames(double xi, Vec3& g2, Vec3& g3, Vec3& g2_1, Vec3& g3_1) const = 0;
};

/// Frenet-type frames of a NURBS axis: g2 = principal normal, g3 = binormal.
/// Throws NumericalError where |r1 x r11| <= tol * |r1|^2 (straight segments
/// need ExplicitFrameProvider instead).
class FrenetFrameProvider : public InitialFrameProvider {
 public:
  explicit FrenetFrameProvider(const NurbsCurve* curve) : curve_(curve) {}
  void frames(double xi, Vec3& g2, Vec3& g3, Vec3& g2_1, Vec3& g3_1) const override;

 private:
  const NurbsCurve* curve_;
};

/// Constant directors; valid for straight axes (or any axis whose directors
/// happen to be constant). The directors are normalized and orthogonalized
/// against each other on construction.
class ExplicitFrameProvider : public InitialFrameProvider {
 public:
  ExplicitFrameProvider(const Vec3& g2, const Vec3& g3);
  void frames(double xi, Vec3& g2, Vec3& g3, Vec3& g2_1, Vec3& g3_1) const override;

 private:
  Vec3 g2_, g3_;
};

/// Full initial state at xi: curve derivatives + initial directors, finalized.
FrameData initial_frame_data(const NurbsCurve& curve, const InitialFrameProvider& frames,
                             double xi);

}  // namespace curvebeam
