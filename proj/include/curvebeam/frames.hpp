#pragma once

#include "curvebeam/common.hpp"

/// Frame transport between configurations: the smallest-rotation (SR) map of
/// section directors when the tangent turns, tangent-axis twisting, and the
/// chain-rule parametric derivatives of the transported fields. These are the
/// primitives behind both mapping policies (pointwise SR and nodal-anchored
/// SR with an interpolated closure correction).
namespace curvebeam {

/// Director transport under the smallest rotation taking unit tangent a to
/// unit tangent b. Valid for directors perpendicular to a; preserves norms
/// and maps the a-adapted plane onto the b-adapted plane.
/// Throws NumericalError when a and b are (near-)antipodal.
Vec3 smallest_rotation(const Vec3& v, const Vec3& a, const Vec3& b);

/// General axis-angle rotation of v about unit axis t.
Vec3 rodrigues(const Vec3& t, double phi, const Vec3& v);

/// An adapted director pair with parametric derivatives.
struct DirectorPair {
  Vec3 g2, g3;
  Vec3 g2_1, g3_1;
};

/// Smallest-rotation transport of a reference director field onto the current
/// tangent field, differentiated in the axis parameter:
///   g*(xi) = SR(g_ref(xi); a(xi) -> b(xi))
/// All inputs are fields at one xi with their parametric derivatives
/// (pass zero derivatives for constant data, e.g. nodal anchors).
DirectorPair sr_transport(const Vec3& g2r, const Vec3& g2r_1, const Vec3& g3r,
                          const Vec3& g3r_1, const Vec3& a, const Vec3& a_1,
                          const Vec3& b, const Vec3& b_1);

/// In-place rotation of an adapted pair about its (current) tangent by the
/// angle field phi(xi): g2 <- cos(phi) g2 + sin(phi) g3, etc., including the
/// derivative with phi_1 = dphi/dxi.
void twist_adapted(DirectorPair& f, double phi, double phi_1);

/// Signed angle (-pi, pi] by which the adapted pair (c2, c3) is rotated
/// relative to (r2, r3) about their common tangent: atan2(c2.r3, c2.r2).
double adapted_angle(const Vec3& r2, const Vec3& r3, const Vec3& c2);

}  // namespace curvebeam
