#pragma once

#include "curvebeam/common.hpp"

/// Cross-section description and the curvature-dependent constitutive law.
///
/// Section coordinates (eta, zeta) run along the two section directors. The
/// sectional Jacobian of a curved fiber is g0 = 1 - eta*K3 + zeta*K2 with
/// K2, K3 the physical (per arc length) bending curvatures; all constitutive
/// variants are built from the weighted section integrals
///   H_mn = integral eta^m zeta^n / g0 dA.
namespace curvebeam {

enum class SectionShape { Rectangle, Circle };

struct CrossSection {
  SectionShape shape = SectionShape::Rectangle;
  double dim_eta = 0.0;   ///< rectangle width along the first director; circle diameter
  double dim_zeta = 0.0;  ///< rectangle height along the second director (circle: ignored)
  double torsion_J = 0.0; ///< Saint-Venant constant; <=0 selects the shape default

  double area() const;
  double moment(int m, int n) const;  ///< integral eta^m zeta^n dA (closed form)
  double I_polar() const { return moment(2, 0) + moment(0, 2); }
  double J() const;                   ///< torsion constant (override or shape default)
  /// Characteristic transverse dimension used for the curviness measure K*d.
  double characteristic_dim() const;
  void validate() const;
};

/// Weighted section integrals H_mn = integral eta^m zeta^n / g0 dA.
struct HIntegrals {
  double H1 = 0, Heta = 0, Hetaeta = 0, Hzeta = 0, Hzetazeta = 0, Hetazeta = 0;
};

/// Exact H integrals. Rectangle: stable closed forms (inverse hyperbolic
/// tangent in the eta direction) integrated spectrally across zeta; circle:
/// rotation to the curvature axis plus spectral chord integration.
/// Throws NumericalError when g0 <= 0 somewhere on the section.
HIntegrals h_integrals_exact(const CrossSection& sec, double K2, double K3);

/// Taylor H integrals: 1/g0 expanded to the given order (1 or 2) in
/// (eta*K3 - zeta*K2); closed moment formulas.
HIntegrals h_integrals_taylor(const CrossSection& sec, double K2, double K3, int order);

/// Fidelity ladder of the constitutive law.
enum class ConstitutiveModel {
  D0,  ///< curvature Jacobian kept in the section measure only (couplings of opposite sign)
  D1,  ///< fully decoupled small-curvature law (diagonal)
  D2,  ///< first-order Taylor of the exact law
  D3,  ///< second-order Taylor of the exact law
  Da   ///< exact law
};

ConstitutiveModel parse_model(const std::string& name);
std::string model_name(ConstitutiveModel m);

struct Material {
  double E = 0.0;   ///< Young's modulus
  double mu = 0.0;  ///< shear modulus
  void validate() const;
};

/// 4x4 symmetric material matrix relating the parametric strain rates
/// (axial, torsional, two bending) to the conjugate section-force rates.
/// g is the current axial metric g11; K2, K3 are current physical curvatures.
Mat4 constitutive_matrix(ConstitutiveModel model, const Material& mat,
                         const CrossSection& sec, double g, double K2, double K3);

/// Smallest sectional Jacobian over the section; must stay positive.
double min_section_jacobian(const CrossSection& sec, double K2, double K3);

}  // namespace curvebeam
