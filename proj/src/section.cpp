#include "curvebeam/section.hpp"

#include <cmath>

#include "curvebeam/spline.hpp"  // gauss_legendre

namespace curvebeam {

namespace {

// artanh(t)/t, stable near t = 0.
double artanhc(double t) {
  if (std::abs(t) < 0.15) {
    const double t2 = t * t;
    double term = 1.0, sum = 0.0;
    for (int k = 0; k <= 12; ++k) {
      sum += term / (2 * k + 1);
      term *= t2;
    }
    return sum;
  }
  return std::atanh(t) / t;
}

// (artanh(t) - t)/t^3, stable near t = 0.
double artanh_rem(double t) {
  const double t2 = t * t;
  if (std::abs(t) < 0.15) {
    double pw = 1.0, sum = 0.0;  // pw = t^(2k-2), k starting at 1
    for (int k = 1; k <= 12; ++k) {
      sum += pw / (2 * k + 1);
      pw *= t2;
    }
    return sum;
  }
  return (std::atanh(t) - t) / (t2 * t);
}

// Closed-form line integrals over eta in [-b/2, b/2] of eta^j / (beta - a*eta)
// for j = 0,1,2, written through tau = a*b/(2*beta) so small |a| costs no digits:
//   j=0: (b/beta)          * artanhc(tau)
//   j=1: (b^2 tau/(2 beta)) * artanh_rem(tau)
//   j=2: (b^3/(4 beta))     * artanh_rem(tau)
void eta_line_integrals(double b, double beta, double a, double out[3]) {
  const double tau = a * b / (2.0 * beta);
  const double psi = artanh_rem(tau);
  out[0] = (b / beta) * artanhc(tau);
  out[1] = (b * b / (2.0 * beta)) * tau * psi;
  out[2] = (b * b * b / (4.0 * beta)) * psi;
}

HIntegrals rect_exact(double b, double h, double K2, double K3) {
  // 1/g0 = 1/(1 - a*eta - c*zeta) with a = K3, c = -K2.
  const double a = K3, c = -K2;
  const QuadratureRule gl = gauss_legendre(96, -h / 2.0, h / 2.0);
  HIntegrals H;
  for (size_t q = 0; q < gl.points.size(); ++q) {
    const double z = gl.points[q];
    const double w = gl.weights[q];
    const double beta = 1.0 - c * z;
    double I[3];
    eta_line_integrals(b, beta, a, I);
    H.H1 += w * I[0];
    H.Heta += w * I[1];
    H.Hetaeta += w * I[2];
    H.Hzeta += w * z * I[0];
    H.Hzetazeta += w * z * z * I[0];
    H.Hetazeta += w * z * I[1];
  }
  return H;
}

HIntegrals circle_exact(double R, double K2, double K3) {
  const double a = K3, c = -K2;
  const double kappa = std::hypot(a, c);
  // Rotated frame: u-axis along the curvature direction, 1/(1 - kappa*x).
  // Chord integrals with the substitution x = R sin(theta) keep the integrand
  // analytic, so a fixed spectral rule converges to machine precision.
  const QuadratureRule gl = gauss_legendre(128, -M_PI / 2.0, M_PI / 2.0);
  double P0 = 0, P1 = 0, P2 = 0, Q2 = 0;  // weights 1, x, x^2, y^2
  for (size_t q = 0; q < gl.points.size(); ++q) {
    const double th = gl.points[q];
    const double w = gl.weights[q];
    const double x = R * std::sin(th);
    const double cth = std::cos(th);
    const double half_chord = R * cth;
    const double jac = R * cth;  // dx = R cos(theta) dtheta
    const double den = 1.0 - kappa * x;
    P0 += w * jac * 2.0 * half_chord / den;
    P1 += w * jac * 2.0 * half_chord * x / den;
    P2 += w * jac * 2.0 * half_chord * x * x / den;
    Q2 += w * jac * (2.0 / 3.0) * half_chord * half_chord * half_chord / den;
  }
  HIntegrals H;
  if (kappa * R < 1e-10) {
    H.H1 = M_PI * R * R;
    H.Hetaeta = H.Hzetazeta = M_PI * std::pow(R, 4) / 4.0;
    return H;
  }
  const double ux = a / kappa, uy = c / kappa;  // (eta,zeta) components of the u-axis
  H.H1 = P0;
  H.Heta = ux * P1;
  H.Hzeta = uy * P1;
  H.Hetaeta = ux * ux * P2 + uy * uy * Q2;
  H.Hzetazeta = uy * uy * P2 + ux * ux * Q2;
  H.Hetazeta = ux * uy * (P2 - Q2);
  return H;
}

}  // namespace

// --------------------------------------------------------------- CrossSection

void CrossSection::validate() const {
  if (!(dim_eta > 0.0)) throw ConfigError("CrossSection: first dimension must be positive");
  if (shape == SectionShape::Rectangle && !(dim_zeta > 0.0))
    throw ConfigError("CrossSection: rectangle height must be positive");
}

double CrossSection::area() const { return moment(0, 0); }

double CrossSection::moment(int m, int n) const {
  if (m < 0 || n < 0 || m % 2 == 1 || n % 2 == 1) return 0.0;  // doubly symmetric
  if (shape == SectionShape::Rectangle) {
    const double b = dim_eta, h = dim_zeta;
    return std::pow(b, m + 1) * std::pow(h, n + 1) /
           (std::pow(2.0, m + n) * (m + 1) * (n + 1));
  }
  // Disk of radius R: integral r^(m+n) cos^m sin^n over the disk.
  const double R = dim_eta / 2.0;
  auto disk = [R](int mm, int nn) {
    // integral_0^R r^(mm+nn+1) dr * integral cos^mm sin^nn dtheta
    const double radial = std::pow(R, mm + nn + 2) / (mm + nn + 2);
    double angular = 0.0;
    if (mm == 0 && nn == 0) angular = 2 * M_PI;
    else if ((mm == 2 && nn == 0) || (mm == 0 && nn == 2)) angular = M_PI;
    else if ((mm == 4 && nn == 0) || (mm == 0 && nn == 4)) angular = 3 * M_PI / 4;
    else if (mm == 2 && nn == 2) angular = M_PI / 4;
    else throw ConfigError("CrossSection: unsupported circle moment order");
    return radial * angular;
  };
  return disk(m, n);
}

double CrossSection::J() const {
  if (torsion_J > 0.0) return torsion_J;
  if (shape == SectionShape::Circle) return I_polar();  // no warping for the disk
  // Rectangle: exact Saint-Venant series with half-widths A >= B.
  const double A = std::max(dim_eta, dim_zeta) / 2.0;
  const double B = std::min(dim_eta, dim_zeta) / 2.0;
  double sum = 0.0;
  for (int n = 1; n <= 61; n += 2)
    sum += std::tanh(n * M_PI * A / (2.0 * B)) / std::pow(n, 5);
  return (16.0 / 3.0) * A * B * B * B *
         (1.0 - (192.0 / (M_PI * M_PI * M_PI * M_PI * M_PI)) * (B / A) * sum);
}

double CrossSection::characteristic_dim() const {
  return shape == SectionShape::Circle ? dim_eta : std::max(dim_eta, dim_zeta);
}

double min_section_jacobian(const CrossSection& sec, double K2, double K3) {
  if (sec.shape == SectionShape::Rectangle)
    return 1.0 - (std::abs(K3) * sec.dim_eta + std::abs(K2) * sec.dim_zeta) / 2.0;
  return 1.0 - std::hypot(K2, K3) * sec.dim_eta / 2.0;
}

// ----------------------------------------------------------------- H integrals

HIntegrals h_integrals_exact(const CrossSection& sec, double K2, double K3) {
  if (min_section_jacobian(sec, K2, K3) <= 0.0)
    throw NumericalError("section Jacobian g0 <= 0: curvature radius inside the section");
  if (sec.shape == SectionShape::Rectangle)
    return rect_exact(sec.dim_eta, sec.dim_zeta, K2, K3);
  return circle_exact(sec.dim_eta / 2.0, K2, K3);
}

HIntegrals h_integrals_taylor(const CrossSection& sec, double K2, double K3, int order) {
  if (order < 1 || order > 2) throw ConfigError("h_integrals_taylor: order must be 1 or 2");
  const double a = K3, c = -K2;  // u = a*eta + c*zeta
  auto mom = [&sec](int m, int n) { return sec.moment(m, n); };
  HIntegrals H;
  H.H1 = mom(0, 0);
  H.Heta = a * mom(2, 0);
  H.Hzeta = c * mom(0, 2);
  H.Hetaeta = mom(2, 0);
  H.Hzetazeta = mom(0, 2);
  H.Hetazeta = 0.0;
  if (order >= 2) {
    H.H1 += a * a * mom(2, 0) + c * c * mom(0, 2);
    H.Hetaeta += a * a * mom(4, 0) + c * c * mom(2, 2);
    H.Hzetazeta += a * a * mom(2, 2) + c * c * mom(0, 4);
    H.Hetazeta += 2.0 * a * c * mom(2, 2);
  }
  return H;
}

// ------------------------------------------------------------ material matrix

void Material::validate() const {
  if (!(E > 0.0) || !(mu > 0.0))
    throw ConfigError("Material: moduli must be positive");
}

ConstitutiveModel parse_model(const std::string& name) {
  if (name == "D0") return ConstitutiveModel::D0;
  if (name == "D1") return ConstitutiveModel::D1;
  if (name == "D2") return ConstitutiveModel::D2;
  if (name == "D3") return ConstitutiveModel::D3;
  if (name == "Da") return ConstitutiveModel::Da;
  throw ConfigError("unknown constitutive model '" + name + "' (D0|D1|D2|D3|Da)");
}

std::string model_name(ConstitutiveModel m) {
  switch (m) {
    case ConstitutiveModel::D0: return "D0";
    case ConstitutiveModel::D1: return "D1";
    case ConstitutiveModel::D2: return "D2";
    case ConstitutiveModel::D3: return "D3";
    case ConstitutiveModel::Da: return "Da";
  }
  return "?";
}

Mat4 constitutive_matrix(ConstitutiveModel model, const Material& mat,
                         const CrossSection& sec, double g, double K2, double K3) {
  if (!(g > 0.0)) throw NumericalError("constitutive_matrix: nonpositive axial metric");
  const double E = mat.E, mu = mat.mu;
  Mat4 D = Mat4::Zero();

  if (model == ConstitutiveModel::D0 || model == ConstitutiveModel::D1) {
    const double A0 = sec.area();
    const double I22 = sec.moment(0, 2);
    const double I33 = sec.moment(2, 0);
    D(0, 0) = E * A0 / (g * g);
    D(1, 1) = mu * sec.J() / g;
    D(2, 2) = E * I22 / (g * g);
    D(3, 3) = E * I33 / (g * g);
    if (model == ConstitutiveModel::D0) {
      // Curvature Jacobian retained in the section measure only: the axial
      // coupling comes out with the opposite sign of the exact law.
      D(0, 2) = D(2, 0) = E * K2 * I22 / (g * g);
      D(0, 3) = D(3, 0) = E * K3 * I33 / (g * g);
    }
    return D;
  }

  HIntegrals H;
  switch (model) {
    case ConstitutiveModel::D2: H = h_integrals_taylor(sec, K2, K3, 1); break;
    case ConstitutiveModel::D3: H = h_integrals_taylor(sec, K2, K3, 2); break;
    default: H = h_integrals_exact(sec, K2, K3); break;
  }

  const double A = H.H1 + 2.0 * K3 * H.Heta + K3 * K3 * H.Hetaeta -
                   2.0 * K2 * H.Hzeta + K2 * K2 * H.Hzetazeta -
                   2.0 * K2 * K3 * H.Hetazeta;
  const double I2 = H.Hzeta + K3 * H.Hetazeta - K2 * H.Hzetazeta;
  const double I3 = H.Heta + K3 * H.Hetaeta - K2 * H.Hetazeta;
  const double I22 = H.Hzetazeta;
  const double I23 = H.Hetazeta;
  const double I33 = H.Hetaeta;
  const double I11 = H.Hetaeta + H.Hzetazeta;

  const double s = E / (g * g);
  D(0, 0) = s * A;
  D(0, 2) = D(2, 0) = s * I2;
  D(0, 3) = D(3, 0) = -s * I3;
  D(2, 2) = s * I22;
  D(2, 3) = D(3, 2) = -s * I23;
  D(3, 3) = s * I33;
  // Torsion: polar-type stiffness scaled by the warping ratio J/I_polar.
  D(1, 1) = mu * I11 * (sec.J() / sec.I_polar()) / g;
  return D;
}

}  // namespace curvebeam
