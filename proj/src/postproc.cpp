#include "curvebeam/postproc.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace curvebeam {

double internal_energy(const BeamPatch& patch, const BeamPatch::State& s) {
  double energy = 0.0;
  for (int k = 0; k < patch.n_qp(); ++k) {
    const QuadPoint& qp = patch.quad_points()[k];
    const Vec4& e = s.qps[k].e_acc;
    energy += 0.5 * qp.weight * e.dot(qp.D_init * e) * qp.init.sqrt_g;
  }
  return energy;
}

SectionState recover_section_state(const BeamPatch& patch, const BeamPatch::State& s,
                                   const std::vector<FrameData>& frames, int k) {
  const QuadPoint& qp = patch.quad_points()[k];
  const FrameData& fd = frames[k];
  const Vec4& e = s.qps[k].e_acc;

  const Mat4 D = constitutive_matrix(ConstitutiveModel::Da, patch.material(),
                                     patch.section(), fd.g, fd.K2(), fd.K3());
  const Vec4 f = D * e;

  const double g0 = qp.init.g;
  const double sg0 = qp.init.sqrt_g;

  SectionState out;
  out.xi = qp.xi;
  out.eps = e[0] / g0;
  out.kap1 = e[1] / sg0;
  out.kap2 = e[2] / g0;
  out.kap3 = e[3] / g0;
  out.N = f[0] * g0;
  out.M1 = f[1] * sg0;
  out.M2 = f[2] * g0;
  out.M3 = f[3] * g0;
  out.curviness = fd.curviness(patch.section().characteristic_dim());
  return out;
}

int nearest_qp(const BeamPatch& patch, double xi) {
  int best = 0;
  double dist = std::numeric_limits<double>::max();
  for (int k = 0; k < patch.n_qp(); ++k) {
    const double d = std::abs(patch.quad_points()[k].xi - xi);
    if (d < dist) {
      dist = d;
      best = k;
    }
  }
  return best;
}

namespace {

/// Shared station loop: accumulates arc length, squared gap and the largest
/// reference displacement, then combines them.
double l2_loop(int n_stations,
               const std::function<void(double, Vec3&, Vec3&, double&, Vec3&)>& sample) {
  if (n_stations < 2) throw ConfigError("l2_distance: need at least 2 stations");
  const double dxi = 1.0 / (n_stations - 1);
  double gap2 = 0.0, length = 0.0, u_max = 0.0;
  for (int i = 0; i < n_stations; ++i) {
    const double xi = i * dxi;
    const double w = (i == 0 || i == n_stations - 1) ? 0.5 : 1.0;  // trapezoid
    Vec3 pos, ref, disp;
    double sg = 0.0;
    sample(xi, pos, ref, sg, disp);
    gap2 += w * dxi * (pos - ref).squaredNorm() * sg;
    length += w * dxi * sg;
    u_max = std::max(u_max, disp.norm());
  }
  if (length <= 0.0) throw NumericalError("l2_distance: degenerate reference arc");
  if (u_max <= 1e-12 * length)
    throw NumericalError("l2_distance: reference has zero displacement");
  return std::sqrt(gap2 / length) / u_max;
}

}  // namespace

double l2_distance(const BeamPatch& patch, const BeamPatch::State& s,
                   const BeamPatch& ref_patch, const BeamPatch::State& ref_state,
                   int n_stations) {
  return l2_loop(n_stations, [&](double xi, Vec3& pos, Vec3& ref, double& sg,
                                 Vec3& disp) {
    Vec3 r1, r11;
    patch.curve_at(s, xi, pos, r1, r11);
    ref_patch.curve_at(ref_state, xi, ref, r1, r11);
    sg = r1.norm();  // current arc measure of the reference solution
    Vec3 ref0, d1, d11;
    ref_patch.axis().evaluate(xi, ref0, d1, d11);
    disp = ref - ref0;
  });
}

double l2_distance(const BeamPatch& patch, const BeamPatch::State& s,
                   const std::function<Vec3(double)>& ref_position, int n_stations) {
  return l2_loop(n_stations, [&](double xi, Vec3& pos, Vec3& ref, double& sg,
                                 Vec3& disp) {
    Vec3 r1, r11;
    patch.curve_at(s, xi, pos, r1, r11);
    ref = ref_position(xi);
    Vec3 ref0, d1, d11;
    patch.axis().evaluate(xi, ref0, d1, d11);
    sg = d1.norm();  // initial arc measure
    disp = ref - ref0;
  });
}

HelixReference::HelixReference(const Vec3& m, double EI) {
  if (EI <= 0.0) throw ConfigError("HelixReference: nonpositive bending stiffness");
  const double mn = m.norm();
  if (mn <= 0.0) throw ConfigError("HelixReference: zero couple");
  axis_ = m / mn;
  omega_ = mn / EI;
  const Vec3 t0(1, 0, 0);
  cos_a_ = axis_.dot(t0);
  Vec3 n0 = t0 - cos_a_ * axis_;
  sin_a_ = n0.norm();
  if (sin_a_ <= 1e-14)
    throw ConfigError("HelixReference: couple parallel to the rod (pure twist)");
  n0_ = n0 / sin_a_;
  b0_ = axis_.cross(n0_);
}

Vec3 HelixReference::at(double s) const {
  const double c = std::cos(omega_ * s), sn = std::sin(omega_ * s);
  return cos_a_ * s * axis_ +
         (sin_a_ / omega_) * (sn * n0_ + (1.0 - c) * b0_);
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw ConfigError("write_csv: cannot open " + path);
  for (std::size_t c = 0; c < columns.size(); ++c)
    std::fprintf(f, "%s%s", columns[c].c_str(), c + 1 < columns.size() ? "," : "\n");
  for (const auto& row : rows) {
    if (row.size() != columns.size()) {
      std::fclose(f);
      throw ConfigError("write_csv: row width does not match the header");
    }
    for (std::size_t c = 0; c < row.size(); ++c)
      std::fprintf(f, "%.17g%s", row[c], c + 1 < row.size() ? "," : "\n");
  }
  if (std::fclose(f) != 0) throw ConfigError("write_csv: write failed for " + path);
}

}  // namespace curvebeam
