#include "curvebeam/element.hpp"

#include <cmath>

namespace curvebeam {

ElementDofs element_dofs(const BeamPatch& patch, int element) {
  const ElementInfo& el = patch.elements()[element];
  const int p = patch.axis().basis.degree();
  const int pt = patch.twist_basis().degree();
  ElementDofs d;
  d.n_disp = 3 * (p + 1);
  d.global.reserve(d.n_disp + pt + 1);
  for (int j = 0; j <= p; ++j)
    for (int c = 0; c < 3; ++c)
      d.global.push_back(BeamPatch::translation_dof(el.disp_first + j, c));
  for (int j = 0; j <= pt; ++j)
    d.global.push_back(patch.twist_dof(el.twist_first + j));
  return d;
}

MatX kinematic_operator(const QuadPoint& qp, const ElementDofs& dofs) {
  const int nloc = static_cast<int>(dofs.global.size());
  const int n_cp_loc = dofs.n_disp / 3;
  MatX B = MatX::Zero(8, nloc);
  for (int j = 0; j < n_cp_loc; ++j) {
    for (int c = 0; c < 3; ++c) {
      B(c, 3 * j + c) = qp.disp_ders(1, j);       // v,1
      B(3 + c, 3 * j + c) = qp.disp_ders(2, j);   // v,11
    }
  }
  for (int j = dofs.n_disp; j < nloc; ++j) {
    const int k = j - dofs.n_disp;
    B(6, j) = qp.twist_ders(0, k);  // omega
    B(7, j) = qp.twist_ders(1, k);  // omega,1
  }
  return B;
}

Mat48 strain_matrix(const FrameData& fd) {
  Mat48 H = Mat48::Zero();
  const Vec3 cvec = (fd.Kt2 / fd.g) * fd.g2 + (fd.Kt3 / fd.g) * fd.g3;
  // axial: r1 . v,1
  H.block<1, 3>(0, 0) = fd.r1.transpose();
  // torsional: K2 (g2 . v,1) + K3 (g3 . v,1) + omega,1
  H.block<1, 3>(1, 0) = cvec.transpose();
  H(1, 7) = 1.0;
  // bending about g2-normal plane: -g3 . (v,11 - Gamma v,1) + Kt3 omega
  H.block<1, 3>(2, 0) = fd.Gamma * fd.g3.transpose();
  H.block<1, 3>(2, 3) = -fd.g3.transpose();
  H(2, 6) = fd.Kt3;
  // bending about g3-normal plane: +g2 . (v,11 - Gamma v,1) - Kt2 omega
  H.block<1, 3>(3, 0) = -fd.Gamma * fd.g2.transpose();
  H.block<1, 3>(3, 3) = fd.g2.transpose();
  H(3, 6) = -fd.Kt2;
  return H;
}

namespace {

/// Rank-one accumulation helpers on the 7x7 stack (v,1 | v,11 | omega).
struct KernelBuilder {
  Mat77& T;
  void b11(double c, const Vec3& A, const Vec3& B) {
    T.block<3, 3>(0, 0) += c * A * B.transpose();
  }
  void b12(double c, const Vec3& A, const Vec3& B) {
    T.block<3, 3>(0, 3) += c * A * B.transpose();
  }
  void b21(double c, const Vec3& A, const Vec3& B) {
    T.block<3, 3>(3, 0) += c * A * B.transpose();
  }
  void b1w(double c, const Vec3& A) { T.block<3, 1>(0, 6) += c * A; }
  void b2w(double c, const Vec3& A) { T.block<3, 1>(3, 6) += c * A; }
  void bw1(double c, const Vec3& B) { T.block<1, 3>(6, 0) += c * B.transpose(); }
  void bw2(double c, const Vec3& B) { T.block<1, 3>(6, 3) += c * B.transpose(); }
  void bww(double c) { T(6, 6) += c; }
};

}  // namespace

Mat77 geometric_kernel_consistent(const Vec4& f, const FrameData& fd) {
  Mat77 T = Mat77::Zero();
  KernelBuilder kb{T};
  const double N = f[0], M1 = f[1], M2 = f[2], M3 = f[3];
  const Vec3& r1 = fd.r1;
  const Vec3& r11 = fd.r11;
  const Vec3& a2 = fd.g2;
  const Vec3& a3 = fd.g3;
  const double g = fd.g, G = fd.Gamma, k2 = fd.Kt2, k3 = fd.Kt3;

  // axial force: variation of (r1 . v,1)
  T.block<3, 3>(0, 0) += N * Mat3::Identity();

  // torsion row: variation of (Kt2/g) g2 + (Kt3/g) g3 against v,1
  kb.b11(M1 * G / g, a2, a3);
  kb.b12(-M1 / g, a2, a3);
  kb.b1w(M1 * k3 / g, a2);
  kb.b11(-2.0 * M1 * k2 / (g * g), a2, r1);
  kb.b11(-M1 * k2 / (g * g), r1, a2);
  kb.b1w(M1 * k2 / g, a3);
  kb.b11(-M1 * G / g, a3, a2);
  kb.b12(M1 / g, a3, a2);
  kb.b1w(-M1 * k2 / g, a3);
  kb.b11(-2.0 * M1 * k3 / (g * g), a3, r1);
  kb.b11(-M1 * k3 / (g * g), r1, a3);
  kb.b1w(-M1 * k3 / g, a2);

  // first bending row: variation of Gamma(g3 . v,1) - (g3 . v,11) + Kt3 omega
  kb.b11(M2 / g, a3, r11);
  kb.b12(M2 / g, a3, r1);
  kb.b11(-2.0 * M2 * G / g, a3, r1);
  kb.b11(-M2 * G / g, r1, a3);
  kb.b1w(-M2 * G, a2);
  kb.b21(M2 / g, r1, a3);
  kb.b2w(M2, a2);
  kb.bw2(M2, a2);
  kb.bw1(-M2 * G, a2);
  kb.bww(-M2 * k2);

  // second bending row: variation of -Gamma(g2 . v,1) + (g2 . v,11) - Kt2 omega
  kb.b11(-M3 / g, a2, r11);
  kb.b12(-M3 / g, a2, r1);
  kb.b11(2.0 * M3 * G / g, a2, r1);
  kb.b11(M3 * G / g, r1, a2);
  kb.b1w(-M3 * G, a3);
  kb.b21(-M3 / g, r1, a2);
  kb.b2w(M3, a3);
  kb.bw2(M3, a3);
  kb.bw1(-M3 * G, a3);
  kb.bww(-M3 * k3);

  return T;
}

Mat77 geometric_kernel_symmetric(const Vec4& f, const FrameData& fd) {
  Mat77 T = Mat77::Zero();
  const double N = f[0], M1 = f[1], M2 = f[2], M3 = f[3];
  const Vec3& r1 = fd.r1;
  const Vec3& a2 = fd.g2;
  const Vec3& a3 = fd.g3;
  const double g = fd.g, G = fd.Gamma, k2 = fd.Kt2, k3 = fd.Kt3, K1 = fd.K1;

  auto sym = [](const Vec3& A, const Vec3& B) -> Mat3 {
    return A * B.transpose() + B * A.transpose();
  };

  Mat3 G11 = N * Mat3::Identity();
  G11 += (M1 / g) * (-G * sym(a2, a3) + K1 * (a3 * a3.transpose() - a2 * a2.transpose()) -
                     (k2 / g) * sym(a2, r1) - (2.0 * k3 / g) * sym(a3, r1));
  G11 += (M2 / g) *
         (-G * sym(r1, a3) - k2 * a3 * a3.transpose() + k3 * sym(a2, a3));
  G11 += (M3 / g) * (G * sym(r1, a2) - k3 * a2 * a2.transpose());

  const Mat3 G12 = (M1 / g) * a3 * a2.transpose() + (M2 / g) * a3 * r1.transpose() -
                   (M3 / g) * a2 * r1.transpose();
  const Vec3 G13 = -G * (M2 * a2 + M3 * a3);
  const Vec3 G23 = M2 * a2 + M3 * a3;

  T.block<3, 3>(0, 0) = G11;
  T.block<3, 3>(0, 3) = G12;
  T.block<3, 3>(3, 0) = G12.transpose();
  T.block<3, 1>(0, 6) = G13;
  T.block<1, 3>(6, 0) = G13.transpose();
  T.block<3, 1>(3, 6) = G23;
  T.block<1, 3>(6, 3) = G23.transpose();
  T(6, 6) = -M2 * k2 - M3 * k3;
  return T;
}

Mat4 constitutive_sensitivity(const BeamPatch& patch, const FrameData& fd,
                              const Vec4& e) {
  const Material& mat = patch.material();
  const CrossSection& sec = patch.section();
  const ConstitutiveModel model = patch.model();
  const double g = fd.g, K2 = fd.K2(), K3 = fd.K3();

  const double hg = 1e-6 * g;
  const double kscale = std::abs(K2) + std::abs(K3) + 0.01 / sec.characteristic_dim();
  const double hk = 1e-6 * kscale;

  const Mat4 Dg = (constitutive_matrix(model, mat, sec, g + hg, K2, K3) -
                   constitutive_matrix(model, mat, sec, g - hg, K2, K3)) /
                  (2.0 * hg);
  const Mat4 D2 = (constitutive_matrix(model, mat, sec, g, K2 + hk, K3) -
                   constitutive_matrix(model, mat, sec, g, K2 - hk, K3)) /
                  (2.0 * hk);
  const Mat4 D3 = (constitutive_matrix(model, mat, sec, g, K2, K3 + hk) -
                   constitutive_matrix(model, mat, sec, g, K2, K3 - hk)) /
                  (2.0 * hk);

  // chain rule from measures m = [g/2, K1, Kt2, Kt3] to the law's arguments
  // (g, K2 = Kt2/g, K3 = Kt3/g):
  //   dD/dm1 = 2 dD/dg - (2 K2/g) dD/dK2 - (2 K3/g) dD/dK3
  //   dD/dm3 = (1/g) dD/dK2,  dD/dm4 = (1/g) dD/dK3
  Mat4 S = Mat4::Zero();
  const Vec4 c1 = (2.0 * Dg - (2.0 * K2 / g) * D2 - (2.0 * K3 / g) * D3) * e;
  S.col(0) = c1;
  S.col(2) = (D2 * e) / g;
  S.col(3) = (D3 * e) / g;
  return S;
}

void element_system(const BeamPatch& patch, int element, const BeamPatch::State& s,
                    const std::vector<FrameData>& frames, const AssemblyOptions& opt,
                    MatX& K, VecX& F) {
  const ElementInfo& el = patch.elements()[element];
  const ElementDofs dofs = element_dofs(patch, element);
  const int nloc = static_cast<int>(dofs.global.size());
  K = MatX::Zero(nloc, nloc);
  F = VecX::Zero(nloc);

  for (int i = el.qp_begin; i < el.qp_end; ++i) {
    const QuadPoint& qp = patch.quad_points()[i];
    const FrameData& fd = frames[i];
    const QuadPointState& st = s.qps[i];
    const double w = qp.weight;

    const MatX B8 = kinematic_operator(qp, dofs);
    const Mat48 H = strain_matrix(fd);
    const MatX BL = H * B8;                 // 4 x nloc
    const MatX BG = B8.topRows<7>();        // 7 x nloc

    Mat4 D = patch.constitutive_at(fd);
    if (opt.include_constitutive_sensitivity)
      D += constitutive_sensitivity(patch, fd, st.e_acc);

    F.noalias() += (w * fd.sqrt_g) * (BL.transpose() * st.f);

    K.noalias() += (w * fd.sqrt_g) * (BL.transpose() * (D * BL));
    const Mat77 T = opt.symmetric_geometric_kernel
                        ? geometric_kernel_symmetric(st.f, fd)
                        : geometric_kernel_consistent(st.f, fd);
    K.noalias() += (w * fd.sqrt_g) * (BG.transpose() * (T * BG));

    if (opt.include_measure_term) {
      // variation of the length measure: d(sqrt g) = t . dv,1
      const VecX BLf = BL.transpose() * st.f;
      const VecX tB = (fd.tangent().transpose() * B8.topRows<3>()).transpose();
      K.noalias() += w * BLf * tB.transpose();
    }
  }
}

}  // namespace curvebeam
