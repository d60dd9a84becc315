#include "verify_suites.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <tuple>

#include "curvebeam/element.hpp"
#include "curvebeam/geometry.hpp"
#include "curvebeam/postproc.hpp"
#include "curvebeam/scenario.hpp"
#include "curvebeam/section.hpp"
#include "curvebeam/solver.hpp"

namespace curvebeam::verify {

namespace {

std::mt19937 vrng(20260818);

double vuni(double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(vrng);
}

BeamPatch verify_patch(int p, Continuity cont, ConstitutiveModel model) {
  const NurbsCurve axis = k_refine(quarter_circle_arc(1.0), p, 2, cont);
  const KnotVector twist = make_knot_vector(p, 2, cont);
  CrossSection sec;
  sec.shape = SectionShape::Rectangle;
  sec.dim_eta = 0.1;
  sec.dim_zeta = 0.1;
  const Material mat{1.0e7, 0.5e7};
  const FrenetFrameProvider frames(&axis);
  return BeamPatch(axis, twist, frames, sec, mat, model, FrameMapping::SR,
                   ReferencePolicy::Incremental);
}

// Consistent tangent against central finite differences of the residual, at
// random bent/twisted states rebased so the transport variation is exact.
SuiteResult suite_tangent(bool omit_follower_stiffness) {
  double worst = 0.0;
  for (const auto& [p, cont, model] :
       {std::tuple{3, Continuity::CPm1, ConstitutiveModel::Da},
        std::tuple{4, Continuity::C0, ConstitutiveModel::D3}}) {
    BeamPatch patch = verify_patch(p, cont, model);
    LoadSet scaled, constant;
    scaled.forces.push_back({1.0, Vec3(20, -10, 15)});
    scaled.moments.push_back({1.0, Vec3(60, -40, 30)});
    scaled.moments.push_back({0.37, Vec3(10, 25, -15)});
    constant.forces.push_back({0.5, Vec3(5, 5, -5)});
    AssemblyOptions opt;
    opt.include_load_stiffness = !omit_follower_stiffness;
    const Assembler asmb(patch, scaled, opt, constant);
    const double lambda = 0.7;
    const int n = patch.ndof();

    for (int trial = 0; trial < 5; ++trial) {
      BeamPatch::State s = patch.initial_state();
      std::vector<FrameData> frames;
      for (int i = 0; i < 3 * patch.n_cp(); ++i) s.q[i] += vuni(-0.03, 0.03);
      for (int j = 0; j < patch.n_twist(); ++j)
        s.q[patch.twist_dof(j)] += vuni(-0.15, 0.15);
      patch.update_state(s, frames);
      patch.rebase_reference(s, frames);
      patch.update_state(s, frames);

      MatX K;
      VecX F, Qs, Qc;
      asmb.assemble_dense(s, frames, lambda, K, F, Qs, Qc);

      const auto residual = [&](BeamPatch::State& st) {
        std::vector<FrameData> fr;
        patch.update_state(st, fr);
        MatX Kd;
        VecX Fd, Qsd, Qcd;
        asmb.assemble_dense(st, fr, lambda, Kd, Fd, Qsd, Qcd);
        return VecX(Qcd + lambda * Qsd - Fd);
      };
      MatX K_fd(n, n);
      const double h = 1e-6;
      for (int j = 0; j < n; ++j) {
        BeamPatch::State sp = s, sm = s;
        sp.q[j] += h;
        sm.q[j] -= h;
        K_fd.col(j) = -(residual(sp) - residual(sm)) / (2 * h);
      }
      worst = std::max(worst, (K_fd - K).norm() / K_fd.norm());
    }
  }
  SuiteResult r;
  r.name = omit_follower_stiffness ? "tangent-fd (follower stiffness omitted)"
                                   : "tangent-fd";
  r.pass = worst <= 1e-4;
  char buf[128];
  std::snprintf(buf, sizeof buf, "max relative deviation %.3e (limit 1e-4)", worst);
  r.detail = buf;
  return r;
}

SuiteResult suite_geometric_symmetry() {
  BeamPatch patch = verify_patch(3, Continuity::CPm1, ConstitutiveModel::Da);
  BeamPatch::State s = patch.initial_state();
  std::vector<FrameData> frames;
  for (int i = 0; i < patch.ndof(); ++i) s.q[i] += vuni(-0.05, 0.05);
  patch.update_state(s, frames);
  double worst = 0.0;
  for (int k = 0; k < patch.n_qp(); ++k) {
    Vec4 f;
    for (int i = 0; i < 4; ++i) f[i] = vuni(-10, 10);
    const Mat77 G = geometric_kernel_symmetric(f, frames[k]);
    worst = std::max(worst, (G - G.transpose()).norm() / (1.0 + G.norm()));
  }
  SuiteResult r;
  r.name = "geometric-kernel-symmetry";
  r.pass = worst <= 1e-12;
  char buf[128];
  std::snprintf(buf, sizeof buf, "max asymmetry %.3e (limit 1e-12)", worst);
  r.detail = buf;
  return r;
}

HIntegrals h_oracle_rect(double b, double h, double K2, double K3) {
  const int n = 80;
  const QuadratureRule qe = gauss_legendre(n, -b / 2, b / 2);
  const QuadratureRule qz = gauss_legendre(n, -h / 2, h / 2);
  HIntegrals H;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double eta = qe.points[i], zeta = qz.points[j];
      const double w = qe.weights[i] * qz.weights[j];
      const double g0 = 1.0 - eta * K3 + zeta * K2;
      H.H1 += w / g0;
      H.Heta += w * eta / g0;
      H.Hetaeta += w * eta * eta / g0;
      H.Hzeta += w * zeta / g0;
      H.Hzetazeta += w * zeta * zeta / g0;
      H.Hetazeta += w * eta * zeta / g0;
    }
  return H;
}

HIntegrals h_oracle_circle(double d, double K2, double K3) {
  const int n = 160;
  const double R = d / 2;
  const QuadratureRule qr = gauss_legendre(n, 0, R);
  const QuadratureRule qt = gauss_legendre(n, 0, 2 * std::numbers::pi);
  HIntegrals H;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double r = qr.points[i], t = qt.points[j];
      const double eta = r * std::cos(t), zeta = r * std::sin(t);
      const double w = qr.weights[i] * qt.weights[j] * r;
      const double g0 = 1.0 - eta * K3 + zeta * K2;
      H.H1 += w / g0;
      H.Heta += w * eta / g0;
      H.Hetaeta += w * eta * eta / g0;
      H.Hzeta += w * zeta / g0;
      H.Hzetazeta += w * zeta * zeta / g0;
      H.Hetazeta += w * eta * zeta / g0;
    }
  return H;
}

SuiteResult suite_h_oracle() {
  double worst = 0.0;
  for (const double kh : {0.01, 0.1, 0.3}) {
    // Kh is the curviness: curvature times section dimension.
    for (const double frac : {1.0, 0.6}) {
      const double K2 = frac * kh, K3 = (1.0 - frac) * kh;  // per unit dim 1
      {
        CrossSection sec{SectionShape::Rectangle, 1.0, 1.0, 0.0};
        const HIntegrals e = h_integrals_exact(sec, K2, K3);
        const HIntegrals o = h_oracle_rect(1.0, 1.0, K2, K3);
        const double scale = sec.area();
        for (const double d : {e.H1 - o.H1, e.Heta - o.Heta, e.Hetaeta - o.Hetaeta,
                               e.Hzeta - o.Hzeta, e.Hzetazeta - o.Hzetazeta,
                               e.Hetazeta - o.Hetazeta})
          worst = std::max(worst, std::abs(d) / scale);
      }
      {
        CrossSection sec{SectionShape::Circle, 1.0, 1.0, 0.0};
        const HIntegrals e = h_integrals_exact(sec, K2, K3);
        const HIntegrals o = h_oracle_circle(1.0, K2, K3);
        const double scale = sec.area();
        for (const double d : {e.H1 - o.H1, e.Heta - o.Heta, e.Hetaeta - o.Hetaeta,
                               e.Hzeta - o.Hzeta, e.Hzetazeta - o.Hzetazeta,
                               e.Hetazeta - o.Hetazeta})
          worst = std::max(worst, std::abs(d) / scale);
      }
    }
  }
  SuiteResult r;
  r.name = "section-integral-oracle";
  r.pass = worst <= 1e-10;
  char buf[128];
  std::snprintf(buf, sizeof buf, "max relative deviation %.3e over Kh in {0.01,0.1,0.3}",
                worst);
  r.detail = buf;
  return r;
}

SuiteResult suite_partition_of_unity() {
  double worst = 0.0;
  for (const int p : {2, 3, 4, 5}) {
    const KnotVector kv = make_knot_vector(p, 7, p % 2 ? Continuity::CPm1 : Continuity::C0);
    NurbsCurve c;
    c.basis = kv;
    const int n = kv.num_basis();
    c.points = MatX::Random(n, 3);
    c.weights = VecX::Ones(n) + 0.5 * VecX::Random(n).cwiseAbs();
    for (int t = 0; t < 20; ++t) {
      const double xi = vuni(0.0, 1.0);
      const auto ders = rational_basis_ders(c, xi, 1);
      worst = std::max(worst, std::abs(ders.row(0).sum() - 1.0));
      worst = std::max(worst, std::abs(ders.row(1).sum()));
    }
  }
  SuiteResult r;
  r.name = "basis-partition-of-unity";
  r.pass = worst <= 1e-12;
  char buf[128];
  std::snprintf(buf, sizeof buf, "max deviation %.3e (limit 1e-12)", worst);
  r.detail = buf;
  return r;
}

SuiteResult suite_refinement_invariance() {
  const NurbsCurve base = quarter_circle_arc(1.0);
  double worst = 0.0;
  for (const int p : {2, 3, 4}) {
    for (const int ne : {1, 3, 8}) {
      const NurbsCurve fine = k_refine(base, p, ne, Continuity::CPm1);
      for (int t = 0; t < 20; ++t) {
        const double xi = vuni(0.0, 1.0);
        Vec3 a0, a1, a2, b0, b1, b2;
        base.evaluate(xi, a0, a1, a2);
        fine.evaluate(xi, b0, b1, b2);
        worst = std::max(worst, (a0 - b0).norm());
        worst = std::max(worst, (a1 - b1).norm() / (1.0 + a1.norm()));
      }
    }
  }
  SuiteResult r;
  r.name = "refinement-invariance";
  r.pass = worst <= 1e-12;
  char buf[128];
  std::snprintf(buf, sizeof buf, "max parameterization drift %.3e (limit 1e-12)", worst);
  r.detail = buf;
  return r;
}

SuiteResult suite_objectivity() {
  Scenario sc = builtin_scenario("objectivity");
  sc.n_elements = 2;
  sc.stages[0].increments = 10;
  sc.stages[0].ramps[0].total = 2.0 * std::numbers::pi;
  const ScenarioRun run = run_scenario(sc);
  double ratio = std::numeric_limits<double>::infinity();
  if (run.converged && !run.path.empty())
    ratio = std::abs(run.path.back().energy) / sc.energy_scale;

  Scenario sr = sc;
  sr.mapping = FrameMapping::SR;
  const ScenarioRun run_sr = run_scenario(sr);
  const double ratio_sr = run_sr.converged && !run_sr.path.empty()
                              ? std::abs(run_sr.path.back().energy) / sc.energy_scale
                              : std::numeric_limits<double>::infinity();

  SuiteResult r;
  r.name = "rigid-spin-objectivity";
  r.pass = run.converged && ratio <= 1e-10;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "energy ratio %.3e (limit 1e-10); non-objective variant for scale: %.3e",
                ratio, ratio_sr);
  r.detail = buf;
  return r;
}

SuiteResult suite_exact_law_limit() {
  // The exact curvature-dependent law collapses to the first-order one
  // linearly in the curviness.
  CrossSection sec{SectionShape::Rectangle, 1.0, 1.0, 0.0};
  const Material mat{1000.0, 400.0};
  const auto dev = [&](double kh) {
    const double K2 = 0.7 * kh, K3 = 0.3 * kh;
    const Mat4 a = constitutive_matrix(ConstitutiveModel::Da, mat, sec, 1.0, K2, K3);
    const Mat4 d1 = constitutive_matrix(ConstitutiveModel::D1, mat, sec, 1.0, K2, K3);
    return (a - d1).norm() / d1.norm();
  };
  // fit the decay order between kh = 4e-2 and 1e-2
  const double r1 = dev(0.04), r2 = dev(0.01);
  const double slope = std::log(r1 / r2) / std::log(4.0);
  SuiteResult r;
  r.name = "exact-law-first-order-limit";
  r.pass = std::abs(slope - 2.0) <= 0.35 || std::abs(slope - 1.0) <= 0.35;
  char buf[128];
  std::snprintf(buf, sizeof buf, "deviation decay order %.2f (expected near 1 or 2)",
                slope);
  r.detail = buf;
  return r;
}

SuiteResult suite_rigid_motion() {
  // Rigid translation of the whole patch: strains and internal forces vanish.
  BeamPatch patch = verify_patch(3, Continuity::CPm1, ConstitutiveModel::Da);
  BeamPatch::State s = patch.initial_state();
  std::vector<FrameData> frames;
  const Vec3 shift(0.3, -0.2, 0.5);
  for (int i = 0; i < patch.n_cp(); ++i)
    for (int c = 0; c < 3; ++c) s.q[patch.translation_dof(i, c)] += shift[c];
  patch.update_state(s, frames);
  const double energy = internal_energy(patch, s);
  const LoadSet none;
  const Assembler asmb(patch, none, AssemblyOptions{});
  MatX K;
  VecX F, Qs, Qc;
  asmb.assemble_dense(s, frames, 0.0, K, F, Qs, Qc);
  const double scale = patch.ndof() * 1e5;  // axial stiffness times dof count
  SuiteResult r;
  r.name = "rigid-translation-zero-strain";
  r.pass = std::abs(energy) <= 1e-12 * scale && F.norm() <= 1e-12 * scale;
  char buf[128];
  std::snprintf(buf, sizeof buf, "energy %.3e, internal force norm %.3e", energy,
                F.norm());
  r.detail = buf;
  return r;
}

}  // namespace

std::vector<SuiteResult> run_suites(bool omit_follower_stiffness) {
  std::vector<SuiteResult> results;
  results.push_back(suite_tangent(omit_follower_stiffness));
  results.push_back(suite_geometric_symmetry());
  results.push_back(suite_h_oracle());
  results.push_back(suite_partition_of_unity());
  results.push_back(suite_refinement_invariance());
  results.push_back(suite_rigid_motion());
  results.push_back(suite_exact_law_limit());
  results.push_back(suite_objectivity());
  return results;
}

}  // namespace curvebeam::verify
