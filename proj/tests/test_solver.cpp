#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SparseLU>

#include <cmath>
#include <cstdio>

#include "curvebeam/assembly.hpp"
#include "curvebeam/solver.hpp"

using namespace curvebeam;

namespace {

NurbsCurve straight_beam(double L, int p, int n_el, Continuity cont) {
  NurbsCurve line;
  line.basis = KnotVector(1, {0, 0, 1, 1});
  line.points = MatX(2, 3);
  line.points << 0, 0, 0, L, 0, 0;
  line.weights = VecX::Ones(2);
  return k_refine(line, p, n_el, cont);
}

/// Circular arc of opening angle 'sweep' centered on the +y axis, radius R,
/// in the x-y plane (one rational quadratic segment), then k-refined.
NurbsCurve circular_arch(double R, double sweep, int p, int n_el, Continuity cont) {
  const double a = 0.5 * sweep;  // half opening angle
  NurbsCurve c;
  c.basis = KnotVector(2, {0, 0, 0, 1, 1, 1});
  c.points = MatX(3, 3);
  c.points << R * std::cos(M_PI / 2 + a), R * std::sin(M_PI / 2 + a), 0,  //
      0, R / std::cos(a), 0,                                              //
      R * std::cos(M_PI / 2 - a), R * std::sin(M_PI / 2 - a), 0;
  c.weights = VecX(3);
  c.weights << 1.0, std::cos(a), 1.0;
  return k_refine(c, p, n_el, cont);
}

struct Setup {
  BeamPatch patch;
  Constraints con;
};

CrossSection square_section(double h) {
  CrossSection sec;
  sec.shape = SectionShape::Rectangle;
  sec.dim_eta = h;
  sec.dim_zeta = h;
  return sec;
}

/// Clamp the start: end position, tangent direction (two transverse control
/// point components), and the twist coefficient.
void clamp_start(const BeamPatch& patch, Constraints& con, int trans_a, int trans_b) {
  for (int c = 0; c < 3; ++c) con.fix(patch.translation_dof(0, c));
  con.fix(patch.translation_dof(1, trans_a));
  con.fix(patch.translation_dof(1, trans_b));
  con.fix(patch.twist_dof(0));
}

}  // namespace

TEST_CASE("cantilever tip force: small-deflection limit matches beam theory") {
  const double L = 1.0, E = 1.0e7, h = 0.1;
  const double I = h * h * h * h / 12.0, EI = E * I;

  for (const FrameMapping mapping : {FrameMapping::SR, FrameMapping::NSRISR}) {
    const NurbsCurve axis = straight_beam(L, 3, 4, Continuity::CPm1);
    const KnotVector twist = make_knot_vector(3, 4, Continuity::CPm1);
    const ExplicitFrameProvider fp(Vec3(0, 1, 0), Vec3(0, 0, 1));
    BeamPatch patch(axis, twist, fp, square_section(h), Material{E, 0.5 * E},
                    ConstitutiveModel::D1, mapping, ReferencePolicy::Incremental);

    Constraints con(patch.ndof());
    clamp_start(patch, con, 1, 2);
    con.finalize();

    const double F = 3.0 * EI * 1e-4;  // tip deflection about 1e-4 * L
    LoadSet loads;
    loads.forces.push_back({1.0, Vec3(0, 0, F)});
    const Assembler asmb(patch, loads, AssemblyOptions{});

    BeamPatch::State s = patch.initial_state();
    const SolveResult res = solve_newton(patch, asmb, con, s, {1.0}, SolverSettings{});
    REQUIRE(res.converged);

    const double tip = s.q[patch.translation_dof(patch.n_cp() - 1, 2)];
    const double ref = F * L * L * L / (3.0 * EI);
    CHECK(std::abs(tip - ref) <= 1e-5 * ref);
  }
}

TEST_CASE("newton iteration: strong contraction from a rebased state") {
  const double L = 1.0, E = 1.0e7, h = 0.1;
  const double EI = E * h * h * h * h / 12.0;

  const NurbsCurve axis = straight_beam(L, 4, 6, Continuity::CPm1);
  const KnotVector twist = make_knot_vector(4, 6, Continuity::CPm1);
  const ExplicitFrameProvider fp(Vec3(0, 1, 0), Vec3(0, 0, 1));
  BeamPatch patch(axis, twist, fp, square_section(h), Material{E, 0.5 * E},
                  ConstitutiveModel::Da, FrameMapping::SR, ReferencePolicy::Incremental);

  Constraints con(patch.ndof());
  clamp_start(patch, con, 1, 2);
  con.finalize();

  LoadSet loads;
  loads.forces.push_back({1.0, Vec3(0, 0, 2.0 * EI)});      // strongly nonlinear
  loads.moments.push_back({1.0, Vec3(0.5 * EI, 0, 0)});     // plus a follower couple
  const Assembler asmb(patch, loads, AssemblyOptions{});

  // The tangent is the exact residual derivative at the state each increment
  // is rebased to, and drifts O(within-increment motion) away from it. A
  // small final increment from a converged, rebased lead-in therefore must
  // contract at Newton speed; a defective tangent stalls at a fixed linear
  // rate independent of the increment size.
  BeamPatch::State s = patch.initial_state();
  SolverSettings st;
  std::vector<double> lead(25);
  for (int i = 0; i < 25; ++i) lead[i] = 0.99 * (i + 1) / 25.0;
  REQUIRE(solve_newton(patch, asmb, con, s, lead, st).converged);

  std::vector<FrameData> frames;
  patch.update_state(s, frames);

  Eigen::SparseMatrix<double> K;
  VecX F_red, Qs_red, Qc_red;
  const double lambda = 1.0;
  std::vector<double> rnorm;
  double fscale = 1.0;  // magnitude of the assembled forces (roundoff scale)
  for (int it = 0; it < 12; ++it) {
    asmb.assemble_reduced(s, frames, lambda, con, K, F_red, Qs_red, Qc_red);
    const VecX r = Qc_red + lambda * Qs_red - F_red;
    const double rn = r.norm();
    fscale = 1.0 + F_red.norm() + (Qc_red + lambda * Qs_red).norm();
    const bool plateau = !rnorm.empty() && rn >= 0.5 * rnorm.back();
    rnorm.push_back(rn);
    if (plateau || rn <= 1e-12 * fscale) break;
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu(K);
    REQUIRE(lu.info() == Eigen::Success);
    s.q += con.expand(VecX(lu.solve(r)));
    patch.update_state(s, frames);
  }
  REQUIRE(rnorm.size() >= 4);
  CHECK(rnorm.size() <= 7);  // roundoff floor within a handful of iterations
  for (std::size_t k = 1; k + 1 < rnorm.size(); ++k) {
    if (rnorm[k] <= 1e-10 * fscale) break;  // at the floor already
    CHECK(rnorm[k + 1] <= std::max(5e-3 * rnorm[k], 2e-12 * fscale));
  }
}

TEST_CASE("elastica: tip couple rolls the beam into a closed circle") {
  const double L = 1.0, E = 1.0e7, h = 0.01;
  const double EI = E * h * h * h * h / 12.0;

  const NurbsCurve axis = straight_beam(L, 4, 16, Continuity::CPm1);
  const KnotVector twist = make_knot_vector(4, 16, Continuity::CPm1);
  const ExplicitFrameProvider fp(Vec3(0, 1, 0), Vec3(0, 0, 1));
  BeamPatch patch(axis, twist, fp, square_section(h), Material{E, 0.5 * E},
                  ConstitutiveModel::D1, FrameMapping::NSRISR,
                  ReferencePolicy::Incremental);

  Constraints con(patch.ndof());
  clamp_start(patch, con, 1, 2);
  con.finalize();

  LoadSet loads;
  loads.moments.push_back({1.0, Vec3(0, 2.0 * M_PI * EI / L, 0)});
  const Assembler asmb(patch, loads, AssemblyOptions{});

  std::vector<double> lambdas(100);
  for (int i = 0; i < 100; ++i) lambdas[i] = (i + 1) / 100.0;

  BeamPatch::State s = patch.initial_state();
  const SolveResult res = solve_newton(patch, asmb, con, s, lambdas, SolverSettings{});
  REQUIRE(res.converged);
  CHECK(res.increments.size() == 100);

  Vec3 r_tip, r1, r11;
  patch.curve_at(s, 1.0, r_tip, r1, r11);
  CHECK((r_tip - Vec3(0, 0, 0)).norm() <= 1e-3 * L);

  // halfway record should be near a half circle of radius L / (2 pi lambda)
  // (tip folded back above the clamp): checked via the stored increments only
  // implicitly; the closure above is the hard assertion.
}

TEST_CASE("load increment halving: recovers from an oversized step") {
  const double L = 1.0, E = 1.0e7, h = 0.01;
  const double EI = E * h * h * h * h / 12.0;

  const NurbsCurve axis = straight_beam(L, 3, 8, Continuity::CPm1);
  const KnotVector twist = make_knot_vector(3, 8, Continuity::CPm1);
  const ExplicitFrameProvider fp(Vec3(0, 1, 0), Vec3(0, 0, 1));
  BeamPatch patch(axis, twist, fp, square_section(h), Material{E, 0.5 * E},
                  ConstitutiveModel::D1, FrameMapping::SR, ReferencePolicy::Incremental);

  Constraints con(patch.ndof());
  clamp_start(patch, con, 1, 2);
  con.finalize();

  LoadSet loads;
  loads.moments.push_back({1.0, Vec3(0, 1.5 * M_PI * EI / L, 0)});
  const Assembler asmb(patch, loads, AssemblyOptions{});

  SolverSettings st;
  st.max_iterations = 9;  // make the single full-step increment fail

  BeamPatch::State s = patch.initial_state();
  const SolveResult res = solve_newton(patch, asmb, con, s, {1.0}, st);
  REQUIRE(res.converged);
  CHECK(res.increments.size() > 1);  // halving produced subincrements
  CHECK(res.lambda_reached == doctest::Approx(1.0));

  // with no halving budget the same step must fail gracefully (partial result)
  SolverSettings st0 = st;
  st0.max_halvings = 0;
  BeamPatch::State s0 = patch.initial_state();
  const SolveResult res0 = solve_newton(patch, asmb, con, s0, {1.0}, st0);
  CHECK(!res0.converged);
  CHECK(res0.lambda_reached == 0.0);
}

TEST_CASE("total reference: one step and many steps give the same state") {
  const double E = 1.0e7, h = 0.1;

  NurbsCurve quarter;
  quarter.basis = KnotVector(2, {0, 0, 0, 1, 1, 1});
  quarter.points = MatX(3, 3);
  quarter.points << 1, 0, 0, 1, 1, 0, 0, 1, 0;
  quarter.weights = VecX(3);
  quarter.weights << 1.0, std::sqrt(0.5), 1.0;
  const NurbsCurve axis = k_refine(quarter, 3, 4, Continuity::CPm1);
  const KnotVector twist = make_knot_vector(3, 4, Continuity::CPm1);
  const FrenetFrameProvider fp(&axis);
  BeamPatch patch(axis, twist, fp, square_section(h), Material{E, 0.5 * E},
                  ConstitutiveModel::Da, FrameMapping::SR, ReferencePolicy::Total);

  Constraints con(patch.ndof());
  clamp_start(patch, con, 0, 2);  // clamp tangent is +e_y here
  con.finalize();

  LoadSet loads;
  loads.forces.push_back({1.0, Vec3(30, 0, 40)});
  const Assembler asmb(patch, loads, AssemblyOptions{});

  SolverSettings st;
  st.tolerance = 1e-12;

  BeamPatch::State s_one = patch.initial_state();
  REQUIRE(solve_newton(patch, asmb, con, s_one, {1.0}, st).converged);

  BeamPatch::State s_many = patch.initial_state();
  REQUIRE(
      solve_newton(patch, asmb, con, s_many, {0.25, 0.5, 0.75, 1.0}, st).converged);

  const double scale = 1.0 + s_one.q.norm();
  CHECK((s_one.q - s_many.q).norm() <= 1e-9 * scale);
}

TEST_CASE("arc length: traces snap-through of a hinged circular arch") {
  const double R = 10.0, E = 2.0e6, h = 0.2;
  const double sweep = M_PI / 3.0;  // 60 degree opening
  const double rise = R * (1.0 - std::cos(0.5 * sweep));

  const NurbsCurve axis = circular_arch(R, sweep, 3, 16, Continuity::CPm1);
  const KnotVector twist = make_knot_vector(3, 16, Continuity::CPm1);
  const FrenetFrameProvider fp(&axis);
  BeamPatch patch(axis, twist, fp, square_section(h), Material{E, 0.8e6},
                  ConstitutiveModel::D1, FrameMapping::SR, ReferencePolicy::Incremental);

  Constraints con(patch.ndof());
  // planar problem: suppress out-of-plane motion and twist
  for (int cp = 0; cp < patch.n_cp(); ++cp) con.fix(patch.translation_dof(cp, 2));
  for (int j = 0; j < patch.n_twist(); ++j) con.fix(patch.twist_dof(j));
  // pins: end positions fixed, end tangents free
  for (int c = 0; c < 2; ++c) {
    con.fix(patch.translation_dof(0, c));
    con.fix(patch.translation_dof(patch.n_cp() - 1, c));
  }
  con.finalize();

  LoadSet loads;
  loads.forces.push_back({0.5, Vec3(0, -1.0, 0)});  // unit apex force, downward
  const Assembler asmb(patch, loads, AssemblyOptions{});

  ArcLengthSettings as;
  as.ds = 0.05;
  as.lambda_max = 120.0;
  as.max_increments = 2000;

  SolverSettings st;
  st.tolerance = 1e-9;

  std::vector<std::pair<double, double>> path;  // (lambda, apex drop)
  BeamPatch::State s = patch.initial_state();
  const Vec3 apex0 = patch.axis().point(0.5);
  const SolveResult res = solve_arclength(
      patch, asmb, con, s, as, st,
      [&](double lambda, const BeamPatch::State& state, const std::vector<FrameData>&) {
        Vec3 r, r1, r11;
        patch.curve_at(state, 0.5, r, r1, r11);
        path.emplace_back(lambda, apex0[1] - r[1]);
      });
  REQUIRE(res.converged);
  REQUIRE(path.size() >= 10);

  double lambda_peak = 0.0;
  bool descended = false;
  double max_drop = 0.0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    lambda_peak = std::max(lambda_peak, path[k].first);
    if (path[k + 1].first < path[k].first) descended = true;
    max_drop = std::max(max_drop, path[k].second);
  }
  std::printf("arch: limit load %.4f, deepest apex drop %.4f (rise %.4f), %zu increments\n",
              lambda_peak, max_drop, rise, path.size());

  CHECK(descended);                    // passed a limit point
  CHECK(lambda_peak < 119.0);          // limit point found before lambda_max
  CHECK(max_drop > 1.5 * rise);        // snapped through to the inverted shape
  CHECK(res.lambda_reached >= 120.0 - 1e-9);

  // prescribed DOF paths are rejected in arc-length continuation
  Constraints con2(patch.ndof());
  con2.prescribe(patch.twist_dof(0), [](double l) { return l; });
  con2.finalize();
  BeamPatch::State s2 = patch.initial_state();
  CHECK_THROWS_AS(solve_arclength(patch, asmb, con2, s2, as, st), ConfigError);
}
