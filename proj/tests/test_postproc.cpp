#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "curvebeam/assembly.hpp"
#include "curvebeam/postproc.hpp"
#include "curvebeam/solver.hpp"

using namespace curvebeam;

namespace {

NurbsCurve straight_beam(double L, int p, int n_el) {
  NurbsCurve line;
  line.basis = KnotVector(1, {0, 0, 1, 1});
  line.points = MatX(2, 3);
  line.points << 0, 0, 0, L, 0, 0;
  line.weights = VecX::Ones(2);
  return k_refine(line, p, n_el, Continuity::CPm1);
}

CrossSection square_section(double h) {
  CrossSection sec;
  sec.shape = SectionShape::Rectangle;
  sec.dim_eta = h;
  sec.dim_zeta = h;
  return sec;
}

BeamPatch cantilever(double L, double E, double h, int p, int n_el) {
  const NurbsCurve axis = straight_beam(L, p, n_el);
  const KnotVector twist = make_knot_vector(p, n_el, Continuity::CPm1);
  const ExplicitFrameProvider fp(Vec3(0, 1, 0), Vec3(0, 0, 1));
  return BeamPatch(axis, twist, fp, square_section(h), Material{E, 0.5 * E},
                   ConstitutiveModel::D1, FrameMapping::SR,
                   ReferencePolicy::Incremental);
}

void clamp_start(const BeamPatch& patch, Constraints& con) {
  for (int c = 0; c < 3; ++c) con.fix(patch.translation_dof(0, c));
  con.fix(patch.translation_dof(1, 1));
  con.fix(patch.translation_dof(1, 2));
  con.fix(patch.twist_dof(0));
}

}  // namespace

TEST_CASE("internal energy: matches the work of a small tip load") {
  const double L = 1.0, E = 1e7, h = 0.1;
  const double EI = E * h * h * h * h / 12.0;
  BeamPatch patch = cantilever(L, E, h, 3, 8);

  Constraints con(patch.ndof());
  clamp_start(patch, con);
  con.finalize();

  const double F = 3.0 * EI * 1e-5;
  LoadSet loads;
  loads.forces.push_back({1.0, Vec3(0, 0, F)});
  const Assembler asmb(patch, loads, AssemblyOptions{});

  BeamPatch::State s = patch.initial_state();
  REQUIRE(solve_newton(patch, asmb, con, s, {1.0}, SolverSettings{}).converged);

  const double tip = s.q[patch.translation_dof(patch.n_cp() - 1, 2)];
  const double energy = internal_energy(patch, s);
  CHECK(energy == doctest::Approx(0.5 * F * tip).epsilon(1e-4));
}

TEST_CASE("section state recovery: cantilever bending moment distribution") {
  const double L = 1.0, E = 1e7, h = 0.1;
  const double EI = E * h * h * h * h / 12.0;
  BeamPatch patch = cantilever(L, E, h, 3, 8);

  Constraints con(patch.ndof());
  clamp_start(patch, con);
  con.finalize();

  const double F = 3.0 * EI * 1e-4;
  LoadSet loads;
  loads.forces.push_back({1.0, Vec3(0, 0, F)});
  const Assembler asmb(patch, loads, AssemblyOptions{});

  BeamPatch::State s = patch.initial_state();
  REQUIRE(solve_newton(patch, asmb, con, s, {1.0}, SolverSettings{}).converged);
  std::vector<FrameData> frames;
  patch.update_state(s, frames);

  for (const double xi : {0.1, 0.4, 0.75}) {
    const int k = nearest_qp(patch, xi);
    const SectionState st = recover_section_state(patch, s, frames, k);
    const double m_ref = F * (L - st.xi * L);  // straight beam: arc = xi * L
    CHECK(std::abs(st.M2) == doctest::Approx(m_ref).epsilon(0.02));
    CHECK(std::abs(st.M3) <= 1e-6 * m_ref);
    CHECK(std::abs(st.M1) <= 1e-6 * m_ref);
    CHECK(std::abs(st.N) <= 1e-3 * F);
    CHECK(std::abs(st.kap2) == doctest::Approx(m_ref / EI).epsilon(0.02));
  }
}

TEST_CASE("helix reference: unit speed, pitch and curvature") {
  const double EI = 58.0 + 1.0 / 3.0;
  const Vec3 m(10, 0, 10);
  const HelixReference ref(m, EI);

  CHECK(ref.at(0.0).norm() <= 1e-14);

  // tangent at the clamp points along +x, unit speed everywhere
  const double h = 1e-6;
  const Vec3 t0 = (ref.at(h) - ref.at(0.0)) / h;
  CHECK((t0 - Vec3(1, 0, 0)).norm() <= 1e-5);
  for (const double s : {0.3, 7.0, 21.0}) {
    const Vec3 d = (ref.at(s + h) - ref.at(s - h)) / (2 * h);
    CHECK(d.norm() == doctest::Approx(1.0).epsilon(1e-9));
    // curvature |r''| = sin(alpha) |m| / EI, here 0.171 for the 10/10 couple
    const Vec3 dd = (ref.at(s + h) - 2 * ref.at(s) + ref.at(s - h)) / (h * h);
    CHECK(dd.norm() == doctest::Approx(m.norm() / EI / std::sqrt(2.0)).epsilon(1e-3));
  }

  // rise along the helix axis is s cos(alpha)
  const Vec3 axis = m.normalized();
  CHECK(ref.at(10.0).dot(axis) == doctest::Approx(10.0 / std::sqrt(2.0)).epsilon(1e-12));

  CHECK_THROWS_AS(HelixReference(Vec3(1, 0, 0), EI), ConfigError);  // pure twist
  CHECK_THROWS_AS(HelixReference(Vec3(0, 1, 0), 0.0), ConfigError);
}

TEST_CASE("l2 distance: exact values for rigidly shifted configurations") {
  BeamPatch patch = cantilever(1.0, 1e7, 0.1, 3, 4);
  BeamPatch::State s = patch.initial_state();
  const Vec3 c(0.3, -0.2, 0.6);
  for (int cp = 0; cp < patch.n_cp(); ++cp) s.q.segment<3>(3 * cp) = c;

  // analytic reference: the same shifted line -> zero distance
  const auto shifted = [&](double xi) -> Vec3 { return Vec3(xi, 0, 0) + c; };
  CHECK(l2_distance(patch, s, shifted) <= 1e-14);

  // reference shifted twice as far -> gap |c| over normalizer |2c|
  const auto shifted2 = [&](double xi) -> Vec3 { return Vec3(xi, 0, 0) + 2 * c; };
  CHECK(l2_distance(patch, s, shifted2) == doctest::Approx(0.5).epsilon(1e-12));

  // discrete overload on a finer reference patch with the same motion
  BeamPatch fine = cantilever(1.0, 1e7, 0.1, 4, 8);
  BeamPatch::State sf = fine.initial_state();
  for (int cp = 0; cp < fine.n_cp(); ++cp) sf.q.segment<3>(3 * cp) = c;
  CHECK(l2_distance(patch, s, fine, sf) <= 1e-13);

  BeamPatch::State sf2 = fine.initial_state();
  for (int cp = 0; cp < fine.n_cp(); ++cp) sf2.q.segment<3>(3 * cp) = 2 * c;
  CHECK(l2_distance(patch, s, fine, sf2) == doctest::Approx(0.5).epsilon(1e-12));

  // zero-displacement reference is rejected
  BeamPatch::State s0 = fine.initial_state();
  CHECK_THROWS_AS(l2_distance(patch, s, fine, s0), NumericalError);
}

TEST_CASE("csv writer: lossless round trip and shape checking") {
  const std::string path = "test_postproc_roundtrip.csv";
  const double a = M_PI, b = 1.0 / 3.0, c = 6.02214076e23;
  write_csv(path, {"alpha", "beta", "gamma"}, {{a, b, c}, {-a, -b, -c}});

  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header, line1, line2;
  std::getline(in, header);
  std::getline(in, line1);
  std::getline(in, line2);
  CHECK(header == "alpha,beta,gamma");

  double va, vb, vc;
  char comma;
  std::istringstream ss(line1);
  ss >> va >> comma >> vb >> comma >> vc;
  CHECK(va == a);  // %.17g round-trips doubles exactly
  CHECK(vb == b);
  CHECK(vc == c);

  CHECK_THROWS_AS(write_csv(path, {"one", "two"}, {{1.0}}), ConfigError);
  std::remove(path.c_str());
}
