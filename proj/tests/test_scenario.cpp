#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "curvebeam/postproc.hpp"
#include "curvebeam/scenario.hpp"

using namespace curvebeam;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("stock geometries") {
  const NurbsCurve qc = quarter_circle_arc(2.0);
  // Every point of the control polygon's rational image lies on the circle.
  for (double xi : {0.0, 0.2, 0.5, 0.8, 1.0}) {
    Vec3 d0, d1, d2;
    qc.evaluate(xi, d0, d1, d2);
    CHECK(d0.norm() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(d0.z() == doctest::Approx(0.0));
  }
  Vec3 d0, d1, d2;
  qc.evaluate(0.0, d0, d1, d2);
  CHECK(d0.isApprox(Vec3(2, 0, 0)));
  CHECK(d1.normalized().isApprox(Vec3(0, 1, 0)));
  qc.evaluate(1.0, d0, d1, d2);
  CHECK(d0.isApprox(Vec3(0, 2, 0)));

  const NurbsCurve seg = straight_segment(3.0);
  seg.evaluate(0.5, d0, d1, d2);
  CHECK(d0.isApprox(Vec3(1.5, 0, 0)));

  CHECK_THROWS_AS(quarter_circle_arc(0.0), ConfigError);
  CHECK_THROWS_AS(straight_segment(-1.0), ConfigError);
}

TEST_CASE("builtin catalogue constructs") {
  const auto names = builtin_names();
  CHECK(names.size() == 8);
  for (const auto& n : names) {
    const Scenario sc = builtin_scenario(n);
    CHECK(sc.name == n);
    CHECK(!sc.stages.empty());
    const BeamPatch patch = build_patch(sc);
    CHECK(patch.n_elements() > 0);
    // every stage's constraint set must be well formed
    for (const Stage& st : sc.stages) {
      const Constraints con = build_constraints(sc, patch, st);
      CHECK(con.n_reduced() > 0);
      CHECK(con.n_reduced() < patch.ndof());
    }
  }
  CHECK_THROWS_AS(builtin_scenario("nope"), ConfigError);
}

TEST_CASE("twist ramp turns the clamp twist fix into a prescribed path") {
  const Scenario sc = builtin_scenario("objectivity");
  const BeamPatch patch = build_patch(sc);
  const Constraints con = build_constraints(sc, patch, sc.stages[0]);
  REQUIRE(con.prescribed().size() == 1);
  CHECK(con.prescribed()[0].first == patch.twist_dof(0));
  CHECK(con.prescribed()[0].second(0.5) == doctest::Approx(10.0 * kPi));

  // With no ramp in the stage the same dof is simply fixed (value pinned to 0).
  Stage bare;
  const Constraints con0 = build_constraints(sc, patch, bare);
  CHECK(con0.prescribed().empty());
  CHECK(con0.n_reduced() == con.n_reduced());
}

TEST_CASE("small rigid-spin run keeps the energy at machine zero") {
  Scenario sc = builtin_scenario("objectivity");
  sc.n_elements = 2;
  sc.stages[0].increments = 25;
  sc.stages[0].ramps[0].total = 4.0 * kPi;  // two full turns
  const ScenarioRun run = run_scenario(sc);
  REQUIRE(run.converged);
  REQUIRE(run.path.size() == 25);
  CHECK(run.lpf_reached == doctest::Approx(1.0));
  // scale: strain energy of the same arc bent into a straight line is O(EI/R)
  const double scale =
      sc.material.E * std::pow(sc.section.dim_eta, 4) / 12.0 * (kPi / 2.0);
  for (const PathSample& ps : run.path) CHECK(std::abs(ps.energy) <= 1e-10 * scale);
  // the tip spins on a circle about the clamp tangent: distance 1 from the
  // axis through (1,0,0) along e_y, and back home after two whole turns
  for (const PathSample& ps : run.path) {
    const Vec3 rel(ps.tip.x() - 1.0, 0.0, ps.tip.z());
    CHECK(rel.norm() == doctest::Approx(1.0).epsilon(1e-8));
  }
  CHECK(run.path.back().tip.isApprox(Vec3(0, 1, 0), 1e-8));
}

TEST_CASE("two-stage force program matches the simultaneous one at the shared end") {
  Scenario sim = builtin_scenario("path_sim");
  Scenario zx = builtin_scenario("path_suczx");
  for (Scenario* sc : {&sim, &zx}) {
    sc->n_elements = 4;
    sc->degree = 3;
    sc->twist_continuity = Continuity::C0;
    for (Stage& st : sc->stages) st.increments = 6;
    // soften the load so the coarse model converges fast
    for (Stage& st : sc->stages) {
      for (auto& f : st.scaled.forces) f.F *= 0.2;
      for (auto& f : st.constant.forces) f.F *= 0.2;
    }
  }
  const ScenarioRun a = run_scenario(sim);
  const ScenarioRun b = run_scenario(zx);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  CHECK(a.lpf_reached == doctest::Approx(1.0));
  CHECK(b.lpf_reached == doctest::Approx(1.0));
  CHECK(a.path.size() == 6);
  CHECK(b.path.size() == 12);
  CHECK(b.path[5].lpf == doctest::Approx(0.5));
  // non-homogeneous mapping-independent end state: identical for any order
  const double gap = l2_distance(a.patch, a.state, b.patch, b.state);
  CHECK(gap <= 1e-10);
  CHECK(a.path.back().energy == doctest::Approx(b.path.back().energy).epsilon(1e-8));
  // the loading genuinely moved the tip
  CHECK((a.path.back().tip - Vec3(0, 1, 0)).norm() > 0.05);
  for (const PathSample& ps : a.path) CHECK(ps.iterations > 0);
}

TEST_CASE("arc-length stage drives the fold and stops on the probe angle") {
  Scenario sc = builtin_scenario("ring_case1");
  sc.n_elements = 8;
  sc.degree = 3;
  sc.stages[0].stop_twist = 0.6;  // stop soon after the fold starts
  sc.stages[0].arc.max_increments = 200;
  const ScenarioRun run = run_scenario(sc);
  REQUIRE(run.converged);
  REQUIRE(!run.path.empty());
  const double twist = std::abs(run.path.back().twist_angle);
  CHECK(twist >= 0.6);
  CHECK(twist < 0.6 + 0.5);  // only overshoots by at most one increment
  CHECK(run.lpf_reached > 0.0);
  // strain recovery rides along
  REQUIRE(run.path.back().probes.size() == 3);
  const SectionState& p0 = run.path.back().probes[0];
  CHECK(std::abs(p0.kap1) + std::abs(p0.kap2) + std::abs(p0.kap3) > 1e-6);
  CHECK(run.path.back().energy > 0.0);
}

TEST_CASE("scenario json round trip") {
  const std::string text = R"json({
    "schema": 1,
    "name": "cantilever",
    "study": "tip-loaded arc",
    "geometry": {"builtin": "quarter_circle", "R": 1.0},
    "degree": 3,
    "n_elements": 4,
    "continuity": "Cpm1",
    "twist_continuity": "C0",
    "section": {"shape": "rectangle", "dims": [0.1, 0.1]},
    "material": {"E": 1e7, "nu": 0.0},
    "model": "D1",
    "policy": {"mapping": "NSRISR", "reference": "incremental"},
    "bcs": [{"type": "clamp", "at": "start", "axial": "y"}],
    "loads": [
      {"type": "force", "xi": 1.0, "components": [10, 0, 0], "stage": 0},
      {"type": "force", "xi": 1.0, "components": [10, 0, 0], "stage": 1,
       "schedule": "constant"},
      {"type": "force", "xi": 1.0, "components": [0, 0, 10], "stage": 1},
      {"type": "moment", "xi": 1.0, "components": [0, 1, 0], "stage": 1}
    ],
    "stages": [
      {"increments": 5, "lpf": [0.0, 0.5]},
      {"increments": 5, "lpf": [0.5, 1.0]}
    ],
    "solver": {"tolerance": 1e-10, "max_iterations": 30},
    "probes": [0.5],
    "twist_probe": {"xi": 0.0, "plane": [[0,1,0],[0,0,1]]}
  })json";
  const Scenario sc = parse_scenario_text(text);
  CHECK(sc.name == "cantilever");
  CHECK(sc.degree == 3);
  CHECK(sc.n_elements == 4);
  CHECK(sc.twist_continuity == Continuity::C0);
  CHECK(sc.model == ConstitutiveModel::D1);
  CHECK(sc.mapping == FrameMapping::NSRISR);
  CHECK(sc.reference == ReferencePolicy::Incremental);
  CHECK(sc.material.mu == doctest::Approx(5e6));
  REQUIRE(sc.bcs.size() == 1);
  CHECK(sc.bcs[0].kind == BcSpec::Kind::Clamp);
  CHECK(sc.bcs[0].axial == 1);
  REQUIRE(sc.stages.size() == 2);
  CHECK(sc.stages[0].scaled.forces.size() == 1);
  CHECK(sc.stages[1].constant.forces.size() == 1);
  CHECK(sc.stages[1].scaled.forces.size() == 1);
  CHECK(sc.stages[1].scaled.moments.size() == 1);
  CHECK(sc.stages[1].lpf_offset == doctest::Approx(0.5));
  CHECK(sc.stages[1].lpf_span == doctest::Approx(0.5));
  CHECK(sc.solver.tolerance == doctest::Approx(1e-10));
  CHECK(sc.probes == std::vector<double>{0.5});
  CHECK(sc.twist_probe.enabled);

  // and it runs
  const ScenarioRun run = run_scenario(sc);
  CHECK(run.converged);
  CHECK(run.lpf_reached == doctest::Approx(1.0));
  CHECK(run.path.size() == 10);
}

TEST_CASE("scenario json error paths") {
  const auto expect_config_error = [](const std::string& text) {
    CHECK_THROWS_AS(parse_scenario_text(text), ConfigError);
  };
  expect_config_error("not json at all");
  expect_config_error(R"({"schema": 2})");
  expect_config_error(R"({"schema": 1})");  // no geometry
  expect_config_error(
      R"({"schema": 1, "geometry": {"builtin": "dodecahedron"},
          "section": {"dims": 0.1}, "material": {"E": 1, "nu": 0}})");
  expect_config_error(
      R"({"schema": 1, "geometry": {"builtin": "straight"},
          "section": {"dims": 0.1},
          "material": {"E": 1, "nu": 0.3, "mu": 0.4}})");  // both moduli
  expect_config_error(
      R"({"schema": 1, "geometry": {"builtin": "straight"},
          "section": {"dims": 0.1}, "material": {"E": 1, "nu": 0},
          "loads": [{"type": "force", "components": [1,0,0], "stage": 7}]})");
  expect_config_error(
      R"({"schema": 1, "geometry": {"builtin": "straight"},
          "section": {"dims": 0.1}, "material": {"E": 1, "nu": 0},
          "bcs": [{"type": "clamp", "at": "middle"}]})");
  CHECK_THROWS_AS(load_scenario_file("/nonexistent/path.json"), ConfigError);
}

TEST_CASE("explicit geometry json") {
  const std::string text = R"json({
    "schema": 1,
    "geometry": {
      "degree": 2,
      "knots": [0, 0, 0, 1, 1, 1],
      "points": [[1, 0, 0], [1, 1, 0], [0, 1, 0]],
      "weights": [1.0, 0.7071067811865476, 1.0]
    },
    "frames": {"dir2": [0, 0, 1], "dir3": [1, 0, 0]},
    "section": {"shape": "circle", "dims": 0.1},
    "material": {"E": 2.1e6, "mu": 807692.3}
  })json";
  const Scenario sc = parse_scenario_text(text);
  CHECK(sc.explicit_directors);
  CHECK(sc.base.points.rows() == 3);
  CHECK(sc.section.shape == SectionShape::Circle);
  const BeamPatch patch = build_patch(sc);
  CHECK(patch.n_elements() == sc.n_elements);
}
