#pragma once

#include <array>
#include <string>
#include <vector>

#include "curvebeam/assembly.hpp"
#include "curvebeam/postproc.hpp"
#include "curvebeam/solver.hpp"

/// Declarative description of a complete analysis run — geometry,
/// discretization, physics, boundary conditions, and a staged load program —
/// plus the driver that executes it and records the equilibrium path.
/// Scenarios come from JSON files (schema 1) or from the built-in studies.
namespace curvebeam {

/// Linear ramp of an end twist DOF, driven by the stage load factor
/// (value = factor * total).
struct TwistRamp {
  bool at_start = true;
  double total = 0.0;
};

/// Boundary-condition primitive, resolved to DOF constraints on the refined
/// patch. All primitives act at a patch end; clamped knot vectors make the
/// end control point interpolatory and the adjacent one control the tangent.
struct BcSpec {
  enum class Kind {
    Clamp,          ///< end CP fixed, adjacent CP pinned transverse to `axial`, end twist fixed
    FixComponents,  ///< fix selected translation components of the end CP
    TieAdjacent,    ///< adjacent CP follows the end CP in one component (keeps the end tangent in a plane)
    FixTwist,       ///< fix the end twist coefficient
  };
  Kind kind = Kind::Clamp;
  bool at_start = true;
  int axial = -1;  ///< Clamp: adjacent-CP translation component left free (-1: none)
  std::array<bool, 3> components{false, false, false};  ///< FixComponents selection
  int component = 0;                                    ///< TieAdjacent component
};

/// One segment of the load program. Load-control stages march the stage
/// factor over a uniform schedule to 1; arc-length stages trace the path
/// until lambda_max, stop_twist, or the increment budget.
struct Stage {
  LoadSet scaled;    ///< multiplied by the stage load factor
  LoadSet constant;  ///< held at full value (loads kept from earlier stages)
  std::vector<TwistRamp> ramps;
  int increments = 10;
  bool arclength = false;
  ArcLengthSettings arc;
  double stop_twist = 0.0;  ///< arc length: stop once |probe twist angle| reaches this (0 = off)
  double lpf_offset = 0.0;  ///< global LPF = lpf_offset + lpf_span * stage factor
  double lpf_span = 1.0;
};

/// Tracks the rotation of the axis tangent at one station within the plane
/// spanned by (ref2, ref3); the angle atan2(t.ref3, t.ref2) is unwrapped
/// across increments so multi-turn histories accumulate monotonically.
struct TwistProbe {
  bool enabled = false;
  double xi = 0.0;
  Vec3 ref2 = Vec3(0, 1, 0);
  Vec3 ref3 = Vec3(0, 0, 1);
};

struct Scenario {
  std::string name;
  std::string study;  ///< one-line description of what the run demonstrates

  NurbsCurve base;  ///< exact coarse geometry; build_patch k-refines it
  bool explicit_directors = false;  ///< use dir2/dir3 instead of curve-intrinsic frames
  Vec3 dir2 = Vec3(0, 1, 0);
  Vec3 dir3 = Vec3(0, 0, 1);

  int degree = 3;
  int twist_degree = -1;  ///< <0: same as degree
  int n_elements = 8;
  Continuity continuity = Continuity::CPm1;
  Continuity twist_continuity = Continuity::CPm1;

  CrossSection section;
  Material material;
  ConstitutiveModel model = ConstitutiveModel::Da;
  FrameMapping mapping = FrameMapping::NSRISR;
  ReferencePolicy reference = ReferencePolicy::Incremental;

  std::vector<BcSpec> bcs;
  std::vector<Stage> stages;
  SolverSettings solver;

  std::vector<double> probes;  ///< stations for per-increment section records
  TwistProbe twist_probe;
  double energy_scale = 0.0;  ///< optional normalization for reported energies (0: off)
};

/// One converged increment of a scenario run.
struct PathSample {
  double lpf = 0.0;
  int iterations = 0;
  double energy = 0.0;
  Vec3 tip = Vec3::Zero();   ///< current axis position at xi = 1
  double twist_angle = 0.0;  ///< unwrapped probe angle (0 when no probe)
  std::vector<SectionState> probes;  ///< one per Scenario::probes station
};

/// A finished (or partially finished) run: the discretized patch, the final
/// state, and the recorded path.
struct ScenarioRun {
  explicit ScenarioRun(BeamPatch p) : patch(std::move(p)), state(patch.initial_state()) {}
  BeamPatch patch;
  BeamPatch::State state;
  bool converged = true;
  double lpf_reached = 0.0;
  std::vector<PathSample> path;
};

/// Discretize the scenario geometry (k-refinement to the requested degree,
/// element count, and continuity) and construct the patch.
BeamPatch build_patch(const Scenario& sc);

/// Resolve the scenario's boundary conditions plus the stage's twist ramps
/// into a finalized constraint set.
Constraints build_constraints(const Scenario& sc, const BeamPatch& patch,
                              const Stage& stage);

/// Execute the full load program. Nonconvergence stops the run and returns
/// the partial path with converged = false.
ScenarioRun run_scenario(const Scenario& sc);

/// Parse a schema-1 scenario JSON document / load one from a file.
/// Malformed input raises ConfigError.
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario_file(const std::string& path);

/// Built-in studies (parameters are set to the documented defaults and can be
/// adjusted on the returned object):
///   objectivity        rigid spin of a clamped quarter-circle arc by 10 turns
///   path_sim           quarter-circle tip loads applied simultaneously
///   path_sucxz         the same loads, x-force first then z-force
///   path_suczx         the same loads, z-force first then x-force
///   ring_case1         quarter-ring twisting, slender section (h = 0.3)
///   ring_case2         quarter-ring twisting, stocky section (h = 1.0)
///   ring_cycles        ring_case2 driven through eight full twist cycles
///   helix              straight cantilever coiled by dead tip moments
std::vector<std::string> builtin_names();
Scenario builtin_scenario(const std::string& name);

/// Exact quarter-circle arc of radius R in the x-y plane from (R,0,0) to
/// (0,R,0), start tangent +y.
NurbsCurve quarter_circle_arc(double R);

/// Straight segment of length L along +x from the origin.
NurbsCurve straight_segment(double L);

}  // namespace curvebeam
