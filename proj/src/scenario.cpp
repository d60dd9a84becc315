#include "curvebeam/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace curvebeam {

using nlohmann::json;

// ---------------------------------------------------------------------------
// stock geometries
// ---------------------------------------------------------------------------

NurbsCurve quarter_circle_arc(double R) {
  if (R <= 0.0) throw ConfigError("quarter_circle_arc: radius must be positive");
  NurbsCurve c;
  c.basis = KnotVector(2, {0.0, 0.0, 0.0, 1.0, 1.0, 1.0});
  c.points.resize(3, 3);
  c.points.row(0) = Vec3(R, 0.0, 0.0);
  c.points.row(1) = Vec3(R, R, 0.0);
  c.points.row(2) = Vec3(0.0, R, 0.0);
  c.weights.resize(3);
  c.weights << 1.0, std::sqrt(0.5), 1.0;
  return c;
}

NurbsCurve straight_segment(double L) {
  if (L <= 0.0) throw ConfigError("straight_segment: length must be positive");
  NurbsCurve c;
  c.basis = KnotVector(1, {0.0, 0.0, 1.0, 1.0});
  c.points.resize(2, 3);
  c.points.row(0) = Vec3(0.0, 0.0, 0.0);
  c.points.row(1) = Vec3(L, 0.0, 0.0);
  c.weights = VecX::Ones(2);
  return c;
}

// ---------------------------------------------------------------------------
// patch and constraint construction
// ---------------------------------------------------------------------------

BeamPatch build_patch(const Scenario& sc) {
  if (sc.degree < 2) throw ConfigError("scenario: axis degree must be at least 2");
  const int twist_degree = sc.twist_degree < 0 ? sc.degree : sc.twist_degree;
  if (twist_degree < 1) throw ConfigError("scenario: twist degree must be at least 1");
  const NurbsCurve axis = k_refine(sc.base, sc.degree, sc.n_elements, sc.continuity);
  const KnotVector twist = make_knot_vector(twist_degree, sc.n_elements, sc.twist_continuity);
  if (sc.explicit_directors) {
    const ExplicitFrameProvider fp(sc.dir2, sc.dir3);
    return BeamPatch(axis, twist, fp, sc.section, sc.material, sc.model, sc.mapping,
                     sc.reference);
  }
  const FrenetFrameProvider fp(&axis);
  return BeamPatch(axis, twist, fp, sc.section, sc.material, sc.model, sc.mapping,
                   sc.reference);
}

Constraints build_constraints(const Scenario& sc, const BeamPatch& patch, const Stage& stage) {
  Constraints con(patch.ndof());
  bool ramped_start = false;
  bool ramped_end = false;
  for (const TwistRamp& r : stage.ramps) (r.at_start ? ramped_start : ramped_end) = true;

  const int last_cp = patch.n_cp() - 1;
  const int last_tw = patch.n_twist() - 1;
  if (last_cp < 1) throw ConfigError("scenario: need at least two control points");

  for (const BcSpec& bc : sc.bcs) {
    const int end_cp = bc.at_start ? 0 : last_cp;
    const int adj_cp = bc.at_start ? 1 : last_cp - 1;
    const int tw = bc.at_start ? 0 : last_tw;
    const bool ramped = bc.at_start ? ramped_start : ramped_end;
    switch (bc.kind) {
      case BcSpec::Kind::Clamp:
        if (bc.axial < -1 || bc.axial > 2)
          throw ConfigError("scenario: clamp axial component out of range");
        for (int c = 0; c < 3; ++c) con.fix(patch.translation_dof(end_cp, c));
        for (int c = 0; c < 3; ++c)
          if (c != bc.axial) con.fix(patch.translation_dof(adj_cp, c));
        if (!ramped) con.fix(patch.twist_dof(tw));
        break;
      case BcSpec::Kind::FixComponents:
        for (int c = 0; c < 3; ++c)
          if (bc.components[c]) con.fix(patch.translation_dof(end_cp, c));
        break;
      case BcSpec::Kind::TieAdjacent:
        if (bc.component < 0 || bc.component > 2)
          throw ConfigError("scenario: tie component out of range");
        con.tie(patch.translation_dof(adj_cp, bc.component),
                patch.translation_dof(end_cp, bc.component));
        break;
      case BcSpec::Kind::FixTwist:
        if (!ramped) con.fix(patch.twist_dof(tw));
        break;
    }
  }
  for (const TwistRamp& r : stage.ramps) {
    const int tw = r.at_start ? 0 : last_tw;
    const double total = r.total;
    con.prescribe(patch.twist_dof(tw), [total](double l) { return l * total; });
  }
  con.finalize();
  return con;
}

// ---------------------------------------------------------------------------
// staged load program driver
// ---------------------------------------------------------------------------

ScenarioRun run_scenario(const Scenario& sc) {
  if (sc.stages.empty()) throw ConfigError("scenario: no stages");
  ScenarioRun run(build_patch(sc));
  BeamPatch& patch = run.patch;

  std::vector<int> probe_qps;
  probe_qps.reserve(sc.probes.size());
  for (double x : sc.probes) probe_qps.push_back(nearest_qp(patch, x));

  // Tangent orientation at the twist probe station, measured in the given
  // reference plane and unwrapped across increments so whole turns accumulate.
  const auto probe_angle_raw = [&](const BeamPatch::State& s) {
    Vec3 r, r1, r11;
    patch.curve_at(s, sc.twist_probe.xi, r, r1, r11);
    const Vec3 t = r1.normalized();
    return std::atan2(t.dot(sc.twist_probe.ref3), t.dot(sc.twist_probe.ref2));
  };
  double raw_prev = sc.twist_probe.enabled ? probe_angle_raw(run.state) : 0.0;
  double angle_acc = 0.0;

  for (const Stage& stage : sc.stages) {
    Constraints con = build_constraints(sc, patch, stage);
    const Assembler asmb(patch, stage.scaled, AssemblyOptions{}, stage.constant);

    const std::size_t base = run.path.size();
    const auto record = [&](double lam, const BeamPatch::State& s,
                            const std::vector<FrameData>& fr) {
      PathSample ps;
      ps.lpf = stage.lpf_offset + stage.lpf_span * lam;
      ps.energy = internal_energy(patch, s);
      Vec3 r1, r11;
      patch.curve_at(s, 1.0, ps.tip, r1, r11);
      if (sc.twist_probe.enabled) {
        const double raw = probe_angle_raw(s);
        double d = raw - raw_prev;
        if (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
        if (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
        angle_acc += d;
        raw_prev = raw;
        ps.twist_angle = angle_acc;
      }
      ps.probes.reserve(probe_qps.size());
      for (int k : probe_qps) ps.probes.push_back(recover_section_state(patch, s, fr, k));
      run.path.push_back(std::move(ps));
    };

    SolveResult res;
    if (stage.arclength) {
      ArcLengthSettings as = stage.arc;
      if (stage.stop_twist > 0.0) {
        if (!sc.twist_probe.enabled)
          throw ConfigError("scenario: stop_twist requires a twist probe");
        // The record callback runs first, so angle_acc is already current.
        const double stop = stage.stop_twist;
        as.stop_when = [&angle_acc, stop](double, const BeamPatch::State&,
                                          const std::vector<FrameData>&) {
          return std::abs(angle_acc) >= stop;
        };
      }
      res = solve_arclength(patch, asmb, con, run.state, as, sc.solver, record);
    } else {
      if (stage.increments < 1) throw ConfigError("scenario: stage needs >= 1 increments");
      std::vector<double> targets(stage.increments);
      for (int i = 0; i < stage.increments; ++i)
        targets[i] = static_cast<double>(i + 1) / stage.increments;
      res = solve_newton(patch, asmb, con, run.state, targets, sc.solver, record);
    }
    for (std::size_t k = 0; k < res.increments.size() && base + k < run.path.size(); ++k)
      run.path[base + k].iterations = res.increments[k].iterations;
    run.lpf_reached = stage.lpf_offset + stage.lpf_span * res.lambda_reached;
    if (!res.converged) {
      run.converged = false;
      return run;
    }
  }
  return run;
}

// ---------------------------------------------------------------------------
// built-in studies
// ---------------------------------------------------------------------------

namespace {

CrossSection rect_section(double dim_eta, double dim_zeta) {
  CrossSection s;
  s.shape = SectionShape::Rectangle;
  s.dim_eta = dim_eta;
  s.dim_zeta = dim_zeta;
  return s;
}

BcSpec clamp_bc(bool at_start, int axial) {
  BcSpec bc;
  bc.kind = BcSpec::Kind::Clamp;
  bc.at_start = at_start;
  bc.axial = axial;
  return bc;
}

Scenario objectivity_scenario() {
  Scenario sc;
  sc.name = "objectivity";
  sc.study =
      "clamped quarter-circle arc spun rigidly through ten full turns about its "
      "clamped-end tangent; an objective formulation keeps the strain energy at zero";
  sc.base = quarter_circle_arc(1.0);
  sc.degree = 3;
  sc.n_elements = 8;
  sc.twist_continuity = Continuity::C0;
  sc.section = rect_section(0.1, 0.1);
  sc.material = Material{1.0e7, 5.0e6};
  sc.model = ConstitutiveModel::Da;
  sc.mapping = FrameMapping::NSRISR;
  sc.reference = ReferencePolicy::Incremental;
  // Both clamped control points sit on the rotation axis, so ramping the
  // clamped-end twist coordinate is exactly a rigid rotation of the support.
  sc.bcs.push_back(clamp_bc(true, 1));
  Stage st;
  st.increments = 100;
  st.ramps.push_back(TwistRamp{true, 20.0 * std::numbers::pi});
  sc.stages.push_back(st);
  // normalize reported energies by the energy of bending a straight rod of
  // this stiffness into the quarter circle
  const double EI = sc.material.E * std::pow(0.1, 4) / 12.0;
  sc.energy_scale = EI * std::numbers::pi / 4.0;
  return sc;
}

Scenario path_scenario(int order) {
  Scenario sc;
  sc.name = order == 0 ? "path_sim" : (order == 1 ? "path_sucxz" : "path_suczx");
  sc.study =
      "quarter-circle cantilever loaded by two orthogonal tip forces applied either "
      "simultaneously or one after the other; a path-independent update makes the "
      "final state identical for every application order";
  sc.base = quarter_circle_arc(1.0);
  sc.degree = 4;
  sc.n_elements = 8;
  sc.twist_continuity = Continuity::C0;
  sc.section = rect_section(0.1, 0.1);
  sc.material = Material{1.0e7, 5.0e6};
  sc.model = ConstitutiveModel::Da;
  sc.mapping = FrameMapping::NSRISR;
  sc.reference = ReferencePolicy::Incremental;
  sc.bcs.push_back(clamp_bc(true, 1));
  const PointForce fx{1.0, Vec3(150.0, 0.0, 0.0)};
  const PointForce fz{1.0, Vec3(0.0, 0.0, 150.0)};
  if (order == 0) {
    Stage st;
    st.increments = 40;
    st.scaled.forces = {fx, fz};
    sc.stages.push_back(st);
  } else {
    const PointForce first = order == 1 ? fx : fz;
    const PointForce second = order == 1 ? fz : fx;
    Stage s1;
    s1.increments = 20;
    s1.scaled.forces = {first};
    s1.lpf_offset = 0.0;
    s1.lpf_span = 0.5;
    Stage s2;
    s2.increments = 20;
    s2.scaled.forces = {second};
    s2.constant.forces = {first};
    s2.lpf_offset = 0.5;
    s2.lpf_span = 0.5;
    sc.stages = {s1, s2};
  }
  return sc;
}

Scenario ring_scenario(double h, double turns, const std::string& name) {
  Scenario sc;
  sc.name = name;
  sc.study =
      "circular ring folded by a pair of opposite bending couples; a quarter model "
      "with symmetry conditions traces the load factor against the accumulated "
      "rotation at the loaded point";
  const double R = 15.0;
  const double E = 2.1e6;
  const double nu = 0.3;
  sc.base = quarter_circle_arc(R);
  sc.degree = 4;
  sc.n_elements = 32;
  sc.twist_continuity = Continuity::C0;
  sc.section = rect_section(h, h);
  sc.material = Material{E, E / (2.0 * (1.0 + nu))};
  sc.model = ConstitutiveModel::Da;
  sc.mapping = FrameMapping::NSRISR;
  sc.reference = ReferencePolicy::Incremental;

  // Quarter-model symmetry. At the loaded point A = (R,0,0) the section stays
  // in the x-z plane: block the in-plane motions, keep the tangent's x
  // component zero by tying the adjacent control point's x to A's, and pin the
  // twist coordinate (the transported director stays aligned by symmetry). The
  // quarter cut B = (0,R,0) mirrors this for the y-z plane.
  BcSpec a_fix;
  a_fix.kind = BcSpec::Kind::FixComponents;
  a_fix.at_start = true;
  a_fix.components = {false, true, true};
  BcSpec a_tie;
  a_tie.kind = BcSpec::Kind::TieAdjacent;
  a_tie.at_start = true;
  a_tie.component = 0;
  BcSpec a_tw;
  a_tw.kind = BcSpec::Kind::FixTwist;
  a_tw.at_start = true;
  BcSpec b_fix;
  b_fix.kind = BcSpec::Kind::FixComponents;
  b_fix.at_start = false;
  b_fix.components = {true, false, true};
  BcSpec b_tie;
  b_tie.kind = BcSpec::Kind::TieAdjacent;
  b_tie.at_start = false;
  b_tie.component = 1;
  BcSpec b_tw;
  b_tw.kind = BcSpec::Kind::FixTwist;
  b_tw.at_start = false;
  sc.bcs = {a_fix, a_tie, a_tw, b_fix, b_tie, b_tw};

  const double EI = E * h * h * h * h / 12.0;
  const double M_full = EI / R;  // unit load: full couple on the complete ring
  Stage st;
  st.arclength = true;
  st.scaled.moments = {PointMoment{0.0, Vec3(0.5 * M_full, 0.0, 0.0)}};
  st.arc.ds = 0.5;
  st.arc.ds_max = 50.0;
  st.arc.lambda_max = 1.0e30;  // never the stop criterion: the twist angle is
  st.arc.max_increments = turns > 1.0 ? 20000 : 4000;
  st.arc.target_iterations = 5;
  st.stop_twist = turns * 2.0 * std::numbers::pi;
  sc.stages = {st};

  sc.twist_probe.enabled = true;
  sc.twist_probe.xi = 0.0;
  sc.twist_probe.ref2 = Vec3(0.0, 1.0, 0.0);
  sc.twist_probe.ref3 = Vec3(0.0, 0.0, 1.0);
  sc.probes = {0.0, 0.5, 1.0};
  return sc;
}

Scenario helix_scenario() {
  Scenario sc;
  sc.name = "helix";
  sc.study =
      "straight rod rolled into a multi-loop helix by a dead tip couple with equal "
      "bending and torsion components; the deformed centerline follows a closed-form "
      "helical solution";
  sc.base = straight_segment(40.0);
  sc.explicit_directors = true;
  sc.dir2 = Vec3(0.0, 1.0, 0.0);
  sc.dir3 = Vec3(0.0, 0.0, 1.0);
  sc.degree = 4;
  sc.n_elements = 40;
  sc.twist_continuity = Continuity::C0;
  sc.section = rect_section(1.0, 1.0);
  sc.material = Material{700.0, 350.0};
  sc.model = ConstitutiveModel::Da;
  sc.mapping = FrameMapping::NSRISR;
  sc.reference = ReferencePolicy::Incremental;
  sc.bcs.push_back(clamp_bc(true, 0));
  Stage st;
  st.increments = 100;
  st.scaled.moments = {PointMoment{1.0, Vec3(10.0, 0.0, 10.0)}};
  sc.stages.push_back(st);
  sc.probes = {0.0, 0.5, 1.0};
  return sc;
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"objectivity", "path_sim",   "path_sucxz", "path_suczx",
          "ring_case1",  "ring_case2", "ring_cycles", "helix"};
}

Scenario builtin_scenario(const std::string& name) {
  if (name == "objectivity") return objectivity_scenario();
  if (name == "path_sim") return path_scenario(0);
  if (name == "path_sucxz") return path_scenario(1);
  if (name == "path_suczx") return path_scenario(2);
  if (name == "ring_case1") return ring_scenario(0.3, 1.0, "ring_case1");
  if (name == "ring_case2") return ring_scenario(1.0, 1.0, "ring_case2");
  if (name == "ring_cycles") return ring_scenario(1.0, 8.0, "ring_cycles");
  if (name == "helix") return helix_scenario();
  throw ConfigError("unknown built-in scenario '" + name + "'");
}

// ---------------------------------------------------------------------------
// JSON scenario files
// ---------------------------------------------------------------------------

namespace {

int axis_component(const std::string& s, const char* what) {
  if (s == "x") return 0;
  if (s == "y") return 1;
  if (s == "z") return 2;
  throw ConfigError(std::string("scenario: ") + what + " must be \"x\", \"y\" or \"z\"");
}

bool parse_at(const json& j) {
  const std::string at = j.value("at", std::string("start"));
  if (at == "start") return true;
  if (at == "end") return false;
  throw ConfigError("scenario: \"at\" must be \"start\" or \"end\"");
}

Continuity parse_continuity(const std::string& s) {
  if (s == "Cpm1" || s == "max") return Continuity::CPm1;
  if (s == "C0") return Continuity::C0;
  throw ConfigError("scenario: continuity must be \"Cpm1\" or \"C0\"");
}

Vec3 to_vec3(const json& a, const char* what) {
  if (!a.is_array() || a.size() != 3)
    throw ConfigError(std::string("scenario: ") + what + " must be an array of 3 numbers");
  return Vec3(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
}

NurbsCurve parse_geometry(const json& g) {
  if (g.contains("builtin")) {
    const std::string b = g.at("builtin").get<std::string>();
    if (b == "quarter_circle") return quarter_circle_arc(g.value("R", 1.0));
    if (b == "straight") return straight_segment(g.value("L", 1.0));
    throw ConfigError("scenario: unknown geometry builtin '" + b + "'");
  }
  NurbsCurve c;
  if (!g.contains("degree") || !g.contains("knots") || !g.contains("points"))
    throw ConfigError("scenario: explicit geometry needs degree, knots and points");
  c.basis = KnotVector(g.at("degree").get<int>(), g.at("knots").get<std::vector<double>>());
  const json& pts = g.at("points");
  if (!pts.is_array() || pts.empty())
    throw ConfigError("scenario: geometry points must be a non-empty array");
  c.points.resize(static_cast<Eigen::Index>(pts.size()), 3);
  for (std::size_t i = 0; i < pts.size(); ++i)
    c.points.row(static_cast<Eigen::Index>(i)) = to_vec3(pts[i], "geometry point");
  if (g.contains("weights")) {
    const auto w = g.at("weights").get<std::vector<double>>();
    c.weights = Eigen::Map<const VecX>(w.data(), static_cast<Eigen::Index>(w.size()));
  } else {
    c.weights = VecX::Ones(c.points.rows());
  }
  c.validate();
  return c;
}

CrossSection parse_section(const json& s) {
  CrossSection sec;
  const std::string shape = s.value("shape", std::string("rectangle"));
  if (shape == "rectangle")
    sec.shape = SectionShape::Rectangle;
  else if (shape == "circle")
    sec.shape = SectionShape::Circle;
  else
    throw ConfigError("scenario: section shape must be \"rectangle\" or \"circle\"");
  if (!s.contains("dims")) throw ConfigError("scenario: section needs \"dims\"");
  const json& d = s.at("dims");
  if (d.is_number()) {
    sec.dim_eta = sec.dim_zeta = d.get<double>();
  } else if (d.is_array() && d.size() == 2) {
    sec.dim_eta = d[0].get<double>();
    sec.dim_zeta = d[1].get<double>();
  } else if (d.is_array() && d.size() == 1) {
    sec.dim_eta = sec.dim_zeta = d[0].get<double>();
  } else {
    throw ConfigError("scenario: section dims must be a number or array of 1-2 numbers");
  }
  sec.torsion_J = s.value("J", 0.0);
  sec.validate();
  return sec;
}

Material parse_material(const json& m) {
  Material mat;
  if (!m.contains("E")) throw ConfigError("scenario: material needs \"E\"");
  mat.E = m.at("E").get<double>();
  const bool has_mu = m.contains("mu");
  const bool has_nu = m.contains("nu");
  if (has_mu == has_nu)
    throw ConfigError("scenario: material needs exactly one of \"mu\" or \"nu\"");
  mat.mu = has_mu ? m.at("mu").get<double>() : mat.E / (2.0 * (1.0 + m.at("nu").get<double>()));
  mat.validate();
  return mat;
}

Scenario from_json_doc(const json& j) {
  if (j.value("schema", -1) != 1)
    throw ConfigError("scenario: missing or unsupported \"schema\" (expected 1)");
  Scenario sc;
  sc.name = j.value("name", std::string("scenario"));
  sc.study = j.value("study", std::string());

  sc.base = parse_geometry(j.at("geometry"));
  if (j.contains("frames")) {
    sc.explicit_directors = true;
    sc.dir2 = to_vec3(j.at("frames").at("dir2"), "frames.dir2");
    sc.dir3 = to_vec3(j.at("frames").at("dir3"), "frames.dir3");
  }
  sc.section = parse_section(j.at("section"));
  sc.material = parse_material(j.at("material"));

  sc.degree = j.value("degree", 3);
  sc.twist_degree = j.value("twist_degree", -1);
  sc.n_elements = j.value("n_elements", 8);
  if (sc.n_elements < 1) throw ConfigError("scenario: n_elements must be >= 1");
  sc.continuity = parse_continuity(j.value("continuity", std::string("Cpm1")));
  sc.twist_continuity = parse_continuity(j.value("twist_continuity", std::string("Cpm1")));

  sc.model = parse_model(j.value("model", std::string("Da")));
  if (j.contains("policy")) {
    const json& p = j.at("policy");
    if (p.contains("mapping")) sc.mapping = parse_mapping(p.at("mapping").get<std::string>());
    if (p.contains("reference"))
      sc.reference = parse_reference(p.at("reference").get<std::string>());
  }

  // Stages first: loads, ramps and the arc-length block attach to them.
  if (j.contains("stages")) {
    for (const json& e : j.at("stages")) {
      Stage st;
      st.increments = e.value("increments", 10);
      if (e.contains("lpf")) {
        const json& w = e.at("lpf");
        if (!w.is_array() || w.size() != 2)
          throw ConfigError("scenario: stage lpf must be [begin, end]");
        st.lpf_offset = w[0].get<double>();
        st.lpf_span = w[1].get<double>() - st.lpf_offset;
      }
      if (e.contains("arclength")) {
        st.arclength = true;
        const json& a = e.at("arclength");
        st.arc.ds = a.value("ds", st.arc.ds);
        st.arc.ds_min = a.value("ds_min", st.arc.ds_min);
        st.arc.ds_max = a.value("ds_max", st.arc.ds_max);
        st.arc.lambda_max = a.value("lambda_max", st.arc.lambda_max);
        st.arc.max_increments = a.value("max_increments", st.arc.max_increments);
        st.arc.target_iterations = a.value("target_iterations", st.arc.target_iterations);
        st.stop_twist = a.value("stop_twist", 0.0);
      }
      sc.stages.push_back(st);
    }
  }
  if (sc.stages.empty()) sc.stages.emplace_back();

  const auto stage_of = [&sc](const json& e) -> Stage& {
    const int si = e.value("stage", 0);
    if (si < 0 || si >= static_cast<int>(sc.stages.size()))
      throw ConfigError("scenario: stage index out of range");
    return sc.stages[static_cast<std::size_t>(si)];
  };

  if (j.contains("loads")) {
    for (const json& e : j.at("loads")) {
      Stage& st = stage_of(e);
      const std::string sched = e.value("schedule", std::string("scaled"));
      if (sched != "scaled" && sched != "constant")
        throw ConfigError("scenario: load schedule must be \"scaled\" or \"constant\"");
      LoadSet& set = sched == "scaled" ? st.scaled : st.constant;
      const std::string type = e.value("type", std::string("force"));
      const double xi = e.value("xi", 1.0);
      const Vec3 comp = to_vec3(e.at("components"), "load components");
      if (type == "force")
        set.forces.push_back(PointForce{xi, comp});
      else if (type == "moment")
        set.moments.push_back(PointMoment{xi, comp});
      else
        throw ConfigError("scenario: load type must be \"force\" or \"moment\"");
    }
  }

  if (j.contains("bcs")) {
    for (const json& e : j.at("bcs")) {
      const std::string type = e.at("type").get<std::string>();
      if (type == "prescribe_twist") {
        Stage& st = stage_of(e);
        st.ramps.push_back(TwistRamp{parse_at(e), e.at("total").get<double>()});
        continue;
      }
      BcSpec bc;
      bc.at_start = parse_at(e);
      if (type == "clamp") {
        bc.kind = BcSpec::Kind::Clamp;
        bc.axial = e.contains("axial")
                       ? axis_component(e.at("axial").get<std::string>(), "clamp axial")
                       : -1;
      } else if (type == "fix") {
        bc.kind = BcSpec::Kind::FixComponents;
        if (!e.contains("components"))
          throw ConfigError("scenario: fix needs \"components\"");
        for (const json& c : e.at("components"))
          bc.components[static_cast<std::size_t>(
              axis_component(c.get<std::string>(), "fix component"))] = true;
      } else if (type == "tie_adjacent") {
        bc.kind = BcSpec::Kind::TieAdjacent;
        bc.component = axis_component(e.at("component").get<std::string>(), "tie component");
      } else if (type == "fix_twist") {
        bc.kind = BcSpec::Kind::FixTwist;
      } else {
        throw ConfigError("scenario: unknown bc type '" + type + "'");
      }
      sc.bcs.push_back(bc);
    }
  }

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    sc.solver.tolerance = s.value("tolerance", sc.solver.tolerance);
    sc.solver.max_iterations = s.value("max_iterations", sc.solver.max_iterations);
    sc.solver.max_halvings = s.value("max_halvings", sc.solver.max_halvings);
    sc.solver.polish_iterations = s.value("polish_iterations", sc.solver.polish_iterations);
  }

  if (j.contains("probes")) sc.probes = j.at("probes").get<std::vector<double>>();
  sc.energy_scale = j.value("energy_scale", 0.0);
  if (j.contains("twist_probe")) {
    const json& t = j.at("twist_probe");
    sc.twist_probe.enabled = true;
    sc.twist_probe.xi = t.value("xi", 0.0);
    if (t.contains("plane")) {
      const json& p = t.at("plane");
      if (!p.is_array() || p.size() != 2)
        throw ConfigError("scenario: twist_probe plane must be [ref2, ref3]");
      sc.twist_probe.ref2 = to_vec3(p[0], "twist_probe plane");
      sc.twist_probe.ref3 = to_vec3(p[1], "twist_probe plane");
    }
  }
  return sc;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: invalid JSON: ") + e.what());
  }
  try {
    return from_json_doc(doc);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("scenario: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

}  // namespace curvebeam
