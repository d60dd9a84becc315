// Benchmark front end for the curved-beam library: runs built-in or JSON
// studies, emits deterministic CSV, sweeps discretization/formulation axes,
// and verifies the numerical kernels against independent oracles.
//
// Exit codes: 0 success, 1 configuration error, 2 nonconvergence (partial
// outputs are still written), 3 verification-suite failure.
#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "curvebeam/postproc.hpp"
#include "curvebeam/scenario.hpp"
#include "curvebeam/section.hpp"
#include "curvebeam/solver.hpp"
#include "verify_suites.hpp"

using namespace curvebeam;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNoConverge = 2;
constexpr int kExitVerifyFail = 3;

// ---------------------------------------------------------------------------
// scenario selection and overrides
// ---------------------------------------------------------------------------

struct Overrides {
  std::string builtin;
  std::string file;
  std::string mapping, reference, model, continuity, twist_continuity;
  int p = 0, twist_p = 0, elements = 0, increments = 0;
  double tolerance = 0.0;
  std::string out = "out";
};

void add_scenario_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--builtin", o.builtin, "Built-in study name (see `list`)");
  cmd->add_option("--scenario", o.file, "Scenario JSON file");
  cmd->add_option("--mapping", o.mapping, "Frame update: SR or NSRISR");
  cmd->add_option("--reference", o.reference, "Transport reference: incremental or total");
  cmd->add_option("--model", o.model, "Constitutive model: D0, D1, D2, D3 or Da");
  cmd->add_option("--p", o.p, "Axis basis degree");
  cmd->add_option("--twist-p", o.twist_p, "Twist basis degree");
  cmd->add_option("--elements", o.elements, "Number of elements");
  cmd->add_option("--continuity", o.continuity, "Axis continuity: Cpm1 or C0");
  cmd->add_option("--twist-continuity", o.twist_continuity, "Twist continuity: Cpm1 or C0");
  cmd->add_option("--increments", o.increments, "Override increments of every ramp stage");
  cmd->add_option("--tolerance", o.tolerance, "Newton residual tolerance");
  cmd->add_option("--out", o.out, "Output directory (default: out)");
}

Continuity parse_cont(const std::string& s) {
  if (s == "Cpm1" || s == "max") return Continuity::CPm1;
  if (s == "C0") return Continuity::C0;
  throw ConfigError("continuity must be \"Cpm1\" or \"C0\"");
}

Scenario make_scenario(const Overrides& o) {
  if (o.builtin.empty() == o.file.empty())
    throw ConfigError("give exactly one of --builtin or --scenario");
  Scenario sc = o.builtin.empty() ? load_scenario_file(o.file) : builtin_scenario(o.builtin);
  if (!o.mapping.empty()) sc.mapping = parse_mapping(o.mapping);
  if (!o.reference.empty()) sc.reference = parse_reference(o.reference);
  if (!o.model.empty()) sc.model = parse_model(o.model);
  if (o.p > 0) sc.degree = o.p;
  if (o.twist_p > 0) sc.twist_degree = o.twist_p;
  if (o.elements > 0) sc.n_elements = o.elements;
  if (!o.continuity.empty()) sc.continuity = parse_cont(o.continuity);
  if (!o.twist_continuity.empty()) sc.twist_continuity = parse_cont(o.twist_continuity);
  if (o.increments > 0)
    for (Stage& st : sc.stages)
      if (!st.arclength) st.increments = o.increments;
  if (o.tolerance > 0) sc.solver.tolerance = o.tolerance;
  return sc;
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

void write_run_outputs(const std::string& dir, const Scenario& sc, const ScenarioRun& run) {
  std::filesystem::create_directories(dir);
  const std::string base = dir + "/" + sc.name;

  std::vector<std::vector<double>> rows;
  rows.reserve(run.path.size());
  for (const PathSample& ps : run.path)
    rows.push_back({ps.lpf, static_cast<double>(ps.iterations), ps.energy, ps.tip.x(),
                    ps.tip.y(), ps.tip.z(), ps.twist_angle});
  write_csv(base + "_path.csv",
            {"lpf", "iterations", "energy", "tip_x", "tip_y", "tip_z", "twist_angle"}, rows);

  if (!sc.probes.empty()) {
    rows.clear();
    for (const PathSample& ps : run.path)
      for (const SectionState& st : ps.probes)
        rows.push_back({ps.lpf, st.xi, st.eps, st.kap1, st.kap2, st.kap3, st.N, st.M1,
                        st.M2, st.M3, st.curviness});
    write_csv(base + "_probes.csv",
              {"lpf", "xi", "eps", "kap1", "kap2", "kap3", "N", "M1", "M2", "M3",
               "curviness"},
              rows);
  }

  // final-state section profile at every quadrature station
  std::vector<FrameData> frames;
  BeamPatch::State fin = run.state;
  run.patch.update_state(fin, frames);
  rows.clear();
  for (int k = 0; k < run.patch.n_qp(); ++k) {
    const SectionState st = recover_section_state(run.patch, fin, frames, k);
    rows.push_back({st.xi, st.eps, st.kap1, st.kap2, st.kap3, st.N, st.M1, st.M2, st.M3,
                    st.curviness});
  }
  write_csv(base + "_profile.csv",
            {"xi", "eps", "kap1", "kap2", "kap3", "N", "M1", "M2", "M3", "curviness"},
            rows);
}

int cmd_run(const Overrides& o) {
  const Scenario sc = make_scenario(o);
  std::printf("study: %s\n", sc.name.c_str());
  if (!sc.study.empty()) std::printf("  %s\n", sc.study.c_str());

  const ScenarioRun run = run_scenario(sc);
  write_run_outputs(o.out, sc, run);

  long total_iters = 0;
  for (const PathSample& ps : run.path) total_iters += ps.iterations;
  std::printf("dofs: %d (reduced per stage may differ)\n", run.patch.ndof());
  std::printf("increments: %zu, total iterations: %ld\n", run.path.size(), total_iters);
  std::printf("final load factor: %.17g\n", run.lpf_reached);
  if (!run.path.empty()) {
    const PathSample& last = run.path.back();
    std::printf("final energy: %.17g\n", last.energy);
    if (sc.energy_scale > 0.0)
      std::printf("final energy ratio: %.17g\n", last.energy / sc.energy_scale);
    std::printf("final tip: %.17g %.17g %.17g\n", last.tip.x(), last.tip.y(),
                last.tip.z());
    if (sc.twist_probe.enabled)
      std::printf("final probe twist angle: %.17g rad (%.17g turns)\n", last.twist_angle,
                  last.twist_angle / (2.0 * std::numbers::pi));
    if (!last.probes.empty()) {
      std::printf("probe sections (xi, eps, kap1, kap2, kap3, N, curviness):\n");
      for (const SectionState& st : last.probes)
        std::printf("  %.3f  %+.6e %+.6e %+.6e %+.6e %+.6e %.4f\n", st.xi, st.eps,
                    st.kap1, st.kap2, st.kap3, st.N, st.curviness);
    }
  }
  std::printf("outputs: %s/%s_*.csv\n", o.out.c_str(), sc.name.c_str());
  if (!run.converged) {
    std::fprintf(stderr, "run did not converge (reached load factor %.6g)\n",
                 run.lpf_reached);
    return kExitNoConverge;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify: independent numerical oracles
// ---------------------------------------------------------------------------

int cmd_verify(bool omit_follower_stiffness) {
  const std::vector<verify::SuiteResult> results =
      verify::run_suites(omit_follower_stiffness);
  bool all = true;
  std::printf("%-42s %-6s %s\n", "suite", "result", "detail");
  for (const verify::SuiteResult& r : results) {
    std::printf("%-42s %-6s %s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                r.detail.c_str());
    all = all && r.pass;
  }
  if (!all) {
    std::fprintf(stderr, "verification failed\n");
    return kExitVerifyFail;
  }
  std::printf("all suites passed\n");
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepOptions {
  Overrides base;
  std::string axis;
  std::vector<std::string> values;
  std::string metric = "auto";
};

void apply_axis(Scenario& sc, const std::string& axis, const std::string& value) {
  if (axis == "elements")
    sc.n_elements = std::stoi(value);
  else if (axis == "p")
    sc.degree = std::stoi(value);
  else if (axis == "twist_p")
    sc.twist_degree = std::stoi(value);
  else if (axis == "model")
    sc.model = parse_model(value);
  else if (axis == "mapping")
    sc.mapping = parse_mapping(value);
  else if (axis == "continuity")
    sc.twist_continuity = parse_cont(value);
  else if (axis == "increments") {
    for (Stage& st : sc.stages)
      if (!st.arclength) st.increments = std::stoi(value);
  } else {
    throw ConfigError("sweep axis must be one of elements, p, twist_p, model, mapping, "
                      "continuity, increments");
  }
}

std::string resolve_metric(const SweepOptions& so, const Scenario& sc) {
  if (so.metric != "auto") return so.metric;
  if (sc.name.rfind("path", 0) == 0) return "pairgap";
  if (sc.name == "helix") return "helix";
  if (sc.energy_scale > 0.0) return "energy";
  return "tip";
}

// Relative L2 gap between the simultaneous and the staged-ZX loading at the
// shared final load level; the order sensitivity of the formulation. All
// scenario flags apply to both runs of the pair.
double metric_pairgap(const Overrides& base_opts, const std::string& axis,
                      const std::string& value) {
  Overrides oa = base_opts;
  oa.builtin = "path_sim";
  oa.file.clear();
  Overrides ob = base_opts;
  ob.builtin = "path_suczx";
  ob.file.clear();
  Scenario a = make_scenario(oa);
  Scenario b = make_scenario(ob);
  apply_axis(a, axis, value);
  apply_axis(b, axis, value);
  const ScenarioRun ra = run_scenario(a);
  const ScenarioRun rb = run_scenario(b);
  if (!ra.converged || !rb.converged) throw NumericalError("sweep point did not converge");
  return l2_distance(rb.patch, rb.state, ra.patch, ra.state);
}

int cmd_sweep(const SweepOptions& so) {
  if (so.values.empty()) throw ConfigError("sweep needs --values");
  const Scenario proto = make_scenario(so.base);
  const std::string metric = resolve_metric(so, proto);

  std::filesystem::create_directories(so.base.out);
  std::vector<std::vector<double>> rows;
  std::vector<double> errs, hs;
  bool all_converged = true;

  std::printf("sweep %s over %s; metric: %s\n", proto.name.c_str(), so.axis.c_str(),
              metric.c_str());
  std::printf("%-10s %-12s %-8s %-14s %s\n", so.axis.c_str(), "lpf", "iters", "energy",
              "metric");

  for (const std::string& value : so.values) {
    Scenario sc = proto;
    apply_axis(sc, so.axis, value);
    double m = 0.0;
    double lpf = 0.0, energy = 0.0;
    long iters = 0;
    if (metric == "pairgap") {
      m = metric_pairgap(so.base, so.axis, value);
      lpf = 1.0;
    } else {
      const ScenarioRun run = run_scenario(sc);
      all_converged = all_converged && run.converged;
      lpf = run.lpf_reached;
      for (const PathSample& ps : run.path) iters += ps.iterations;
      energy = run.path.empty() ? 0.0 : run.path.back().energy;
      if (metric == "energy") {
        m = sc.energy_scale > 0 ? energy / sc.energy_scale : energy;
      } else if (metric == "helix") {
        Vec3 couple(0, 0, 0);
        for (const Stage& st : sc.stages)
          for (const PointMoment& pm : st.scaled.moments) couple += pm.M;
        const double EI = sc.material.E * sc.section.moment(2, 0);
        const HelixReference ref(couple, EI);
        const double L = 40.0;
        m = l2_distance(run.patch, run.state,
                        [&](double xi) -> Vec3 { return ref.at(L * xi); });
      } else if (metric == "tip") {
        m = run.path.empty() ? 0.0 : run.path.back().tip.norm();
      } else {
        throw ConfigError("unknown metric '" + metric + "'");
      }
    }
    std::printf("%-10s %-12.6g %-8ld %-14.6g %.8e\n", value.c_str(), lpf, iters, energy,
                m);
    const double numeric = std::strtod(value.c_str(), nullptr);
    rows.push_back({numeric, lpf, static_cast<double>(iters), energy, m});
    if (so.axis == "elements" && numeric > 0) {
      hs.push_back(1.0 / numeric);
      errs.push_back(m);
    }
  }

  write_csv(so.base.out + "/sweep_" + proto.name + "_" + so.axis + ".csv",
            {so.axis, "lpf", "iterations", "energy", "metric"}, rows);

  if ((metric == "pairgap" || metric == "helix") && hs.size() >= 3) {
    // least-squares slope of log(err) against log(h)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
      if (errs[i] <= 0) continue;
      const double x = std::log(hs[i]), y = std::log(errs[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
    if (n >= 3) {
      const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      std::printf("convergence slope (log error vs log h): %.3f\n", slope);
    } else {
      std::printf("convergence slope: not fit (errors at machine level)\n");
    }
  }
  return all_converged ? kExitOk : kExitNoConverge;
}

int cmd_list() {
  for (const std::string& n : builtin_names()) {
    const Scenario sc = builtin_scenario(n);
    std::printf("%-12s %s\n", n.c_str(), sc.study.c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvebeam-bench: nonlinear spatial-beam benchmark driver"};
  app.require_subcommand(1);

  Overrides run_opts;
  CLI::App* run = app.add_subcommand("run", "Run one study and write CSV outputs");
  add_scenario_flags(run, run_opts);

  bool omit_follower = false;
  CLI::App* verify =
      app.add_subcommand("verify", "Check the numerical kernels against oracles");
  verify->add_flag("--omit-follower-stiffness", omit_follower,
                   "Drop the couple-load tangent term (demonstrates why the "
                   "consistency check then fails)");

  SweepOptions sweep_opts;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a study across one axis");
  add_scenario_flags(sweep, sweep_opts.base);
  sweep->add_option("--axis", sweep_opts.axis,
                    "elements | p | twist_p | model | mapping | continuity | increments")
      ->required();
  sweep->add_option("--values", sweep_opts.values, "Sweep values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--metric", sweep_opts.metric,
                    "auto | energy | pairgap | helix | tip");

  CLI::App* list = app.add_subcommand("list", "List built-in studies");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (verify->parsed()) return cmd_verify(omit_follower);
    if (sweep->parsed()) return cmd_sweep(sweep_opts);
    if (list->parsed()) return cmd_list();
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNoConverge;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitOk;
}
