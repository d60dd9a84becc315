#pragma once

#include <functional>
#include <vector>

#include "curvebeam/assembly.hpp"

/// Incremental-iterative solution drivers: a Newton-Raphson load/motion
/// stepper with automatic increment halving, and a cylindrical arc-length
/// continuation for paths with limit points.
namespace curvebeam {

struct SolverSettings {
  double tolerance = 1e-8;   ///< relative residual tolerance
  int max_iterations = 40;
  int max_halvings = 12;     ///< net halving depth before giving up (each
                             ///< converged subincrement earns one back)
  int polish_iterations = 1; ///< extra full steps after the tolerance is met
};

struct IncrementRecord {
  double lambda = 0.0;
  int iterations = 0;
};

struct SolveResult {
  bool converged = true;              ///< whole schedule reached
  double lambda_reached = 0.0;
  std::vector<IncrementRecord> increments;  ///< every converged (sub)increment
};

/// Called after every converged increment with the converged state.
using IncrementCallback = std::function<void(
    double lambda, const BeamPatch::State& s, const std::vector<FrameData>& frames)>;

/// Newton-Raphson over an ascending load-factor schedule. The state is taken
/// at lambda_start and advanced in place. Failed increments are halved
/// recursively; on exhaustion the partial result is returned with
/// converged = false (the state holds the last converged increment).
SolveResult solve_newton(const BeamPatch& patch, const Assembler& asmb,
                         const Constraints& con, BeamPatch::State& s,
                         const std::vector<double>& lambdas,
                         const SolverSettings& st, const IncrementCallback& cb = {},
                         double lambda_start = 0.0);

struct ArcLengthSettings {
  double ds = 0.1;            ///< initial radius (reduced displacement norm)
  double lambda_max = 1.0;    ///< stop once the load factor reaches this
  int max_increments = 500;
  int target_iterations = 5;  ///< radius adaptation target
  double ds_min = 1e-10;
  double ds_max = 1e6;
  /// Optional early-stop test, evaluated after each converged increment (and
  /// after the increment callback). Returning true ends the run as converged;
  /// use it for paths where the load factor oscillates and lambda_max never
  /// triggers (e.g. stop on an accumulated rotation).
  std::function<bool(double, const BeamPatch::State&, const std::vector<FrameData>&)>
      stop_when;
};

/// Cylindrical arc-length continuation (load-controlled problems only;
/// prescribed DOF paths are rejected). Stops at lambda_max or when the
/// increment budget / minimal radius is exhausted.
SolveResult solve_arclength(const BeamPatch& patch, const Assembler& asmb,
                            const Constraints& con, BeamPatch::State& s,
                            const ArcLengthSettings& as, const SolverSettings& st,
                            const IncrementCallback& cb = {});

}  // namespace curvebeam
