#include "curvebeam/solver.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <vector>

namespace curvebeam {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using SpLU = Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>;

/// One Newton increment at fixed load factor. Returns the iteration count or
/// -1 on nonconvergence. Throws nothing: numerical failures count as
/// nonconvergence (the caller restores the state).
int newton_increment(const BeamPatch& patch, const Assembler& asmb,
                     const Constraints& con, BeamPatch::State& s,
                     std::vector<FrameData>& frames, double lambda,
                     const SolverSettings& st) {
  try {
    con.apply_prescribed(s.q, lambda);
    patch.update_state(s, frames);

    SpMat K;
    VecX F_red, Qs_red, Qc_red;
    double r0 = -1.0;
    int polish_left = st.polish_iterations;

    for (int it = 0; it <= st.max_iterations; ++it) {
      asmb.assemble_reduced(s, frames, lambda, con, K, F_red, Qs_red, Qc_red);
      const VecX r = Qc_red + lambda * Qs_red - F_red;
      const double rnorm = r.norm();
      const double load_scale = (Qc_red + lambda * Qs_red).norm();
      if (r0 < 0.0) r0 = rnorm;
      const double scale = std::max(r0, load_scale);

      const bool met = scale == 0.0 || rnorm <= st.tolerance * scale;
      if (met && polish_left == 0) return it;
      if (it == st.max_iterations) return met ? it : -1;
      if (met) --polish_left;

      SpLU lu(K);
      if (lu.info() != Eigen::Success) return -1;
      const VecX dq_red = lu.solve(r);
      if (lu.info() != Eigen::Success || !dq_red.allFinite()) return -1;
      s.q += con.expand(dq_red);
      patch.update_state(s, frames);

      // Machine stagnation: the correction is at roundoff level, so the
      // residual sits on its floating-point floor (which can exceed the
      // relative tolerance for very stiff or very fine systems: the floor
      // grows with stiffness-scaled cancellation while the load scale does
      // not). The state cannot improve further; accept it as converged when
      // the residual is still orders of magnitude below the load scale.
      if (dq_red.norm() <= 1e-12 * (1.0 + s.q.norm()) && rnorm < 1e-5 * scale)
        return it + 1;
    }
    return -1;
  } catch (const NumericalError&) {
    return -1;
  }
}

}  // namespace

SolveResult solve_newton(const BeamPatch& patch, const Assembler& asmb,
                         const Constraints& con, BeamPatch::State& s,
                         const std::vector<double>& lambdas, const SolverSettings& st,
                         const IncrementCallback& cb, double lambda_start) {
  SolveResult res;
  res.lambda_reached = lambda_start;
  std::vector<FrameData> frames;

  std::vector<double> targets(lambdas.rbegin(), lambdas.rend());
  int halvings = 0;
  double lam_done = lambda_start;

  while (!targets.empty()) {
    const double lt = targets.back();
    BeamPatch::State saved = s;
    const int iters = newton_increment(patch, asmb, con, s, frames, lt, st);
    if (iters >= 0) {
      targets.pop_back();
      lam_done = lt;
      patch.rebase_reference(s, frames);
      res.increments.push_back({lt, iters});
      res.lambda_reached = lt;
      if (cb) cb(lt, s, frames);
      if (halvings > 0) --halvings;  // successes earn the budget back
    } else {
      s = std::move(saved);
      patch.update_state(s, frames);  // restore cached strains/forces
      if (++halvings > st.max_halvings ||
          std::abs(lt - lam_done) < 1e-12 * std::max(1.0, std::abs(lt))) {
        res.converged = false;
        return res;
      }
      targets.push_back(0.5 * (lam_done + lt));
    }
  }
  return res;
}

SolveResult solve_arclength(const BeamPatch& patch, const Assembler& asmb,
                            const Constraints& con, BeamPatch::State& s,
                            const ArcLengthSettings& as, const SolverSettings& st,
                            const IncrementCallback& cb) {
  if (!con.prescribed().empty())
    throw ConfigError("solve_arclength: prescribed DOF paths are not supported");

  SolveResult res;
  std::vector<FrameData> frames;
  patch.update_state(s, frames);

  double lambda = 0.0, ds = as.ds;
  VecX dq_prev;  // previous converged increment (reduced), for orientation

  SpMat K;
  VecX F_red, Qs_red, Qc_red;

  for (int inc = 0; inc < as.max_increments; ++inc) {
    BeamPatch::State saved = s;
    const double lambda_saved = lambda;

    bool ok = false;
    int iters = 0;
    VecX dq_acc;
    try {
      asmb.assemble_reduced(s, frames, lambda, con, K, F_red, Qs_red, Qc_red);
      SpLU lu(K);
      if (lu.info() != Eigen::Success) throw NumericalError("singular tangent");
      VecX dqt = lu.solve(Qs_red);
      if (lu.info() != Eigen::Success || !dqt.allFinite())
        throw NumericalError("tangent solve failed");

      double dl = ds / dqt.norm();
      if (dq_prev.size() > 0 && dqt.dot(dq_prev) < 0.0) dl = -dl;
      dq_acc = dl * dqt;
      lambda += dl;
      s.q += con.expand(dq_acc);
      patch.update_state(s, frames);

      double r0 = -1.0;
      int polish_left = st.polish_iterations;
      for (int it = 1; it <= st.max_iterations; ++it) {
        asmb.assemble_reduced(s, frames, lambda, con, K, F_red, Qs_red, Qc_red);
        const VecX r = Qc_red + lambda * Qs_red - F_red;
        const double rnorm = r.norm();
        if (r0 < 0.0) r0 = rnorm;
        const double scale =
            std::max(r0, (Qc_red + lambda * Qs_red).norm());
        const bool met = scale == 0.0 || rnorm <= st.tolerance * scale;
        if (met && (polish_left == 0 || it == st.max_iterations)) {
          ok = true;
          iters = it;
          break;
        }
        if (met) --polish_left;

        SpLU lui(K);
        if (lui.info() != Eigen::Success) throw NumericalError("singular tangent");
        const VecX dqr = lui.solve(r);
        const VecX dqt_i = lui.solve(Qs_red);
        if (!dqr.allFinite() || !dqt_i.allFinite())
          throw NumericalError("corrector solve failed");

        // cylindrical constraint |dq_acc + dqr + eta dqt|^2 = ds^2
        const double a = dqt_i.squaredNorm();
        const VecX base = dq_acc + dqr;
        const double b = 2.0 * dqt_i.dot(base);
        const double c = base.squaredNorm() - ds * ds;
        const double disc = b * b - 4.0 * a * c;
        if (disc < 0.0) throw NumericalError("arc-length roots complex");
        const double sq = std::sqrt(disc);
        const double e1 = (-b + sq) / (2.0 * a);
        const double e2 = (-b - sq) / (2.0 * a);
        // keep moving forward along the current increment direction
        const double p1 = dq_acc.dot(base + e1 * dqt_i);
        const double p2 = dq_acc.dot(base + e2 * dqt_i);
        const double eta = (p1 >= p2) ? e1 : e2;

        const VecX step = dqr + eta * dqt_i;
        dq_acc += step;
        lambda += eta;
        s.q += con.expand(step);
        patch.update_state(s, frames);

        // machine stagnation: see newton_increment
        if (step.norm() <= 1e-12 * (1.0 + s.q.norm()) && rnorm < 1e-5 * scale) {
          ok = true;
          iters = it;
          break;
        }
      }
    } catch (const NumericalError&) {
      ok = false;
    }

    if (!ok) {
      s = std::move(saved);
      lambda = lambda_saved;
      patch.update_state(s, frames);
      ds *= 0.5;
      if (ds < as.ds_min) {
        res.converged = false;
        res.lambda_reached = lambda;
        return res;
      }
      continue;
    }

    patch.rebase_reference(s, frames);
    res.increments.push_back({lambda, iters});
    res.lambda_reached = lambda;
    dq_prev = dq_acc;
    if (cb) cb(lambda, s, frames);
    if (lambda >= as.lambda_max) return res;
    if (as.stop_when && as.stop_when(lambda, s, frames)) return res;

    double fac = std::sqrt(static_cast<double>(as.target_iterations) /
                           std::max(1, iters));
    fac = std::min(2.0, std::max(0.5, fac));
    ds = std::min(as.ds_max, std::max(as.ds_min, ds * fac));
  }
  res.converged = false;
  return res;
}

}  // namespace curvebeam
