#include "curvebeam/assembly.hpp"

#include <cstdlib>
#include <exception>
#include <thread>

namespace curvebeam {

Constraints::Constraints(int ndof)
    : leader_(ndof), factor_(ndof, 1.0), reduced_(ndof, -1), eliminated_(ndof, false) {
  for (int i = 0; i < ndof; ++i) leader_[i] = i;
}

void Constraints::fix(int dof) {
  if (finalized_) throw ConfigError("Constraints: already finalized");
  if (dof < 0 || dof >= ndof()) throw ConfigError("Constraints: DOF out of range");
  eliminated_[dof] = true;
}

void Constraints::prescribe(int dof, std::function<double(double)> value) {
  fix(dof);
  prescribed_.emplace_back(dof, std::move(value));
}

void Constraints::tie(int follower, int leader, double factor) {
  if (finalized_) throw ConfigError("Constraints: already finalized");
  if (follower < 0 || follower >= ndof() || leader < 0 || leader >= ndof())
    throw ConfigError("Constraints: DOF out of range");
  if (follower == leader) throw ConfigError("Constraints: DOF tied to itself");
  if (factor == 0.0) throw ConfigError("Constraints: zero tie factor (use fix)");
  leader_[follower] = leader;
  factor_[follower] = factor;
}

void Constraints::finalize() {
  if (finalized_) return;
  // resolve tie chains and reject cycles
  for (int i = 0; i < ndof(); ++i) {
    int l = leader_[i], hops = 0;
    double fac = factor_[i];
    while (leader_[l] != l) {
      fac *= factor_[l];
      l = leader_[l];
      if (++hops > ndof()) throw ConfigError("Constraints: cyclic ties");
    }
    leader_[i] = l;
    factor_[i] = (l == i) ? 1.0 : fac;
    if (leader_[i] != i && eliminated_[i])
      throw ConfigError("Constraints: a tied DOF cannot also be fixed/prescribed");
  }
  n_reduced_ = 0;
  for (int i = 0; i < ndof(); ++i)
    if (leader_[i] == i && !eliminated_[i]) reduced_[i] = n_reduced_++;
  for (int i = 0; i < ndof(); ++i) {
    if (leader_[i] != i) {
      if (eliminated_[leader_[i]])
        throw ConfigError("Constraints: DOF tied to a fixed/prescribed leader");
      reduced_[i] = reduced_[leader_[i]];
    }
  }
  finalized_ = true;
}

void Constraints::apply_prescribed(VecX& q, double lambda) const {
  for (const auto& [dof, fn] : prescribed_) q[dof] = fn(lambda);
}

VecX Constraints::reduce(const VecX& full) const {
  VecX r = VecX::Zero(n_reduced_);
  for (int i = 0; i < ndof(); ++i)
    if (reduced_[i] >= 0) r[reduced_[i]] += factor_[i] * full[i];
  return r;
}

VecX Constraints::expand(const VecX& red) const {
  VecX f = VecX::Zero(ndof());
  for (int i = 0; i < ndof(); ++i)
    if (reduced_[i] >= 0) f[i] = factor_[i] * red[reduced_[i]];
  return f;
}

namespace {

Mat3 skew(const Vec3& m) {
  Mat3 S;
  S << 0.0, -m[2], m[1], m[2], 0.0, -m[0], -m[1], m[0], 0.0;
  return S;
}

int env_threads() {
  if (const char* env = std::getenv("CURVEBEAM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

}  // namespace

Assembler::Assembler(const BeamPatch& patch, LoadSet scaled, AssemblyOptions opt,
                     LoadSet constant)
    : patch_(patch), opt_(opt) {
  n_threads_ = opt_.n_threads > 0 ? opt_.n_threads : env_threads();
  for (const PointMoment& pm : scaled.moments) add_moment(pm, true);
  for (const PointMoment& pm : constant.moments) add_moment(pm, false);
  for (const PointForce& pf : scaled.forces) add_force(pf, true);
  for (const PointForce& pf : constant.forces) add_force(pf, false);
}

void Assembler::add_moment(const PointMoment& pm, bool scaled) {
  MomentData md;
  md.load = pm;
  md.scaled = scaled;
  md.element = patch_.element_of(pm.xi);
  md.dofs = element_dofs(patch_, md.element);
  md.disp_ders = rational_basis_ders(patch_.axis(), pm.xi, 1);
  md.twist_vals = patch_.twist_basis().basis_ders(pm.xi, 0).row(0).transpose();
  moments_.push_back(std::move(md));
}

void Assembler::add_force(const PointForce& pf, bool scaled) {
  ForceData fd;
  fd.load = pf;
  fd.scaled = scaled;
  fd.element = patch_.element_of(pf.xi);
  fd.dofs = element_dofs(patch_, fd.element);
  fd.disp_vals = rational_basis_ders(patch_.axis(), pf.xi, 0).row(0).transpose();
  forces_.push_back(std::move(fd));
}

std::vector<Assembler::LoadBlock> Assembler::load_blocks(
    const BeamPatch::State& s) const {
  std::vector<LoadBlock> blocks;
  blocks.reserve(moments_.size() + forces_.size());

  const int p = patch_.axis().basis.degree();

  for (const ForceData& fd : forces_) {
    LoadBlock b;
    b.dofs = &fd.dofs;
    b.scaled = fd.scaled;
    const int nloc = static_cast<int>(fd.dofs.global.size());
    b.K = MatX::Zero(nloc, nloc);
    b.Q = VecX::Zero(nloc);
    for (int j = 0; j <= p; ++j)
      b.Q.segment<3>(3 * j) = fd.disp_vals[j] * fd.load.F;
    blocks.push_back(std::move(b));
  }

  for (const MomentData& md : moments_) {
    LoadBlock b;
    b.dofs = &md.dofs;
    b.scaled = md.scaled;
    const int nloc = static_cast<int>(md.dofs.global.size());
    b.K = MatX::Zero(nloc, nloc);
    b.Q = VecX::Zero(nloc);

    Vec3 r, r1, r11;
    patch_.curve_at(s, md.load.xi, r, r1, r11);
    const double g = r1.squaredNorm();
    if (g <= 0.0) throw NumericalError("Assembler: degenerate tangent at a load point");
    const double sg = std::sqrt(g);
    const Vec3 t = r1 / sg;
    const Vec3& m = md.load.M;

    // couple realization: (m x t)/sqrt(g) on v,1 and (m . t) on the twist
    const Vec3 qv = m.cross(t) / sg;
    const double qt = m.dot(t);
    for (int j = 0; j <= p; ++j)
      b.Q.segment<3>(3 * j) = md.disp_ders(1, j) * qv;
    for (int j = md.dofs.n_disp; j < nloc; ++j)
      b.Q[j] = md.twist_vals[j - md.dofs.n_disp] * qt;

    // exact derivative of the realization (follower-couple stiffness):
    const Mat3 A_tt =
        (skew(m) * (Mat3::Identity() - t * t.transpose()) - m.cross(t) * t.transpose()) /
        g;
    const Eigen::RowVector3d A_wt = (m - m.dot(t) * t).transpose() / sg;
    for (int ju = 0; ju <= p; ++ju) {
      for (int jw = 0; jw <= p; ++jw)
        b.K.block<3, 3>(3 * ju, 3 * jw) =
            md.disp_ders(1, ju) * md.disp_ders(1, jw) * A_tt;
      // column part only: the realization depends on v,1 alone
    }
    for (int ju = md.dofs.n_disp; ju < nloc; ++ju)
      for (int jw = 0; jw <= p; ++jw)
        b.K.block<1, 3>(ju, 3 * jw) =
            md.twist_vals[ju - md.dofs.n_disp] * md.disp_ders(1, jw) * A_wt;

    blocks.push_back(std::move(b));
  }
  return blocks;
}

void Assembler::external(const BeamPatch::State& s, VecX& Q_scaled,
                         VecX& Q_const) const {
  Q_scaled = VecX::Zero(patch_.ndof());
  Q_const = VecX::Zero(patch_.ndof());
  for (const LoadBlock& b : load_blocks(s)) {
    const auto& gd = b.dofs->global;
    VecX& Q = b.scaled ? Q_scaled : Q_const;
    for (std::size_t a = 0; a < gd.size(); ++a) Q[gd[a]] += b.Q[a];
  }
}

void Assembler::element_loop(const BeamPatch::State& s,
                             const std::vector<FrameData>& frames,
                             std::vector<MatX>& Ke, std::vector<VecX>& Fe) const {
  const int n_el = patch_.n_elements();
  Ke.resize(n_el);
  Fe.resize(n_el);

  const int nt = std::min(n_threads_, n_el);
  if (nt <= 1) {
    for (int e = 0; e < n_el; ++e)
      element_system(patch_, e, s, frames, opt_, Ke[e], Fe[e]);
    return;
  }

  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(nt);
  for (int w = 0; w < nt; ++w) {
    workers.emplace_back([&, w]() {
      try {
        for (int e = w; e < n_el; e += nt)
          element_system(patch_, e, s, frames, opt_, Ke[e], Fe[e]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
}

void Assembler::assemble_dense(const BeamPatch::State& s,
                               const std::vector<FrameData>& frames, double lambda,
                               MatX& K, VecX& F_int, VecX& Q_scaled,
                               VecX& Q_const) const {
  const int n = patch_.ndof();
  K = MatX::Zero(n, n);
  F_int = VecX::Zero(n);
  Q_scaled = VecX::Zero(n);
  Q_const = VecX::Zero(n);

  std::vector<MatX> Ke;
  std::vector<VecX> Fe;
  element_loop(s, frames, Ke, Fe);
  for (int e = 0; e < patch_.n_elements(); ++e) {
    const auto& gd = element_dofs(patch_, e).global;
    for (std::size_t a = 0; a < gd.size(); ++a) {
      F_int[gd[a]] += Fe[e][a];
      for (std::size_t b = 0; b < gd.size(); ++b) K(gd[a], gd[b]) += Ke[e](a, b);
    }
  }

  for (const LoadBlock& blk : load_blocks(s)) {
    const auto& gd = blk.dofs->global;
    const double kscale = blk.scaled ? lambda : 1.0;
    for (std::size_t a = 0; a < gd.size(); ++a) {
      (blk.scaled ? Q_scaled : Q_const)[gd[a]] += blk.Q[a];
      if (opt_.include_load_stiffness)
        for (std::size_t b = 0; b < gd.size(); ++b)
          K(gd[a], gd[b]) -= kscale * blk.K(a, b);
    }
  }
}

void Assembler::assemble_reduced(const BeamPatch::State& s,
                                 const std::vector<FrameData>& frames, double lambda,
                                 const Constraints& con,
                                 Eigen::SparseMatrix<double>& K, VecX& F_red,
                                 VecX& Qs_red, VecX& Qc_red) const {
  if (!con.finalized()) throw ConfigError("Assembler: constraints not finalized");
  const int nred = con.n_reduced();
  VecX F_full = VecX::Zero(patch_.ndof());
  VecX Qs_full = VecX::Zero(patch_.ndof());
  VecX Qc_full = VecX::Zero(patch_.ndof());

  std::vector<MatX> Ke;
  std::vector<VecX> Fe;
  element_loop(s, frames, Ke, Fe);

  std::vector<Eigen::Triplet<double>> trips;
  std::size_t nnz_guess = 0;
  for (const auto& k : Ke) nnz_guess += k.size();
  trips.reserve(nnz_guess + 64 * (moments_.size() + forces_.size()));

  for (int e = 0; e < patch_.n_elements(); ++e) {
    const auto& gd = element_dofs(patch_, e).global;
    for (std::size_t a = 0; a < gd.size(); ++a) {
      F_full[gd[a]] += Fe[e][a];
      const int ia = con.reduced_index(gd[a]);
      if (ia < 0) continue;
      const double fa = con.tie_factor(gd[a]);
      for (std::size_t b = 0; b < gd.size(); ++b) {
        const int ib = con.reduced_index(gd[b]);
        if (ib >= 0)
          trips.emplace_back(ia, ib, fa * con.tie_factor(gd[b]) * Ke[e](a, b));
      }
    }
  }

  for (const LoadBlock& blk : load_blocks(s)) {
    const auto& gd = blk.dofs->global;
    const double kscale = blk.scaled ? lambda : 1.0;
    for (std::size_t a = 0; a < gd.size(); ++a) {
      (blk.scaled ? Qs_full : Qc_full)[gd[a]] += blk.Q[a];
      const int ia = con.reduced_index(gd[a]);
      if (ia < 0 || !opt_.include_load_stiffness) continue;
      const double fa = con.tie_factor(gd[a]);
      for (std::size_t b = 0; b < gd.size(); ++b) {
        const int ib = con.reduced_index(gd[b]);
        if (ib >= 0)
          trips.emplace_back(ia, ib,
                             -kscale * fa * con.tie_factor(gd[b]) * blk.K(a, b));
      }
    }
  }

  K.resize(nred, nred);
  K.setFromTriplets(trips.begin(), trips.end());
  F_red = con.reduce(F_full);
  Qs_red = con.reduce(Qs_full);
  Qc_red = con.reduce(Qc_full);
}

}  // namespace curvebeam
