#pragma once

#include <Eigen/SparseCore>
#include <functional>
#include <vector>

#include "curvebeam/element.hpp"
#include "curvebeam/model.hpp"

/// Global assembly: concentrated loads, DOF constraints with a reduction map
/// (fixed / prescribed / tied DOFs), and the tangent system in dense
/// (full-size) or sparse (reduced) form.
namespace curvebeam {

/// Dead concentrated force at an axis point; scaled by the load factor.
struct PointForce {
  double xi = 0.0;
  Vec3 F = Vec3::Zero();
};

/// Concentrated couple of fixed spatial direction, scaled by the load factor
/// and realized on the beam kinematics each iterate (its working follows the
/// rotation of the section frame, which makes it configuration-dependent).
struct PointMoment {
  double xi = 0.0;
  Vec3 M = Vec3::Zero();
};

struct LoadSet {
  std::vector<PointForce> forces;
  std::vector<PointMoment> moments;
};

/// DOF constraint bookkeeping. Call finalize() once after declaring all
/// constraints; afterwards the maps are immutable.
class Constraints {
 public:
  explicit Constraints(int ndof);

  void fix(int dof);
  /// Absolute DOF value as a function of the load factor.
  void prescribe(int dof, std::function<double(double)> value);
  /// The follower DOF copies factor times every increment of the leader DOF
  /// (factor -1 expresses antisymmetric pairs).
  void tie(int follower, int leader, double factor = 1.0);

  void finalize();
  bool finalized() const { return finalized_; }

  int ndof() const { return static_cast<int>(reduced_.size()); }
  int n_reduced() const { return n_reduced_; }
  /// Reduced index of the DOF's leader; -1 for fixed/prescribed DOFs.
  int reduced_index(int dof) const { return reduced_[dof]; }

  const std::vector<std::pair<int, std::function<double(double)>>>& prescribed()
      const {
    return prescribed_;
  }

  /// Apply the prescribed values for the given load factor to a DOF vector.
  void apply_prescribed(VecX& q, double lambda) const;

  /// Gather a full-size vector into the reduced space (rows of followers are
  /// added into their leaders; fixed/prescribed rows are dropped).
  VecX reduce(const VecX& full) const;
  /// Scatter a reduced increment to full size (followers copy leaders,
  /// fixed/prescribed entries stay zero).
  VecX expand(const VecX& red) const;

  /// Tie factor of a DOF relative to its leader (1 for untied DOFs).
  double tie_factor(int dof) const { return factor_[dof]; }

 private:
  std::vector<int> leader_;   ///< leader DOF of each DOF (itself if untied)
  std::vector<double> factor_;
  std::vector<int> reduced_;  ///< reduced index or -1
  std::vector<bool> eliminated_;
  std::vector<std::pair<int, std::function<double(double)>>> prescribed_;
  int n_reduced_ = 0;
  bool finalized_ = false;
};

/// Assembles tangent, internal forces and external loads for a patch.
/// External loads are Q(q, lambda) = Q_const(q) + lambda * Q_scaled(q); the
/// constant part carries loads held from an earlier loading stage.
class Assembler {
 public:
  Assembler(const BeamPatch& patch, LoadSet scaled, AssemblyOptions opt,
            LoadSet constant = {});

  const AssemblyOptions& options() const { return opt_; }
  const BeamPatch& patch() const { return patch_; }

  /// External load parts for the current configuration.
  void external(const BeamPatch::State& s, VecX& Q_scaled, VecX& Q_const) const;

  /// Full-size dense tangent, internal forces, and external load parts.
  void assemble_dense(const BeamPatch::State& s, const std::vector<FrameData>& frames,
                      double lambda, MatX& K, VecX& F_int, VecX& Q_scaled,
                      VecX& Q_const) const;

  /// Reduced sparse tangent + reduced internal forces + reduced load parts.
  void assemble_reduced(const BeamPatch::State& s,
                        const std::vector<FrameData>& frames, double lambda,
                        const Constraints& con, Eigen::SparseMatrix<double>& K,
                        VecX& F_red, VecX& Qs_red, VecX& Qc_red) const;

 private:
  struct MomentData {
    PointMoment load;
    bool scaled = true;
    int element = 0;
    ElementDofs dofs;
    MatX disp_ders;   ///< 2 x (p+1) rational rows at the load point
    VecX twist_vals;  ///< twist basis values at the load point
  };
  struct ForceData {
    PointForce load;
    bool scaled = true;
    int element = 0;
    ElementDofs dofs;
    VecX disp_vals;  ///< rational basis values at the load point
  };

  void add_moment(const PointMoment& pm, bool scaled);
  void add_force(const PointForce& pf, bool scaled);

  void element_loop(const BeamPatch::State& s, const std::vector<FrameData>& frames,
                    std::vector<MatX>& Ke, std::vector<VecX>& Fe) const;
  /// Loads + load stiffness on the element-local dense blocks of the loaded
  /// elements.
  struct LoadBlock {
    const ElementDofs* dofs;
    bool scaled = true;
    MatX K;  ///< realization derivative at unit load factor
    VecX Q;  ///< unit external load
  };
  std::vector<LoadBlock> load_blocks(const BeamPatch::State& s) const;

  const BeamPatch& patch_;
  AssemblyOptions opt_;
  std::vector<MomentData> moments_;
  std::vector<ForceData> forces_;
  int n_threads_ = 1;
};

}  // namespace curvebeam
