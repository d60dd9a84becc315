#pragma once

#include <string>
#include <vector>

#include "curvebeam/common.hpp"
#include "curvebeam/geometry.hpp"
#include "curvebeam/section.hpp"
#include "curvebeam/spline.hpp"

/// The discrete beam patch: displacement control net + twist coefficient
/// field, quadrature layout, frame-mapping policy, and the strain/stress
/// state at the quadrature points.
namespace curvebeam {

/// How section frames follow the deforming tangent field.
enum class FrameMapping {
  SR,      ///< pointwise smallest rotation from a reference frame field
  NSRISR   ///< smallest rotation to the element-end tangents first, then
           ///< in-element smallest rotation from the start node with a
           ///< linearly interpolated closure angle (C0 frames)
};

/// What the frame transport is measured against.
enum class ReferencePolicy {
  Total,       ///< always the initial configuration (one jump)
  Incremental  ///< the last converged configuration
};

FrameMapping parse_mapping(const std::string& s);
ReferencePolicy parse_reference(const std::string& s);
std::string mapping_name(FrameMapping m);
std::string reference_name(ReferencePolicy p);

/// Immutable per-quadrature-point data prepared at setup.
struct QuadPoint {
  int element = 0;
  double xi = 0.0, weight = 0.0;
  MatX disp_ders;   ///< 3 x (p+1): rational basis values/derivatives
  MatX twist_ders;  ///< 2 x (pt+1): twist basis values/derivatives
  FrameData init;   ///< initial geometry at this point
  Vec4 meas0;       ///< initial configuration measures
  Mat4 D_init;      ///< constitutive matrix of the initial configuration
};

/// Mutable per-quadrature-point state.
struct QuadPointState {
  Vec4 e_acc = Vec4::Zero();  ///< strains of the current configuration
  Vec4 f = Vec4::Zero();      ///< conjugate section forces
  // reference frame field for the pointwise smallest-rotation transport:
  Vec3 t_ref = Vec3::Zero(), t_ref_1 = Vec3::Zero();
  Vec3 g2_ref = Vec3::Zero(), g2_ref_1 = Vec3::Zero();
  Vec3 g3_ref = Vec3::Zero(), g3_ref_1 = Vec3::Zero();
};

/// Mutable per-breakpoint-node state (anchors of the nodal mapping).
struct NodeState {
  Vec3 t_ref = Vec3::Zero(), g2_ref = Vec3::Zero(), g3_ref = Vec3::Zero();
};

/// Element connectivity and quadrature range.
struct ElementInfo {
  double xi_a = 0.0, xi_b = 0.0;
  int disp_first = 0;   ///< first displacement control point with support
  int twist_first = 0;  ///< first twist coefficient with support
  int qp_begin = 0, qp_end = 0;  ///< [begin,end) into the patch quadrature list
};

class BeamPatch {
 public:
  /// twist_basis must share the breakpoints of the axis basis.
  BeamPatch(NurbsCurve axis, KnotVector twist_basis,
            const InitialFrameProvider& init_frames, CrossSection sec, Material mat,
            ConstitutiveModel model, FrameMapping mapping, ReferencePolicy reference);

  int n_cp() const { return static_cast<int>(axis_.points.rows()); }
  int n_twist() const { return twist_basis_.num_basis(); }
  int ndof() const { return 3 * n_cp() + n_twist(); }
  int n_elements() const { return static_cast<int>(elements_.size()); }
  int n_qp() const { return static_cast<int>(qps_.size()); }

  static int translation_dof(int cp, int comp) { return 3 * cp + comp; }
  int twist_dof(int coeff) const { return 3 * n_cp() + coeff; }

  const NurbsCurve& axis() const { return axis_; }
  const KnotVector& twist_basis() const { return twist_basis_; }
  const CrossSection& section() const { return section_; }
  const Material& material() const { return material_; }
  ConstitutiveModel model() const { return model_; }
  FrameMapping mapping() const { return mapping_; }
  ReferencePolicy reference() const { return reference_; }
  const std::vector<ElementInfo>& elements() const { return elements_; }
  const std::vector<QuadPoint>& quad_points() const { return qps_; }
  const std::vector<double>& node_xis() const { return node_xis_; }

  /// Complete mutable state. q stacks all control-point translations first,
  /// then the twist coefficients, all measured from the initial configuration.
  /// Strains and forces are pure functions of q and the transport references;
  /// the references change only in rebase_reference().
  struct State {
    VecX q;
    VecX twist_ref;  ///< twist coefficients of the reference configuration
    std::vector<QuadPointState> qps;
    std::vector<NodeState> nodes;
  };

  State initial_state() const;

  /// Current frames at the quadrature points for s.q. Pure function; resizes
  /// 'frames' to n_qp(). Throws NumericalError on degenerate configurations
  /// (antipodal transport, vanishing tangent).
  void evaluate_frames(const State& s, std::vector<FrameData>& frames) const;

  /// evaluate_frames + refresh the stored strains and section forces:
  /// e = measures(q) - measures0, f = D(current) e.
  void update_state(State& s, std::vector<FrameData>& frames) const;

  /// Make the current configuration the new transport reference (incremental
  /// policy, called after a converged increment). 'frames' must belong to s.q.
  void rebase_reference(State& s, const std::vector<FrameData>& frames) const;

  /// Constitutive matrix for the given current frame data at a point.
  Mat4 constitutive_at(const FrameData& fd) const;

  /// Axis curve with the control points displaced by s.q.
  NurbsCurve displaced_axis(const State& s) const;

  /// Index of the element (breakpoint interval) containing xi.
  int element_of(double xi) const;

  /// Current curve derivatives at an arbitrary parameter (span lookup each
  /// call; prefer the precomputed quadrature data in hot loops).
  void curve_at(const State& s, double xi, Vec3& r, Vec3& r1, Vec3& r11) const;

  /// Twist field relative to the reference coefficients from precomputed
  /// basis rows (value and parametric derivative).
  void twist_rel(const State& s, const MatX& twist_ders, int first, double& th,
                 double& th_1) const;

 private:
  void eval_curve_at(const State& s, const MatX& ders, int first, Vec3& r, Vec3& r1,
                     Vec3& r11) const;
  Vec3 node_tangent(const State& s, int node) const;
  double node_twist_rel(const State& s, int node) const;

  NurbsCurve axis_;
  KnotVector twist_basis_;
  CrossSection section_;
  Material material_;
  ConstitutiveModel model_;
  FrameMapping mapping_;
  ReferencePolicy reference_;

  std::vector<ElementInfo> elements_;
  std::vector<QuadPoint> qps_;
  std::vector<double> node_xis_;
  std::vector<MatX> node_disp_ders_;   ///< 2 x (p+1) rational rows at each node
  std::vector<int> node_disp_first_;
  std::vector<VecX> node_twist_vals_;  ///< (pt+1) twist basis values at each node
  std::vector<int> node_twist_first_;
  std::vector<NodeState> node_init_;   ///< initial nodal frames
};

}  // namespace curvebeam
