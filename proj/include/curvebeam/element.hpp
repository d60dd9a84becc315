#pragma once

#include "curvebeam/common.hpp"
#include "curvebeam/geometry.hpp"
#include "curvebeam/model.hpp"

/// Element-level operators: kinematic and strain matrices at quadrature
/// points, geometric tangent kernels, constitutive sensitivity, and the
/// element stiffness/force integrals.
namespace curvebeam {

using Mat48 = Eigen::Matrix<double, 4, 8>;
using Mat77 = Eigen::Matrix<double, 7, 7>;

/// Local DOF layout of one element: translations of the supported control
/// points (3 each) first, then the supported twist coefficients.
struct ElementDofs {
  std::vector<int> global;  ///< local -> global DOF indices
  int n_disp = 0;           ///< number of local translation DOFs
};

ElementDofs element_dofs(const BeamPatch& patch, int element);

/// Kinematic stack operator: maps local DOF increments to
/// (v,1 | v,11 | omega | omega,1) -- an 8 x nloc matrix built from the
/// precomputed basis derivative rows of a quadrature point.
MatX kinematic_operator(const QuadPoint& qp, const ElementDofs& dofs);

/// Strain-rate matrix: rows are the derivatives of the configuration
/// measures [g11/2, K1, Kt2, Kt3] with respect to the kinematic stack.
Mat48 strain_matrix(const FrameData& fd);

/// Exact geometric tangent kernel on the reduced stack (v,1 | v,11 | omega):
/// the derivative of f^T * strain_matrix under the pointwise frame update,
/// holding f fixed. Not symmetric.
Mat77 geometric_kernel_consistent(const Vec4& f, const FrameData& fd);

/// Symmetrized geometric kernel (equilibrium-limit rearrangement of the
/// consistent one). Symmetric by construction.
Mat77 geometric_kernel_symmetric(const Vec4& f, const FrameData& fd);

/// Derivative of the constitutive matrix with respect to the configuration
/// measures, contracted with the strain vector: S(:,k) = (dD/dm_k) e.
/// Central finite differences in the scalar arguments of the law.
Mat4 constitutive_sensitivity(const BeamPatch& patch, const FrameData& fd,
                              const Vec4& e);

/// Assembly switches. The defaults give the exact consistent tangent; the
/// symmetric kernel replaces the consistent one when selected.
struct AssemblyOptions {
  bool symmetric_geometric_kernel = false;
  bool include_measure_term = true;             ///< d(sqrt g) part of the internal forces
  bool include_constitutive_sensitivity = true; ///< dD/dm part of the material tangent
  bool include_load_stiffness = true;           ///< follower-couple tangent
  int n_threads = 0;  ///< 0: CURVEBEAM_THREADS environment variable (default 1)
};

/// Tangent stiffness and internal force vector of one element for the given
/// current frames. K is nloc x nloc, F has length nloc.
void element_system(const BeamPatch& patch, int element, const BeamPatch::State& s,
                    const std::vector<FrameData>& frames, const AssemblyOptions& opt,
                    MatX& K, VecX& F);

}  // namespace curvebeam
