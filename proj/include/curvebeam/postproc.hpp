#pragma once

#include <functional>
#include <string>
#include <vector>

#include "curvebeam/model.hpp"

/// Result evaluation: strain energy, normalized L2 solution distances,
/// physical section-state recovery, an analytic helix reference, and CSV
/// output with full round-trip precision.
namespace curvebeam {

/// Strain energy of the current state, integrated with the material matrix
/// and arc measure of the initial configuration.
double internal_energy(const BeamPatch& patch, const BeamPatch::State& s);

/// Physical section state at a quadrature point. Parametric strains are
/// converted with the initial metric (strains per initial arc length);
/// section forces are recovered with the exact constitutive law regardless
/// of the model the equilibrium was computed with.
struct SectionState {
  double xi = 0.0;
  double eps = 0.0;            ///< axial strain
  double kap1 = 0.0;           ///< torsional curvature change
  double kap2 = 0.0, kap3 = 0.0;  ///< bending curvature changes
  double N = 0.0;              ///< axial force
  double M1 = 0.0;             ///< torsion moment
  double M2 = 0.0, M3 = 0.0;   ///< bending moments
  double curviness = 0.0;      ///< current |curvature| * section dimension
};

SectionState recover_section_state(const BeamPatch& patch, const BeamPatch::State& s,
                                   const std::vector<FrameData>& frames, int qp);

/// Index of the quadrature point closest to xi (frame-dependent quantities
/// are probed at quadrature points).
int nearest_qp(const BeamPatch& patch, double xi);

/// Normalized L2 distance between the displaced axes of two states on the
/// same parameterization: sqrt of the arc-averaged squared position gap,
/// divided by the largest reference displacement. Sampled at n_stations
/// uniformly spaced parameters; the arc measure and the displacement
/// normalizer come from the reference solution.
double l2_distance(const BeamPatch& patch, const BeamPatch::State& s,
                   const BeamPatch& ref_patch, const BeamPatch::State& ref_state,
                   int n_stations = 201);

/// Same against an analytic reference position field xi -> point. The arc
/// measure is the initial one (suits inextensible references) and the
/// normalizer is the largest reference displacement from the initial axis.
/// Callables must return a materialized Vec3 (lambdas combining vector
/// expressions need an explicit -> Vec3 return type, or the deduced
/// expression type dangles when the std::function wrapper converts it).
double l2_distance(const BeamPatch& patch, const BeamPatch::State& s,
                   const std::function<Vec3(double)>& ref_position,
                   int n_stations = 201);

/// Centerline of a straight rod with equal bending stiffnesses loaded by a
/// dead end couple m: a helix around the axis m/|m|, traversed by arc length
/// of the undeformed rod starting at the clamp toward +x.
class HelixReference {
 public:
  /// m: total applied couple vector; EI: bending stiffness.
  HelixReference(const Vec3& m, double EI);
  Vec3 at(double s) const;

 private:
  Vec3 axis_, n0_, b0_;
  double cos_a_ = 0.0, sin_a_ = 0.0, omega_ = 0.0;
};

/// Write one header line and the rows with printf "%.17g" (lossless
/// round-trip, bit-identical across runs). Throws ConfigError on I/O failure
/// or ragged rows.
void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

}  // namespace curvebeam
