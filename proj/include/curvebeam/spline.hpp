#pragma once

#include "curvebeam/common.hpp"

/// B-spline / NURBS kernel: open knot vectors on [0,1], basis evaluation with
/// first and second derivatives, rational curve evaluation, knot insertion,
/// Bezier degree elevation and k-refinement.
namespace curvebeam {

/// Interelement continuity of a spline space on uniform breakpoints.
enum class Continuity {
  CPm1,  ///< maximal smoothness C^{p-1}: simple interior knots
  C0     ///< C^0: interior knots repeated with multiplicity p
};

/// Open (clamped) knot vector together with the polynomial degree.
class KnotVector {
 public:
  KnotVector() = default;
  KnotVector(int degree, std::vector<double> knots);

  int degree() const { return degree_; }
  const std::vector<double>& knots() const { return knots_; }
  /// Number of basis functions n = #knots - degree - 1.
  int num_basis() const { return static_cast<int>(knots_.size()) - degree_ - 1; }
  /// Parameter domain (first/last distinct knot of a clamped vector).
  double domain_start() const { return knots_[degree_]; }
  double domain_end() const { return knots_[num_basis()]; }

  /// Distinct knot values (element breakpoints), including both domain ends.
  std::vector<double> breakpoints() const;
  /// Number of nonzero-length knot spans (elements).
  int num_elements() const { return static_cast<int>(breakpoints().size()) - 1; }
  /// Knot-span index containing xi (clamped so the domain end maps to the last span).
  int find_span(double xi) const;
  /// First basis-function index supported on the span returned by find_span(xi).
  int first_basis_on_span(int span) const { return span - degree_; }

  /// Values and derivatives of the degree+1 basis functions that are nonzero at xi.
  /// Row k of the returned (nders+1) x (degree+1) matrix holds the k-th derivatives.
  MatX basis_ders(double xi, int nders) const;

  /// Full-size row of all basis values (mostly zeros); convenience for tests.
  VecX basis_row(double xi, int der) const;

 private:
  int degree_ = 0;
  std::vector<double> knots_;
};

/// Open knot vector on [0,1] with n_elements uniform breakpoints and the
/// requested interelement continuity.
KnotVector make_knot_vector(int degree, int n_elements, Continuity continuity);

/// Rational B-spline space curve in R^3.
struct NurbsCurve {
  KnotVector basis;
  MatX points;   ///< control points, num_basis() x 3
  VecX weights;  ///< positive weights, num_basis()

  /// Point and first/second parametric derivatives at xi (rational quotient rule).
  void evaluate(double xi, Vec3& r, Vec3& r1, Vec3& r11) const;
  /// Same with the third derivative (used for torsion of the initial axis).
  void evaluate3(double xi, Vec3& r, Vec3& r1, Vec3& r11, Vec3& r111) const;
  Vec3 point(double xi) const;

  void validate() const;  ///< throws ConfigError on inconsistent sizes / nonpositive weights
};

/// Values and derivatives of the rational basis functions that are nonzero at
/// xi: row k of the (nders+1) x (degree+1) result holds the k-th derivatives
/// of R_i = w_i N_i / sum_j w_j N_j. Since the weights never change, these
/// rows are constant shape data even while the control points move.
MatX rational_basis_ders(const NurbsCurve& c, double xi, int nders);

/// Insert the value xi once into the curve's knot vector (Boehm's algorithm);
/// the represented curve is unchanged.
NurbsCurve insert_knot(const NurbsCurve& c, double xi);

/// Raise the polynomial degree by t. Only single-segment (Bezier) curves are
/// supported; throws ConfigError otherwise.
NurbsCurve degree_elevate(const NurbsCurve& c, int t);

/// k-refinement: elevate the (single-segment) curve to target_degree, then insert
/// uniform breakpoints so the result has n_elements spans with the requested
/// continuity (interior multiplicity 1 or target_degree).
NurbsCurve k_refine(const NurbsCurve& c, int target_degree, int n_elements,
                    Continuity continuity);

}  // namespace curvebeam
