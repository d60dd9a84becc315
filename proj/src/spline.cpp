#include "curvebeam/spline.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace curvebeam {

// ------------------------------------------------------------------ quadrature

namespace {

// Canonical Gauss-Legendre rule on [-1, 1], memoized per point count: the
// section integrals request the same high-order rules once per constitutive
// evaluation, so recomputing the Newton root solve each time dominates the
// whole assembly. The cache is thread_local so concurrent assembly threads
// never contend.
const QuadratureRule& canonical_gauss_legendre(int n) {
  thread_local std::unordered_map<int, QuadratureRule> cache;
  const auto hit = cache.find(n);
  if (hit != cache.end()) return hit->second;

  QuadratureRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  // Newton iteration on Legendre polynomials, symmetric roots on (-1,1).
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.points[i] = -x;
    rule.points[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

}  // namespace

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw ConfigError("gauss_legendre: need at least one point");
  const QuadratureRule& canon = canonical_gauss_legendre(n);
  QuadratureRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.points[i] = mid + half * canon.points[i];
    rule.weights[i] = half * canon.weights[i];
  }
  return rule;
}

// ------------------------------------------------------------------ KnotVector

KnotVector::KnotVector(int degree, std::vector<double> knots)
    : degree_(degree), knots_(std::move(knots)) {
  if (degree_ < 1) throw ConfigError("KnotVector: degree must be >= 1");
  if (static_cast<int>(knots_.size()) < 2 * (degree_ + 1))
    throw ConfigError("KnotVector: too few knots for the degree");
  if (!std::is_sorted(knots_.begin(), knots_.end()))
    throw ConfigError("KnotVector: knots must be nondecreasing");
  for (int i = 0; i <= degree_; ++i) {
    if (knots_[i] != knots_.front() ||
        knots_[knots_.size() - 1 - i] != knots_.back())
      throw ConfigError("KnotVector: knot vector must be open (clamped)");
  }
}

std::vector<double> KnotVector::breakpoints() const {
  std::vector<double> b;
  for (double u : knots_)
    if (b.empty() || u > b.back()) b.push_back(u);
  return b;
}

int KnotVector::find_span(double xi) const {
  const int n = num_basis();
  if (xi >= knots_[n]) return n - 1;  // clamp domain end into last span
  if (xi <= knots_[degree_]) return degree_;
  int lo = degree_, hi = n;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (xi < knots_[mid] ? hi : lo) = mid;
  }
  return lo;
}

MatX KnotVector::basis_ders(double xi, int nders) const {
  // Standard knot-based recurrence for values and derivatives of the nonzero
  // functions on the span of xi.
  const int p = degree_;
  const int span = find_span(xi);
  const int nd = std::min(nders, p);

  MatX ndu(p + 1, p + 1);
  std::vector<double> left(p + 1), right(p + 1);
  ndu(0, 0) = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = xi - knots_[span + 1 - j];
    right[j] = knots_[span + j] - xi;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu(j, r) = right[r + 1] + left[j - r];
      const double temp = ndu(r, j - 1) / ndu(j, r);
      ndu(r, j) = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu(j, j) = saved;
  }

  MatX ders = MatX::Zero(nders + 1, p + 1);
  for (int j = 0; j <= p; ++j) ders(0, j) = ndu(j, p);

  MatX a(2, p + 1);
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    a(0, 0) = 1.0;
    for (int k = 1; k <= nd; ++k) {
      double d = 0.0;
      const int rk = r - k, pk = p - k;
      if (r >= k) {
        a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
        d = a(s2, 0) * ndu(rk, pk);
      }
      const int j1 = (rk >= -1) ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
        d += a(s2, j) * ndu(rk + j, pk);
      }
      if (r <= pk) {
        a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
        d += a(s2, k) * ndu(r, pk);
      }
      ders(k, r) = d;
      std::swap(s1, s2);
    }
  }
  double r = p;
  for (int k = 1; k <= nd; ++k) {
    for (int j = 0; j <= p; ++j) ders(k, j) *= r;
    r *= (p - k);
  }
  return ders;
}

VecX KnotVector::basis_row(double xi, int der) const {
  VecX row = VecX::Zero(num_basis());
  const MatX d = basis_ders(xi, der);
  const int first = first_basis_on_span(find_span(xi));
  for (int j = 0; j <= degree_; ++j) row[first + j] = d(der, j);
  return row;
}

KnotVector make_knot_vector(int degree, int n_elements, Continuity continuity) {
  if (degree < 1) throw ConfigError("make_knot_vector: degree must be >= 1");
  if (n_elements < 1) throw ConfigError("make_knot_vector: need >= 1 element");
  std::vector<double> k;
  for (int i = 0; i <= degree; ++i) k.push_back(0.0);
  const int mult = (continuity == Continuity::C0) ? degree : 1;
  for (int e = 1; e < n_elements; ++e) {
    const double xi = static_cast<double>(e) / n_elements;
    for (int m = 0; m < mult; ++m) k.push_back(xi);
  }
  for (int i = 0; i <= degree; ++i) k.push_back(1.0);
  return KnotVector(degree, std::move(k));
}

// ------------------------------------------------------------------ NurbsCurve

void NurbsCurve::validate() const {
  const int n = basis.num_basis();
  if (points.rows() != n || points.cols() != 3)
    throw ConfigError("NurbsCurve: control net size does not match the knot vector");
  if (weights.size() != n)
    throw ConfigError("NurbsCurve: weight count does not match the knot vector");
  for (int i = 0; i < n; ++i)
    if (!(weights[i] > 0.0)) throw ConfigError("NurbsCurve: weights must be positive");
}

void NurbsCurve::evaluate(double xi, Vec3& r, Vec3& r1, Vec3& r11) const {
  Vec3 r111;
  evaluate3(xi, r, r1, r11, r111);
}

void NurbsCurve::evaluate3(double xi, Vec3& r, Vec3& r1, Vec3& r11, Vec3& r111) const {
  const int p = basis.degree();
  const int span = basis.find_span(xi);
  const int first = basis.first_basis_on_span(span);
  const MatX d = basis.basis_ders(xi, 3);

  // Homogeneous numerator A = sum N_i w_i P_i and denominator W = sum N_i w_i.
  Vec3 A = Vec3::Zero(), A1 = Vec3::Zero(), A11 = Vec3::Zero(), A111 = Vec3::Zero();
  double W = 0.0, W1 = 0.0, W11 = 0.0, W111 = 0.0;
  for (int j = 0; j <= p; ++j) {
    const int i = first + j;
    const double w = weights[i];
    const Vec3 Pw = w * points.row(i).transpose();
    A += d(0, j) * Pw;
    A1 += d(1, j) * Pw;
    A11 += d(2, j) * Pw;
    A111 += d(3, j) * Pw;
    W += d(0, j) * w;
    W1 += d(1, j) * w;
    W11 += d(2, j) * w;
    W111 += d(3, j) * w;
  }
  if (W <= 0.0) throw NumericalError("NurbsCurve: nonpositive rational denominator");
  // Leibniz cascade on A = W * C.
  r = A / W;
  r1 = (A1 - W1 * r) / W;
  r11 = (A11 - 2.0 * W1 * r1 - W11 * r) / W;
  r111 = (A111 - 3.0 * W1 * r11 - 3.0 * W11 * r1 - W111 * r) / W;
}

Vec3 NurbsCurve::point(double xi) const {
  Vec3 r, r1, r11;
  evaluate(xi, r, r1, r11);
  return r;
}

MatX rational_basis_ders(const NurbsCurve& c, double xi, int nders) {
  const int p = c.basis.degree();
  const int first = c.basis.first_basis_on_span(c.basis.find_span(xi));
  const MatX N = c.basis.basis_ders(xi, nders);

  VecX W = VecX::Zero(nders + 1);
  for (int k = 0; k <= nders; ++k)
    for (int j = 0; j <= p; ++j) W[k] += N(k, j) * c.weights[first + j];
  if (W[0] <= 0.0) throw NumericalError("rational_basis_ders: nonpositive denominator");

  // Leibniz cascade on w_i N_i = R_i * W.
  MatX R(nders + 1, p + 1);
  std::vector<double> binom{1.0};
  for (int k = 0; k <= nders; ++k) {
    for (int j = 0; j <= p; ++j) {
      double v = c.weights[first + j] * N(k, j);
      for (int m = 1; m <= k; ++m) v -= binom[m] * W[m] * R(k - m, j);
      R(k, j) = v / W[0];
    }
    // next row of Pascal's triangle
    binom.push_back(1.0);
    for (int m = k; m >= 1; --m) binom[m] += binom[m - 1];
  }
  return R;
}

NurbsCurve insert_knot(const NurbsCurve& c, double xi) {
  const int p = c.basis.degree();
  const auto& U = c.basis.knots();
  const int n = c.basis.num_basis();
  const int k = c.basis.find_span(xi);

  // Work in homogeneous coordinates so the rational curve is preserved.
  MatX Pw(n, 4);
  for (int i = 0; i < n; ++i) {
    Pw.row(i).head<3>() = c.points.row(i) * c.weights[i];
    Pw(i, 3) = c.weights[i];
  }

  MatX Qw(n + 1, 4);
  for (int i = 0; i <= k - p; ++i) Qw.row(i) = Pw.row(i);
  for (int i = k; i < n; ++i) Qw.row(i + 1) = Pw.row(i);
  for (int i = k - p + 1; i <= k; ++i) {
    const double denom = U[i + p] - U[i];
    const double alpha = denom > 0.0 ? (xi - U[i]) / denom : 0.0;
    Qw.row(i) = alpha * Pw.row(i) + (1.0 - alpha) * Pw.row(i - 1);
  }

  std::vector<double> Unew(U.begin(), U.end());
  Unew.insert(Unew.begin() + (k + 1), xi);

  NurbsCurve out;
  out.basis = KnotVector(p, std::move(Unew));
  out.points.resize(n + 1, 3);
  out.weights.resize(n + 1);
  for (int i = 0; i < n + 1; ++i) {
    out.weights[i] = Qw(i, 3);
    out.points.row(i) = Qw.row(i).head<3>() / Qw(i, 3);
  }
  out.validate();
  return out;
}

NurbsCurve degree_elevate(const NurbsCurve& c, int t) {
  if (t < 0) throw ConfigError("degree_elevate: negative elevation");
  if (t == 0) return c;
  const int p = c.basis.degree();
  if (c.basis.num_elements() != 1)
    throw ConfigError("degree_elevate: only single-segment (Bezier) curves supported");
  if (c.basis.num_basis() != p + 1)
    throw ConfigError("degree_elevate: curve is not in Bezier form");

  // One homogeneous Bezier elevation step p -> p+1, applied t times.
  MatX Pw(p + 1, 4);
  for (int i = 0; i <= p; ++i) {
    Pw.row(i).head<3>() = c.points.row(i) * c.weights[i];
    Pw(i, 3) = c.weights[i];
  }
  int q = p;
  for (int step = 0; step < t; ++step) {
    MatX Qw(q + 2, 4);
    Qw.row(0) = Pw.row(0);
    Qw.row(q + 1) = Pw.row(q);
    for (int i = 1; i <= q; ++i) {
      const double a = static_cast<double>(i) / (q + 1);
      Qw.row(i) = a * Pw.row(i - 1) + (1.0 - a) * Pw.row(i);
    }
    Pw = Qw;
    ++q;
  }

  std::vector<double> knots;
  const double u0 = c.basis.domain_start(), u1 = c.basis.domain_end();
  for (int i = 0; i <= q; ++i) knots.push_back(u0);
  for (int i = 0; i <= q; ++i) knots.push_back(u1);

  NurbsCurve out;
  out.basis = KnotVector(q, std::move(knots));
  out.points.resize(q + 1, 3);
  out.weights.resize(q + 1);
  for (int i = 0; i <= q; ++i) {
    out.weights[i] = Pw(i, 3);
    out.points.row(i) = Pw.row(i).head<3>() / Pw(i, 3);
  }
  out.validate();
  return out;
}

NurbsCurve k_refine(const NurbsCurve& c, int target_degree, int n_elements,
                    Continuity continuity) {
  if (target_degree < c.basis.degree())
    throw ConfigError("k_refine: target degree below curve degree");
  NurbsCurve out = degree_elevate(c, target_degree - c.basis.degree());
  const int mult = (continuity == Continuity::C0) ? target_degree : 1;
  for (int e = 1; e < n_elements; ++e) {
    const double xi = static_cast<double>(e) / n_elements;
    for (int m = 0; m < mult; ++m) out = insert_knot(out, xi);
  }
  return out;
}

}  // namespace curvebeam
