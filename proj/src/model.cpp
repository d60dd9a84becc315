#include "curvebeam/model.hpp"

#include <cmath>

#include "curvebeam/frames.hpp"

namespace curvebeam {

FrameMapping parse_mapping(const std::string& s) {
  if (s == "SR") return FrameMapping::SR;
  if (s == "NSRISR") return FrameMapping::NSRISR;
  throw ConfigError("unknown frame mapping '" + s + "' (expected SR or NSRISR)");
}

ReferencePolicy parse_reference(const std::string& s) {
  if (s == "total") return ReferencePolicy::Total;
  if (s == "incremental") return ReferencePolicy::Incremental;
  throw ConfigError("unknown reference policy '" + s +
                    "' (expected total or incremental)");
}

std::string mapping_name(FrameMapping m) {
  return m == FrameMapping::SR ? "SR" : "NSRISR";
}

std::string reference_name(ReferencePolicy p) {
  return p == ReferencePolicy::Total ? "total" : "incremental";
}

namespace {

/// Unit tangent and its parametric derivative from curve derivatives.
void unit_tangent(const Vec3& r1, const Vec3& r11, Vec3& t, Vec3& t_1) {
  const double g = r1.dot(r1);
  if (g <= 0.0 || !std::isfinite(g))
    throw NumericalError("BeamPatch: degenerate axis tangent");
  const double sg = std::sqrt(g);
  const double Gamma = r1.dot(r11) / g;
  t = r1 / sg;
  t_1 = (r11 - Gamma * r1) / sg;
}

}  // namespace

BeamPatch::BeamPatch(NurbsCurve axis, KnotVector twist_basis,
                     const InitialFrameProvider& init_frames, CrossSection sec,
                     Material mat, ConstitutiveModel model, FrameMapping mapping,
                     ReferencePolicy reference)
    : axis_(std::move(axis)),
      twist_basis_(std::move(twist_basis)),
      section_(sec),
      material_(mat),
      model_(model),
      mapping_(mapping),
      reference_(reference) {
  axis_.validate();
  section_.validate();
  if (!(material_.E > 0.0) || !(material_.mu > 0.0))
    throw ConfigError("BeamPatch: material moduli must be positive");

  const std::vector<double> breaks = axis_.basis.breakpoints();
  const std::vector<double> tw_breaks = twist_basis_.breakpoints();
  if (breaks.size() != tw_breaks.size())
    throw ConfigError("BeamPatch: twist basis must share the axis breakpoints");
  for (std::size_t i = 0; i < breaks.size(); ++i)
    if (std::abs(breaks[i] - tw_breaks[i]) > 1e-12)
      throw ConfigError("BeamPatch: twist basis must share the axis breakpoints");

  const int p = axis_.basis.degree();
  const int pt = twist_basis_.degree();
  const int nq = std::max(p, pt) + 1;

  node_xis_ = breaks;
  const int n_el = static_cast<int>(breaks.size()) - 1;
  elements_.reserve(n_el);
  qps_.reserve(static_cast<std::size_t>(n_el) * nq);
  for (int e = 0; e < n_el; ++e) {
    ElementInfo info;
    info.xi_a = breaks[e];
    info.xi_b = breaks[e + 1];
    const double mid = 0.5 * (info.xi_a + info.xi_b);
    info.disp_first = axis_.basis.first_basis_on_span(axis_.basis.find_span(mid));
    info.twist_first =
        twist_basis_.first_basis_on_span(twist_basis_.find_span(mid));
    info.qp_begin = static_cast<int>(qps_.size());

    const QuadratureRule rule = gauss_legendre(nq, info.xi_a, info.xi_b);
    for (int k = 0; k < nq; ++k) {
      QuadPoint qp;
      qp.element = e;
      qp.xi = rule.points[k];
      qp.weight = rule.weights[k];
      qp.disp_ders = rational_basis_ders(axis_, qp.xi, 2);
      qp.twist_ders = twist_basis_.basis_ders(qp.xi, 1);
      qp.init = initial_frame_data(axis_, init_frames, qp.xi);
      qp.meas0 = qp.init.measures();
      qp.D_init = constitutive_matrix(model_, material_, section_, qp.init.g,
                                      qp.init.K2(), qp.init.K3());
      qps_.push_back(std::move(qp));
    }
    info.qp_end = static_cast<int>(qps_.size());
    elements_.push_back(info);
  }

  node_disp_ders_.reserve(node_xis_.size());
  node_disp_first_.reserve(node_xis_.size());
  node_twist_vals_.reserve(node_xis_.size());
  node_twist_first_.reserve(node_xis_.size());
  node_init_.reserve(node_xis_.size());
  for (double xn : node_xis_) {
    node_disp_ders_.push_back(rational_basis_ders(axis_, xn, 1));
    node_disp_first_.push_back(
        axis_.basis.first_basis_on_span(axis_.basis.find_span(xn)));
    const MatX tw = twist_basis_.basis_ders(xn, 0);
    node_twist_vals_.push_back(tw.row(0).transpose());
    node_twist_first_.push_back(
        twist_basis_.first_basis_on_span(twist_basis_.find_span(xn)));
    const FrameData fd = initial_frame_data(axis_, init_frames, xn);
    NodeState ns;
    ns.t_ref = fd.tangent();
    ns.g2_ref = fd.g2;
    ns.g3_ref = fd.g3;
    node_init_.push_back(ns);
  }

  // Re-express the reference measures through the same cached-basis evaluation
  // that update_state uses, so the undeformed configuration is exactly stress
  // free instead of stress free only up to the roundoff gap between the two
  // evaluation paths.
  State s0 = initial_state();
  std::vector<FrameData> f0;
  update_state(s0, f0);
  for (std::size_t i = 0; i < qps_.size(); ++i) {
    qps_[i].meas0 = f0[i].measures();
    qps_[i].D_init = constitutive_matrix(model_, material_, section_, f0[i].g,
                                         f0[i].K2(), f0[i].K3());
  }
}

BeamPatch::State BeamPatch::initial_state() const {
  State s;
  s.q = VecX::Zero(ndof());
  s.twist_ref = VecX::Zero(n_twist());
  s.qps.resize(qps_.size());
  for (std::size_t i = 0; i < qps_.size(); ++i) {
    const FrameData& fd = qps_[i].init;
    QuadPointState& st = s.qps[i];
    st.t_ref = fd.tangent();
    st.t_ref_1 = (fd.r11 - fd.Gamma * fd.r1) / fd.sqrt_g;
    st.g2_ref = fd.g2;
    st.g2_ref_1 = fd.g2_1;
    st.g3_ref = fd.g3;
    st.g3_ref_1 = fd.g3_1;
  }
  s.nodes = node_init_;
  return s;
}

void BeamPatch::eval_curve_at(const State& s, const MatX& ders, int first, Vec3& r,
                              Vec3& r1, Vec3& r11) const {
  r.setZero();
  r1.setZero();
  r11.setZero();
  const int nloc = static_cast<int>(ders.cols());
  for (int j = 0; j < nloc; ++j) {
    const int cp = first + j;
    const Vec3 P = axis_.points.row(cp).transpose() + s.q.segment<3>(3 * cp);
    r += ders(0, j) * P;
    r1 += ders(1, j) * P;
    if (ders.rows() > 2) r11 += ders(2, j) * P;
  }
}

void BeamPatch::twist_rel(const State& s, const MatX& twist_ders, int first,
                          double& th, double& th_1) const {
  th = 0.0;
  th_1 = 0.0;
  const int base = 3 * n_cp();
  for (int j = 0; j < twist_ders.cols(); ++j) {
    const int c = first + j;
    const double a = s.q[base + c] - s.twist_ref[c];
    th += twist_ders(0, j) * a;
    th_1 += twist_ders(1, j) * a;
  }
}

Vec3 BeamPatch::node_tangent(const State& s, int node) const {
  Vec3 r, r1, r11;
  eval_curve_at(s, node_disp_ders_[node], node_disp_first_[node], r, r1, r11);
  const double n = r1.norm();
  if (n <= 0.0 || !std::isfinite(n))
    throw NumericalError("BeamPatch: degenerate tangent at an element node");
  return r1 / n;
}

double BeamPatch::node_twist_rel(const State& s, int node) const {
  double th = 0.0;
  const int base = 3 * n_cp();
  const VecX& vals = node_twist_vals_[node];
  const int first = node_twist_first_[node];
  for (int j = 0; j < vals.size(); ++j)
    th += vals[j] * (s.q[base + first + j] - s.twist_ref[first + j]);
  return th;
}

void BeamPatch::evaluate_frames(const State& s, std::vector<FrameData>& frames) const {
  frames.resize(qps_.size());

  if (mapping_ == FrameMapping::SR) {
    for (std::size_t i = 0; i < qps_.size(); ++i) {
      const QuadPoint& qp = qps_[i];
      const QuadPointState& st = s.qps[i];
      FrameData fd;
      eval_curve_at(s, qp.disp_ders, elements_[qp.element].disp_first, fd.r, fd.r1,
                    fd.r11);
      Vec3 t, t_1;
      unit_tangent(fd.r1, fd.r11, t, t_1);
      DirectorPair pair = sr_transport(st.g2_ref, st.g2_ref_1, st.g3_ref,
                                       st.g3_ref_1, st.t_ref, st.t_ref_1, t, t_1);
      double th, th_1;
      twist_rel(s, qp.twist_ders, elements_[qp.element].twist_first, th, th_1);
      twist_adapted(pair, th, th_1);
      fd.g2 = pair.g2;
      fd.g3 = pair.g3;
      fd.g2_1 = pair.g2_1;
      fd.g3_1 = pair.g3_1;
      fd.finalize();
      frames[i] = fd;
    }
    return;
  }

  // Nodal-anchored mapping: per element, carry the start-node frame along the
  // current tangents and close the gap to the end-node frame with a linearly
  // interpolated rotation angle.
  const Vec3 zero = Vec3::Zero();
  for (int na = 0; na < n_elements(); ++na) {
    const ElementInfo& el = elements_[na];
    const int nb = na + 1;
    const Vec3 t_a = node_tangent(s, na);
    const Vec3 t_b = node_tangent(s, nb);
    const NodeState& a = s.nodes[na];
    const NodeState& b = s.nodes[nb];
    const Vec3 ma2 = smallest_rotation(a.g2_ref, a.t_ref, t_a);
    const Vec3 ma3 = smallest_rotation(a.g3_ref, a.t_ref, t_a);
    const Vec3 mb2 = smallest_rotation(b.g2_ref, b.t_ref, t_b);
    const Vec3 ref2b = smallest_rotation(ma2, t_a, t_b);
    const Vec3 ref3b = smallest_rotation(ma3, t_a, t_b);
    const double dth_close = adapted_angle(ref2b, ref3b, mb2);
    const double span = el.xi_b - el.xi_a;

    for (int i = el.qp_begin; i < el.qp_end; ++i) {
      const QuadPoint& qp = qps_[i];
      FrameData fd;
      eval_curve_at(s, qp.disp_ders, el.disp_first, fd.r, fd.r1, fd.r11);
      Vec3 t, t_1;
      unit_tangent(fd.r1, fd.r11, t, t_1);
      DirectorPair pair = sr_transport(ma2, zero, ma3, zero, t_a, zero, t, t_1);
      double th, th_1;
      twist_rel(s, qp.twist_ders, el.twist_first, th, th_1);
      const double sloc = (qp.xi - el.xi_a) / span;
      twist_adapted(pair, th + sloc * dth_close, th_1 + dth_close / span);
      fd.g2 = pair.g2;
      fd.g3 = pair.g3;
      fd.g2_1 = pair.g2_1;
      fd.g3_1 = pair.g3_1;
      fd.finalize();
      frames[i] = fd;
    }
  }
}

void BeamPatch::update_state(State& s, std::vector<FrameData>& frames) const {
  evaluate_frames(s, frames);
  for (std::size_t i = 0; i < qps_.size(); ++i) {
    QuadPointState& st = s.qps[i];
    st.e_acc = frames[i].measures() - qps_[i].meas0;
    st.f = constitutive_at(frames[i]) * st.e_acc;
  }
}

void BeamPatch::rebase_reference(State& s, const std::vector<FrameData>& frames) const {
  if (reference_ == ReferencePolicy::Total) return;

  if (mapping_ == FrameMapping::SR) {
    for (std::size_t i = 0; i < qps_.size(); ++i) {
      const FrameData& fd = frames[i];
      QuadPointState& st = s.qps[i];
      st.t_ref = fd.tangent();
      st.t_ref_1 = (fd.r11 - fd.Gamma * fd.r1) / fd.sqrt_g;
      st.g2_ref = fd.g2;
      st.g2_ref_1 = fd.g2_1;
      st.g3_ref = fd.g3;
      st.g3_ref_1 = fd.g3_1;
    }
  } else {
    // New anchors = current converged nodal frames (identical from both
    // element sides by construction of the closure interpolation).
    for (std::size_t n = 0; n < node_xis_.size(); ++n) {
      NodeState& ns = s.nodes[n];
      const Vec3 t_n = node_tangent(s, static_cast<int>(n));
      const Vec3 m2 = smallest_rotation(ns.g2_ref, ns.t_ref, t_n);
      const Vec3 m3 = smallest_rotation(ns.g3_ref, ns.t_ref, t_n);
      const double th = node_twist_rel(s, static_cast<int>(n));
      ns.t_ref = t_n;
      ns.g2_ref = std::cos(th) * m2 + std::sin(th) * m3;
      ns.g3_ref = -std::sin(th) * m2 + std::cos(th) * m3;
    }
  }
  s.twist_ref = s.q.segment(3 * n_cp(), n_twist());
}

Mat4 BeamPatch::constitutive_at(const FrameData& fd) const {
  return constitutive_matrix(model_, material_, section_, fd.g, fd.K2(), fd.K3());
}

NurbsCurve BeamPatch::displaced_axis(const State& s) const {
  NurbsCurve c = axis_;
  for (int i = 0; i < n_cp(); ++i)
    c.points.row(i) += s.q.segment<3>(3 * i).transpose();
  return c;
}

int BeamPatch::element_of(double xi) const {
  if (xi < node_xis_.front() - 1e-12 || xi > node_xis_.back() + 1e-12)
    throw ConfigError("BeamPatch: parameter outside the axis domain");
  for (int e = n_elements() - 1; e > 0; --e)
    if (xi >= node_xis_[e]) return e;
  return 0;
}

void BeamPatch::curve_at(const State& s, double xi, Vec3& r, Vec3& r1, Vec3& r11) const {
  const MatX ders = rational_basis_ders(axis_, xi, 2);
  const int first = axis_.basis.first_basis_on_span(axis_.basis.find_span(xi));
  eval_curve_at(s, ders, first, r, r1, r11);
}

}  // namespace curvebeam
