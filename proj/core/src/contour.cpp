#include "qcl/contour.hpp"

#include <algorithm>
#include <cmath>

#include "qcl/quadrature.hpp"

namespace qcl {

// ---------------------------------------------------------------------------
// Branch continuation
// ---------------------------------------------------------------------------

Complex atanh_cont(Complex z, DetourRule rule) {
  if (z.imag() == 0.0) {
    const double x = z.real();
    if (x > 1.0) {
      // On the (1, inf) cut.  |(1+x)/(1-x)| = (x+1)/(x-1).
      const double re = 0.5 * std::log((x + 1.0) / (x - 1.0));
      const bool below = rule == DetourRule::IncludePlus;
      return {re, below ? -kPi / 2 : kPi / 2};
    }
    if (x < -1.0) {
      const double re = 0.5 * std::log((-1.0 - x) / (1.0 - x));
      const bool above = rule == DetourRule::IncludePlus;
      return {re, above ? kPi / 2 : -kPi / 2};
    }
  }
  return std::atanh(z);
}

Complex BranchState::continue_value(int key, Complex principal,
                                    Complex period) {
  Slot& slot = slots_[key];
  if (!slot.init) {
    slot.init = true;
    slot.last = principal;
    slot.offset = 0.0;
    return principal;
  }
  // The sheet ambiguity lies along `period`; project the step onto the
  // period direction (in units of one period) and round to the nearest
  // sheet.  A projected step of half a period or more means the sheet can
  // no longer be identified.
  auto proj = [&](Complex v) {
    return ((v - slot.last) / period).real();
  };
  Complex best = principal + slot.offset;
  double best_d = std::abs(proj(best));
  int best_k = 0;
  for (int k = -2; k <= 2; ++k) {
    if (k == 0) continue;
    const Complex cand = principal + slot.offset + double(k) * period;
    const double d = std::abs(proj(cand));
    if (d < best_d) {
      best_d = d;
      best = cand;
      best_k = k;
    }
  }
  slot.offset += double(best_k) * period;
  if (best_d >= 0.5 ||
      std::abs(best - slot.last) >= 0.5 * std::abs(period))
    fail(ErrorCode::BranchJump,
         "consecutive branch evaluations drifted by " +
             std::to_string(std::abs(best - slot.last) / std::abs(period)) +
             " periods");
  slot.last = best;
  return best;
}

Complex tracked_atanh(Complex z, BranchState& bs, int key) {
  return bs.continue_value(key, std::atanh(z), Complex(0.0, kPi));
}

Complex tracked_log(Complex z, BranchState& bs, int key) {
  return bs.continue_value(key, std::log(z), Complex(0.0, 2 * kPi));
}

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

void Poly::trim() {
  while (!c_.empty() && c_.back() == Complex(0.0)) c_.pop_back();
}

Complex Poly::eval(Complex z) const {
  Complex acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly{};
  std::vector<Complex> d(c_.size() - 1);
  for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = double(k) * c_[k];
  return Poly(std::move(d));
}

Poly Poly::deflate(Complex p, Complex* remainder) const {
  if (c_.empty()) {
    if (remainder) *remainder = 0.0;
    return Poly{};
  }
  std::vector<Complex> q(c_.size() - 1);
  Complex acc = c_.back();
  for (int k = static_cast<int>(c_.size()) - 2; k >= 0; --k) {
    q[k] = acc;
    acc = acc * p + c_[k];
  }
  if (remainder) *remainder = acc;
  return Poly(std::move(q));
}

// ---------------------------------------------------------------------------
// Residues
// ---------------------------------------------------------------------------

namespace {

double poly_scale(const Poly& p) {
  double m = 0;
  for (const auto& c : p.coeffs()) m = std::max(m, std::abs(c));
  return m == 0 ? 1.0 : m;
}

Complex residue_numeric(const RationalFn& f, Complex pole, double radius,
                        int nodes) {
  // (1/2*pi*i) * closed circle integral, midpoint rule (spectral accuracy
  // for the analytic circle integrand).
  Complex acc = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double phi = 2 * kPi * (k + 0.5) / nodes;
    const Complex e(std::cos(phi), std::sin(phi));
    const Complex z = pole + radius * e;
    acc += f.eval(z) * (radius * e);  // f(z) * dz/dphi / i, folded below
  }
  // dz = i * radius * e dphi; the loop accumulated f * (radius * e), so
  // multiply by i * (2 pi / nodes) and divide by 2 pi i.
  return acc / double(nodes);
}

}  // namespace

Complex residue(const RationalFn& f, Complex pole, int order,
                double crosscheck_tol, double circle_radius) {
  if (order != 1 && order != 2)
    fail(ErrorCode::BadParameters, "residue supports pole orders 1 and 2");
  const double scale = poly_scale(f.den);
  Complex rem = 0.0;
  Poly d1 = f.den.deflate(pole, &rem);
  if (std::abs(rem) > 1e-9 * scale)
    fail(ErrorCode::OrderMismatch, "denominator does not vanish at the pole");
  Poly reduced = d1;
  if (order == 2) {
    reduced = d1.deflate(pole, &rem);
    if (std::abs(rem) > 1e-9 * scale)
      fail(ErrorCode::OrderMismatch, "pole is simple, order 2 requested");
  } else if (std::abs(d1.eval(pole)) < 1e-9 * scale) {
    fail(ErrorCode::OrderMismatch, "pole order exceeds 1");
  }
  if (std::abs(reduced.eval(pole)) < 1e-9 * scale)
    fail(ErrorCode::OrderMismatch, "pole order exceeds the requested order");

  Complex analytic;
  if (order == 1) {
    analytic = f.num.eval(pole) / d1.eval(pole);
  } else {
    // Res = d/dz [ num/reduced ] at the pole.
    const Complex n = f.num.eval(pole), dn = f.num.derivative().eval(pole);
    const Complex g = reduced.eval(pole), dg = reduced.derivative().eval(pole);
    analytic = (dn * g - n * dg) / (g * g);
  }

  const Complex numeric = residue_numeric(f, pole, circle_radius, 256);
  if (std::abs(numeric - analytic) >
      crosscheck_tol * std::max(1.0, std::abs(analytic)))
    fail(ErrorCode::OrderMismatch,
         "analytic and quadrature residues disagree: " +
             std::to_string(std::abs(numeric - analytic)));
  return analytic;
}

// ---------------------------------------------------------------------------
// Contours
// ---------------------------------------------------------------------------

Segment Segment::line(Complex a, Complex b) {
  Segment s;
  s.kind = Kind::Line;
  s.a = a;
  s.b = b;
  return s;
}

Segment Segment::arc(Complex center, double radius, double phi0, double phi1) {
  Segment s;
  s.kind = Kind::Arc;
  s.center = center;
  s.radius = radius;
  s.phi0 = phi0;
  s.phi1 = phi1;
  return s;
}

Segment Segment::tail_up(double cutoff) {
  Segment s;
  s.kind = Kind::TailUp;
  s.cutoff = cutoff;
  return s;
}

Segment Segment::tail_down(double cutoff) {
  Segment s;
  s.kind = Kind::TailDown;
  s.cutoff = cutoff;
  return s;
}

Contour real_line_contour(const std::vector<PoleSpec>& poles, double R,
                          double eps, bool with_tails) {
  if (R <= 0 || eps <= 0)
    fail(ErrorCode::BadParameters, "real_line_contour needs R > 0, eps > 0");
  std::vector<PoleSpec> sorted = poles;
  std::sort(sorted.begin(), sorted.end(),
            [](const PoleSpec& a, const PoleSpec& b) {
              return a.location < b.location;
            });
  for (size_t i = 0; i + 1 < sorted.size(); ++i)
    if (sorted[i + 1].location - sorted[i].location < 2 * eps)
      fail(ErrorCode::BadParameters, "pole detours of radius eps overlap");
  for (const auto& p : sorted)
    if (std::abs(p.location) + eps >= R)
      fail(ErrorCode::BadParameters, "pole too close to the cutoff R");

  Contour c;
  c.poles = poles;
  c.cutoff = R;
  c.closed_upper = with_tails;
  if (with_tails) c.segments.push_back(Segment::tail_down(R));
  double cursor = -R;
  for (const auto& p : sorted) {
    c.segments.push_back(Segment::line(cursor, p.location - eps));
    // Include => pole inside the upper closure => detour below (phi pi..2pi);
    // Exclude => detour above (phi pi..0).
    if (p.policy == PoleSpec::Policy::Include)
      c.segments.push_back(Segment::arc(p.location, eps, kPi, 2 * kPi));
    else
      c.segments.push_back(Segment::arc(p.location, eps, kPi, 0.0));
    cursor = p.location + eps;
  }
  c.segments.push_back(Segment::line(cursor, R));
  if (with_tails) c.segments.push_back(Segment::tail_up(R));
  return c;
}

namespace {

Complex integrate_segment(const BranchedFn& f, const Segment& seg,
                          const ContourRule& rule, BranchState& bs) {
  const auto r = gl_rule01(rule.gl_order, rule.panels);
  KahanSum re, im;
  auto accumulate = [&](Complex z, Complex dz_du, double wgt) {
    const Complex v = f(z, bs) * dz_du * wgt;
    re.add(v.real());
    im.add(v.imag());
  };
  switch (seg.kind) {
    case Segment::Kind::Line: {
      const Complex d = seg.b - seg.a;
      for (size_t i = 0; i < r.nodes.size(); ++i)
        accumulate(seg.a + d * r.nodes[i], d, r.weights[i]);
      break;
    }
    case Segment::Kind::Arc: {
      const double span = seg.phi1 - seg.phi0;
      for (size_t i = 0; i < r.nodes.size(); ++i) {
        const double phi = seg.phi0 + span * r.nodes[i];
        const Complex e(std::cos(phi), std::sin(phi));
        accumulate(seg.center + seg.radius * e,
                   Complex(0, 1) * seg.radius * e * span, r.weights[i]);
      }
      break;
    }
    case Segment::Kind::TailUp: {
      // z = cutoff / s, s: 1 -> 0 maps z: cutoff -> +inf;
      // int_cutoff^inf f dz = int_0^1 f(cutoff/s) cutoff/s^2 ds.
      for (size_t i = 0; i < r.nodes.size(); ++i) {
        const double s = r.nodes[i];
        accumulate(seg.cutoff / s, seg.cutoff / (s * s), r.weights[i]);
      }
      break;
    }
    case Segment::Kind::TailDown: {
      // z = -cutoff / s, s: 0 -> 1 maps z: -inf -> -cutoff.
      for (size_t i = 0; i < r.nodes.size(); ++i) {
        const double s = r.nodes[i];
        accumulate(-seg.cutoff / s, seg.cutoff / (s * s), r.weights[i]);
      }
      break;
    }
  }
  return {re.value(), im.value()};
}

void check_decay(const BranchedFn& f, const Contour& c, BranchState& bs) {
  // Sampled ratio test for |f(z)| * |z| -> 0 on the upper closure arc.
  const double R0 = std::max(c.cutoff, 1.0) * 4.0;
  double m1 = 0, m2 = 0;
  for (double phi : {kPi / 6, kPi / 2, 5 * kPi / 6}) {
    const Complex e(std::cos(phi), std::sin(phi));
    BranchState scratch = bs;
    m1 = std::max(m1, std::abs(f(R0 * e, scratch)) * R0);
    m2 = std::max(m2, std::abs(f(2 * R0 * e, scratch)) * 2 * R0);
  }
  if (!(m2 <= 0.9 * m1 || m2 < 1e-12))
    fail(ErrorCode::BadParameters,
         "integrand does not decay on the closure arc (|f|*R ratio " +
             std::to_string(m1 > 0 ? m2 / m1 : 0.0) + ")");
}

}  // namespace

Complex contour_integrate(const BranchedFn& f, const Contour& c,
                          const ContourRule& rule) {
  if (rule.gl_order < 1 || rule.panels < 1)
    fail(ErrorCode::BadParameters, "contour rule orders must be positive");
  BranchState bs;
  if (c.closed_upper) check_decay(f, c, bs);
  KahanSum re, im;
  for (const auto& seg : c.segments) {
    const Complex v = integrate_segment(f, seg, rule, bs);
    re.add(v.real());
    im.add(v.imag());
  }
  return {re.value(), im.value()};
}

Complex contour_integrate(const std::function<Complex(Complex)>& f,
                          const Contour& c, const ContourRule& rule) {
  return contour_integrate(
      [&f](Complex z, BranchState&) { return f(z); }, c, rule);
}

Complex residue_theorem_value(const RationalFn& f, const Contour& c,
                              int pole_order) {
  Complex sum = 0.0;
  for (const auto& p : c.poles)
    if (p.policy == PoleSpec::Policy::Include)
      sum += residue(f, p.location, pole_order);
  return Complex(0, 2 * kPi) * sum;
}

}  // namespace qcl
