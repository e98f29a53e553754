#include "qcl/operators.hpp"

#include <algorithm>
#include <cmath>

namespace qcl {

namespace {

struct Stencil {
  int count;
  int offsets[7];
  double weights[7];
  int hpow;  // divide by h^hpow
};

const Stencil& first_derivative(int order) {
  static const Stencil s2{2, {-1, 1}, {-0.5, 0.5}, 1};
  static const Stencil s4{4,
                          {-2, -1, 1, 2},
                          {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12},
                          1};
  static const Stencil s6{6,
                          {-3, -2, -1, 1, 2, 3},
                          {-1.0 / 60, 9.0 / 60, -45.0 / 60, 45.0 / 60,
                           -9.0 / 60, 1.0 / 60},
                          1};
  switch (order) {
    case 2: return s2;
    case 4: return s4;
    case 6: return s6;
  }
  fail(ErrorCode::BadParameters, "finite-difference order must be 2, 4 or 6");
}

const Stencil& second_derivative(int order) {
  static const Stencil s2{3, {-1, 0, 1}, {1.0, -2.0, 1.0}, 2};
  static const Stencil s4{
      5,
      {-2, -1, 0, 1, 2},
      {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12},
      2};
  static const Stencil s6{7,
                          {-3, -2, -1, 0, 1, 2, 3},
                          {2.0 / 180, -27.0 / 180, 270.0 / 180, -490.0 / 180,
                           270.0 / 180, -27.0 / 180, 2.0 / 180},
                          2};
  switch (order) {
    case 2: return s2;
    case 4: return s4;
    case 6: return s6;
  }
  fail(ErrorCode::BadParameters, "finite-difference order must be 2, 4 or 6");
}

double effective_step(const FdScheme& scheme, const EvalPoint& p) {
  if (scheme.h <= 0) fail(ErrorCode::BadParameters, "step must be positive");
  return scheme.scale_by_point ? scheme.h * (1.0 + p.abs_scale()) : scheme.h;
}

EvalPoint shifted(const EvalPoint& p, int axis, double d) {
  EvalPoint q = p;
  (&q.w)[axis] += d;
  return q;
}

// Finite-difference directional derivative of f along a coordinate axis.
BiQuat fd_axis(const QField& f, const EvalPoint& p, int axis,
               const Stencil& st, double h) {
  for (int i = 0; i < st.count; ++i) {
    const EvalPoint q = shifted(p, axis, st.offsets[i] * h);
    if (f.clearance(q) < 0.25 * h)
      fail(ErrorCode::StencilHitsSingularity,
           "finite-difference stencil reaches a singular locus");
  }
  BiQuat acc{};
  for (int i = 0; i < st.count; ++i)
    acc += f(shifted(p, axis, st.offsets[i] * h)) * st.weights[i];
  const double scale = st.hpow == 1 ? h : h * h;
  return acc * (1.0 / scale);
}

void require_fd_point(const QField& f, const EvalPoint& p) {
  if (!p.all_real())
    fail(ErrorCode::BadParameters,
         "finite differences step along the real axes only; "
         "coordinates must be real");
  (void)f;
}

// All four first partials, exact on polynomial representations.
std::array<BiQuat, 4> partials(const QField& f, const EvalPoint& p,
                               const FdScheme& scheme) {
  std::array<BiQuat, 4> d;
  if (const auto& poly = f.poly_rep()) {
    for (int axis = 0; axis < 4; ++axis)
      d[axis] = poly->partial(axis).eval(p);
    return d;
  }
  require_fd_point(f, p);
  const Stencil& st = first_derivative(scheme.order);
  const double h = effective_step(scheme, p);
  for (int axis = 0; axis < 4; ++axis) d[axis] = fd_axis(f, p, axis, st, h);
  return d;
}

BiQuat combine(OperatorId op, const std::array<BiQuat, 4>& d) {
  const bool right = op == OperatorId::DTilde ||
                     op == OperatorId::DTildeSharp ||
                     op == OperatorId::DHTilde ||
                     op == OperatorId::DHTildeSharp;
  const bool sharp = op == OperatorId::DSharp ||
                     op == OperatorId::DTildeSharp ||
                     op == OperatorId::DHSharp ||
                     op == OperatorId::DHTildeSharp;
  const bool hermitian = op == OperatorId::DH || op == OperatorId::DHSharp ||
                         op == OperatorId::DHTilde ||
                         op == OperatorId::DHTildeSharp;
  BiQuat vec{};
  for (int m = 1; m <= 3; ++m) {
    const BiQuat e = BiQuat::unit(m);
    vec += right ? d[m] * e : e * d[m];
  }
  Complex factor = sharp ? -1.0 : 1.0;
  if (hermitian) factor *= Complex(0.0, 1.0);
  return d[0] + vec * factor;
}

}  // namespace

const char* to_string(OperatorId op) {
  switch (op) {
    case OperatorId::D: return "D";
    case OperatorId::DSharp: return "D#";
    case OperatorId::DTilde: return "D~";
    case OperatorId::DTildeSharp: return "D~#";
    case OperatorId::DH: return "D_H";
    case OperatorId::DHSharp: return "D_H#";
    case OperatorId::DHTilde: return "D~_H";
    case OperatorId::DHTildeSharp: return "D~_H#";
  }
  return "?";
}

OperatorId operator_for(Regularity variant) {
  switch (variant) {
    case Regularity::Left: return OperatorId::D;
    case Regularity::ConjLeft: return OperatorId::DSharp;
    case Regularity::Right: return OperatorId::DTilde;
    case Regularity::ConjRight: return OperatorId::DTildeSharp;
    case Regularity::BiLeft: return OperatorId::DH;
    case Regularity::BiConjLeft: return OperatorId::DHSharp;
    case Regularity::BiRight: return OperatorId::DHTilde;
    case Regularity::BiConjRight: return OperatorId::DHTildeSharp;
    case Regularity::None: break;
  }
  fail(ErrorCode::BadParameters, "no operator for the 'none' variant");
}

BiQuat apply_operator(OperatorId op, const QField& f, const EvalPoint& p,
                      const FdScheme& scheme) {
  return combine(op, partials(f, p, scheme));
}

double regularity_residual(const QField& f, const EvalPoint& p,
                           Regularity variant, const FdScheme& scheme) {
  const BiQuat v = apply_operator(operator_for(variant), f, p, scheme);
  double s = 0;
  for (double c : v.components()) s += c * c;
  return std::sqrt(s);
}

namespace {

BiQuat second_order_sum(const QField& f, const EvalPoint& p,
                        const FdScheme& scheme, const double (&signs)[4]) {
  if (const auto& poly = f.poly_rep()) {
    BiQuat acc{};
    for (int axis = 0; axis < 4; ++axis)
      acc += poly->partial(axis).partial(axis).eval(p) * signs[axis];
    return acc;
  }
  require_fd_point(f, p);
  const Stencil& st = second_derivative(scheme.order);
  const double h = effective_step(scheme, p);
  BiQuat acc{};
  for (int axis = 0; axis < 4; ++axis)
    acc += fd_axis(f, p, axis, st, h) * signs[axis];
  return acc;
}

}  // namespace

BiQuat laplace4(const QField& f, const EvalPoint& p, const FdScheme& scheme) {
  return second_order_sum(f, p, scheme, {1.0, 1.0, 1.0, 1.0});
}

BiQuat wave_op(const QField& f, const EvalPoint& p, const FdScheme& scheme) {
  return second_order_sum(f, p, scheme, {1.0, -1.0, -1.0, -1.0});
}

BiQuat derivative_regular(const QField& f, const EvalPoint& p,
                          const FdScheme& scheme) {
  const auto d = partials(f, p, scheme);
  BiQuat nabla{};
  for (int m = 1; m <= 3; ++m) nabla += BiQuat::unit(m) * d[m];
  const BiQuat alt = -d[0];
  const double scale =
      std::max({1.0, nabla.max_abs(), alt.max_abs()});
  if (nabla.dist(alt) > 10.0 * scheme.agreement_tol * scale)
    fail(ErrorCode::NotRegularHere,
         "vector derivative and -d_w estimate disagree; "
         "the field is not left-regular here");
  return nabla;
}

}  // namespace qcl
