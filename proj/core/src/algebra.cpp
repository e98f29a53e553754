#include "qcl/algebra.hpp"

#include <algorithm>
#include <sstream>

namespace qcl {

const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonInvertible: return "NonInvertible";
    case ErrorCode::NullDisplacement: return "NullDisplacement";
    case ErrorCode::NotUnitNorm: return "NotUnitNorm";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotSpatial: return "NotSpatial";
    case ErrorCode::OnSingularLocus: return "OnSingularLocus";
    case ErrorCode::ConvergenceDomain: return "ConvergenceDomain";
    case ErrorCode::StencilHitsSingularity: return "StencilHitsSingularity";
    case ErrorCode::NotRegularHere: return "NotRegularHere";
    case ErrorCode::DegenerateJacobian: return "DegenerateJacobian";
    case ErrorCode::SingularityOnSurface: return "SingularityOnSurface";
    case ErrorCode::BadParameters: return "BadParameters";
    case ErrorCode::BadGeometry: return "BadGeometry";
    case ErrorCode::OrderMismatch: return "OrderMismatch";
    case ErrorCode::BranchJump: return "BranchJump";
    case ErrorCode::RegularityViolation: return "RegularityViolation";
  }
  return "UnknownError";
}

BiQuat BiQuat::unit(int axis) {
  BiQuat e;
  switch (axis) {
    case 0: e.w = 1.0; break;
    case 1: e.x = 1.0; break;
    case 2: e.y = 1.0; break;
    case 3: e.z = 1.0; break;
    default: fail(ErrorCode::BadParameters, "basis axis must be 0..3");
  }
  return e;
}

double BiQuat::max_abs() const {
  return std::max(std::max(std::abs(w), std::abs(x)),
                  std::max(std::abs(y), std::abs(z)));
}

double BiQuat::dist(const BiQuat& o) const {
  return (*this - o).max_abs();
}

bool BiQuat::is_hermitian(double tol) const {
  // q# = q*: scalar part real, vector part purely imaginary.
  return std::abs(w.imag()) <= tol && std::abs(x.real()) <= tol &&
         std::abs(y.real()) <= tol && std::abs(z.real()) <= tol;
}

BiQuat operator*(const BiQuat& a, const BiQuat& b) {
  // (a_w + abar)(b_w + bbar) = a_w b_w - abar.bbar
  //                          + a_w bbar + b_w abar + abar x bbar
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y + a.y * b.w + a.z * b.x - a.x * b.z,
          a.w * b.z + a.z * b.w + a.x * b.y - a.y * b.x};
}

BiQuat inverse(const BiQuat& a) {
  const Complex n = norm2(a);
  const double scale = a.max_abs();
  if (std::abs(n) < 1e-12 * scale * scale || scale == 0.0)
    fail(ErrorCode::NonInvertible,
         "norm2 " + std::to_string(std::abs(n)) + " degenerate at scale " +
             std::to_string(scale));
  return qconj(a) * (1.0 / n);
}

BiQuat PolarQuat::reconstruct() const {
  const double c = std::cos(theta), s = std::sin(theta);
  return {r * c, r * s * axis.x, r * s * axis.y, r * s * axis.z};
}

PolarQuat polar(const BiQuat& a) {
  if (!a.is_quaternion())
    fail(ErrorCode::BadParameters, "polar form requires a real quaternion");
  const double w = a.w.real();
  const Vec3 v{a.x.real(), a.y.real(), a.z.real()};
  const double vn = v.norm();
  const double r = std::sqrt(w * w + vn * vn);
  if (r == 0.0) fail(ErrorCode::BadParameters, "polar form of zero");
  PolarQuat p;
  p.r = r;
  p.theta = std::atan2(vn, w);
  // Degenerate (pure scalar) input: canonical axis I.
  p.axis = vn > 0.0 ? v * (1.0 / vn) : Vec3{1, 0, 0};
  return p;
}

BiQuat PolarHermitian::reconstruct() const {
  const double s = std::sinh(theta), c = std::cosh(theta);
  const double sc = kind == Kind::Timelike ? c : s;
  const double vc = kind == Kind::Timelike ? s : c;
  const Complex iv(0.0, r * vc);
  return {r * sc, iv * axis.x, iv * axis.y, iv * axis.z};
}

PolarHermitian polar_h(const BiQuat& p) {
  const double scale = p.max_abs();
  if (scale == 0.0 || !p.is_hermitian(1e-10 * scale))
    fail(ErrorCode::NotHermitian, "polar_h requires a Hermitian biquaternion");
  const double t = p.w.real();
  const Vec3 v{p.x.imag(), p.y.imag(), p.z.imag()};
  const double vn = v.norm();
  const double interval = t * t - vn * vn;  // norm2 restricted to Hermitians
  if (std::abs(interval) < 1e-12 * scale * scale)
    fail(ErrorCode::NullDisplacement, "null Hermitian biquaternion");
  PolarHermitian out;
  if (interval > 0.0) {
    out.kind = PolarHermitian::Kind::Timelike;
    const double r = (t >= 0.0 ? 1.0 : -1.0) * std::sqrt(interval);
    out.r = r;
    out.theta = std::atanh(vn / std::abs(t));
    out.axis = vn > 0.0 ? v * (1.0 / (r * std::sinh(out.theta)))
                        : Vec3{1, 0, 0};
  } else {
    out.kind = PolarHermitian::Kind::Spacelike;
    const double r =
        (t != 0.0 ? (t >= 0.0 ? 1.0 : -1.0) : 1.0) * std::sqrt(-interval);
    out.r = r;
    out.theta = std::atanh(std::abs(t) / vn);
    out.axis = v * (1.0 / (r * std::cosh(out.theta)));
  }
  return out;
}

BiQuat lorentz(const BiQuat& p, const BiQuat& q) {
  const double scale = std::max(p.max_abs(), 1.0);
  if (!p.is_hermitian(1e-10 * scale))
    fail(ErrorCode::NotHermitian, "lorentz operand p must be Hermitian");
  if (std::abs(norm2(q) - 1.0) > 1e-10)
    fail(ErrorCode::NotUnitNorm, "lorentz transform q must have norm2 == 1");
  return q * p * hconj(q);
}

BiQuat rotate(const BiQuat& p, double theta, const Vec3& axis) {
  const double an = axis.norm();
  if (an == 0.0) fail(ErrorCode::BadParameters, "rotation axis must be nonzero");
  const Vec3 n = axis * (1.0 / an);
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const BiQuat u{c, s * n.x, s * n.y, s * n.z};
  return u * p * qconj(u);
}

std::string to_string(const BiQuat& a) {
  std::ostringstream os;
  os.precision(17);
  auto coord = [&os](Complex c, const char* suffix) {
    os << "(" << c.real();
    if (c.imag() != 0.0) os << (c.imag() < 0 ? "" : "+") << c.imag() << "i";
    os << ")" << suffix;
  };
  coord(a.w, " + ");
  coord(a.x, "I + ");
  coord(a.y, "J + ");
  coord(a.z, "K");
  return os.str();
}

}  // namespace qcl
