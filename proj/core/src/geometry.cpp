#include "qcl/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <limits>
#include <thread>

namespace qcl {

namespace {

double pget(const Point4& p, int i) { return (&p.w)[i]; }

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Raw cofactor vector N of the Jacobian: N is orthogonal to all three
// tangents and (N, t1, t2, t3) is positively oriented in R^4.
BiQuat raw_cofactors(const Jac43& J) {
  auto det3 = [&](int a, int b, int c) {
    const auto& d = J.d;
    return d[a][0] * (d[b][1] * d[c][2] - d[c][1] * d[b][2]) -
           d[b][0] * (d[a][1] * d[c][2] - d[c][1] * d[a][2]) +
           d[c][0] * (d[a][1] * d[b][2] - d[b][1] * d[a][2]);
  };
  return {det3(1, 2, 3), -det3(0, 2, 3), det3(0, 1, 3), -det3(0, 1, 2)};
}

double jac_scale(const Jac43& J) {
  double s = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j) s = std::max(s, std::abs(J.d[i][j]));
  return s;
}

// Flip the raw cofactor direction outward from an interior point, probing
// only parameter values where the patch is real.
double outward_sign(const Patch& p, const Point4& interior,
                    const std::array<double, 3>& probe) {
  const Jac43 J = p.jac(probe[0], probe[1], probe[2]);
  const BiQuat n = raw_cofactors(J);
  const EvalPoint q = p.pos(probe[0], probe[1], probe[2]);
  double s = 0;
  double mag = 0;
  for (int i = 0; i < 4; ++i) {
    const double ni = n[i].real();
    s += ni * ((&q.w)[i].real() - pget(interior, i));
    mag += ni * ni;
  }
  if (!(mag > 0) || std::abs(s) < 1e-12 * std::sqrt(mag))
    fail(ErrorCode::BadGeometry, "cannot orient patch outward");
  return s > 0 ? 1.0 : -1.0;
}

void orient_outward(Patch& p, const Point4& interior,
                    std::array<double, 3> probe = {0.5, 0.3, 0.15}) {
  p.orient = outward_sign(p, interior, probe);
}

// Unit vector on the 2-sphere, parametrized by u2 -> c = cos(theta) and
// u3 -> phi, with derivatives.  Gauss-Legendre in c integrates the
// polynomial theta-moments exactly; uniform phi nodes handle the azimuth.
struct Ang {
  double n[3];
  double d2[3];
  double d3[3];
};

Ang angular(double u2, double u3) {
  const double c = 2.0 * u2 - 1.0;
  const double s2 = 1.0 - c * c;
  if (s2 <= 0.0)
    fail(ErrorCode::DegenerateJacobian, "angular chart degenerates at c=+-1");
  const double s = std::sqrt(s2);
  const double phi = 2.0 * kPi * u3;
  const double cp = std::cos(phi), sp = std::sin(phi);
  Ang a;
  a.n[0] = s * cp;
  a.n[1] = s * sp;
  a.n[2] = c;
  const double ds = -c / s * 2.0;  // d s / d u2
  a.d2[0] = ds * cp;
  a.d2[1] = ds * sp;
  a.d2[2] = 2.0;
  a.d3[0] = -s * sp * 2.0 * kPi;
  a.d3[1] = s * cp * 2.0 * kPi;
  a.d3[2] = 0.0;
  return a;
}

// Complex 1D path segment on u in [0,1].
struct CSeg {
  std::function<Complex(double)> f;
  std::function<Complex(double)> df;
  bool real = false;
};

CSeg line_seg(Complex a, Complex b) {
  CSeg s;
  s.f = [a, b](double u) { return a + (b - a) * u; };
  s.df = [a, b](double) { return b - a; };
  s.real = a.imag() == 0 && b.imag() == 0;
  return s;
}

// Real segment from -t1 to t1 graded by t = w*sinh(a*v): nodes cluster on
// the scale w around t = 0, where a kernel singular on the axis peaks.  The
// grading is odd, so node/weight symmetry in t is preserved.
CSeg sinh_seg(double t1, double w) {
  const double al = std::asinh(t1 / w);
  CSeg s;
  s.f = [=](double u) { return Complex(w * std::sinh(al * (2.0 * u - 1.0))); };
  s.df = [=](double u) {
    return Complex(2.0 * al * w * std::cosh(al * (2.0 * u - 1.0)));
  };
  s.real = true;
  return s;
}

CSeg arc_seg(double center, double radius, double th0, double th1) {
  CSeg s;
  s.f = [=](double u) {
    const double th = th0 + (th1 - th0) * u;
    return center + radius * std::exp(Complex(0, th));
  };
  s.df = [=](double u) {
    const double th = th0 + (th1 - th0) * u;
    return radius * Complex(0, 1) * std::exp(Complex(0, th)) * (th1 - th0);
  };
  return s;
}

// Sphere-of-radius-path extruded patch: spatial position center + g(u1) * n,
// fourth coordinate fixed at tval.  Used by prism caps (g real linear) and
// the wide-prism deformed caps (g a complex radial path).
Patch radial_cap_patch(const Point4& center, double tval, const CSeg& g,
                       const std::array<int, 3>& sp, int taxis) {
  Patch p;
  p.periodic = {false, false, true};
  p.pos = [=](double u1, double u2, double u3) {
    const Ang a = angular(u2, u3);
    const Complex r = g.f(u1);
    EvalPoint q;
    (&q.w)[taxis] = Complex(pget(center, taxis) + tval);
    for (int k = 0; k < 3; ++k)
      (&q.w)[sp[k]] = pget(center, sp[k]) + r * a.n[k];
    return q;
  };
  p.jac = [=](double u1, double u2, double u3) {
    const Ang a = angular(u2, u3);
    const Complex r = g.f(u1);
    const Complex dr = g.df(u1);
    Jac43 J;
    for (int k = 0; k < 3; ++k) {
      J.d[sp[k]][0] = dr * a.n[k];
      J.d[sp[k]][1] = r * a.d2[k];
      J.d[sp[k]][2] = r * a.d3[k];
    }
    return J;
  };
  return p;
}

// Extruded wall patch: spatial 2-sphere of radius rho, extrusion coordinate
// following the (possibly complex) path g.
Patch wall_patch(const Point4& center, double rho, const CSeg& g,
                 const std::array<int, 3>& sp, int taxis) {
  Patch p;
  p.periodic = {false, false, true};
  p.pos = [=](double u1, double u2, double u3) {
    const Ang a = angular(u2, u3);
    EvalPoint q;
    (&q.w)[taxis] = pget(center, taxis) + g.f(u1);
    for (int k = 0; k < 3; ++k)
      (&q.w)[sp[k]] = Complex(pget(center, sp[k]) + rho * a.n[k]);
    return q;
  };
  p.jac = [=](double u1, double u2, double u3) {
    const Ang a = angular(u2, u3);
    Jac43 J;
    J.d[taxis][0] = g.df(u1);
    for (int k = 0; k < 3; ++k) {
      J.d[sp[k]][1] = rho * a.d2[k];
      J.d[sp[k]][2] = rho * a.d3[k];
    }
    return J;
  };
  return p;
}

std::array<int, 3> spatial_axes(int taxis) {
  std::array<int, 3> sp{};
  int k = 0;
  for (int i = 0; i < 4; ++i)
    if (i != taxis) sp[k++] = i;
  return sp;
}

}  // namespace

const char* to_string(FormKind k) {
  switch (k) {
    case FormKind::Sq: return "Sq";
    case FormKind::SqSharp: return "Sq#";
    case FormKind::SH: return "SH";
    case FormKind::SHSharp: return "SH#";
  }
  return "?";
}

BiQuat pullback_form(const Patch& p, double u1, double u2, double u3,
                     FormKind kind) {
  const Jac43 J = p.jac(u1, u2, u3);
  BiQuat n = raw_cofactors(J);
  const double s = jac_scale(J);
  if (s == 0.0 || n.max_abs() < 1e-13 * s * s * s)
    fail(ErrorCode::DegenerateJacobian, "patch Jacobian has rank < 3");
  n = n * p.orient;
  const Complex i1(0.0, 1.0);
  switch (kind) {
    case FormKind::Sq:
      return n;
    case FormKind::SqSharp:
      return qconj(n);
    case FormKind::SH:
      return {n.w, i1 * n.x, i1 * n.y, i1 * n.z};
    case FormKind::SHSharp:
      return {n.w, -i1 * n.x, -i1 * n.y, -i1 * n.z};
  }
  return n;
}

// ---------------------------------------------------------------------------
// Surface constructors
// ---------------------------------------------------------------------------

Surface sphere3(const Point4& center, double radius) {
  if (radius <= 0) fail(ErrorCode::BadParameters, "sphere radius");
  Patch p;
  p.label = "sphere";
  p.periodic = {false, false, true};
  p.pos = [=](double u1, double u2, double u3) {
    const double chi = kPi * u1;
    const Ang a = angular(u2, u3);
    const double rr = radius * std::sin(chi);
    EvalPoint q;
    q.w = center.w + radius * std::cos(chi);
    q.x = center.x + rr * a.n[0];
    q.y = center.y + rr * a.n[1];
    q.z = center.z + rr * a.n[2];
    return q;
  };
  p.jac = [=](double u1, double u2, double u3) {
    const double chi = kPi * u1;
    const Ang a = angular(u2, u3);
    const double rr = radius * std::sin(chi);
    const double drr = radius * std::cos(chi) * kPi;
    Jac43 J;
    J.d[0][0] = -radius * std::sin(chi) * kPi;
    for (int k = 0; k < 3; ++k) {
      J.d[k + 1][0] = drr * a.n[k];
      J.d[k + 1][1] = rr * a.d2[k];
      J.d[k + 1][2] = rr * a.d3[k];
    }
    return J;
  };
  orient_outward(p, center);
  Surface s;
  s.desc.kind = SurfaceDescriptor::Kind::Sphere3;
  s.desc.center = center;
  s.desc.radius = radius;
  s.patches.push_back(std::move(p));
  return s;
}

Surface hyperbox(const Point4& center, const std::array<double, 4>& halfw) {
  for (double h : halfw)
    if (h <= 0) fail(ErrorCode::BadParameters, "hyperbox halfwidth");
  Surface s;
  s.desc.kind = SurfaceDescriptor::Kind::HyperBox;
  s.desc.center = center;
  s.desc.halfw = halfw;
  for (int mu = 0; mu < 4; ++mu) {
    const auto sp = spatial_axes(mu);
    for (int sign = -1; sign <= 1; sign += 2) {
      Patch p;
      p.label = std::string("face") + (sign > 0 ? "+" : "-") + "wxyz"[mu];
      p.pos = [=](double u1, double u2, double u3) {
        const double u[3] = {u1, u2, u3};
        EvalPoint q;
        (&q.w)[mu] = Complex(pget(center, mu) + sign * halfw[mu]);
        for (int k = 0; k < 3; ++k)
          (&q.w)[sp[k]] =
              Complex(pget(center, sp[k]) + halfw[sp[k]] * (2 * u[k] - 1));
        return q;
      };
      p.jac = [=](double, double, double) {
        Jac43 J;
        for (int k = 0; k < 3; ++k) J.d[sp[k]][k] = 2 * halfw[sp[k]];
        return J;
      };
      orient_outward(p, center);
      s.patches.push_back(std::move(p));
    }
  }
  return s;
}

Surface prism(const Point4& center, double rho, double t1, int axis) {
  if (rho <= 0 || t1 <= 0) fail(ErrorCode::BadParameters, "prism dimensions");
  if (axis < 0 || axis > 3) fail(ErrorCode::BadParameters, "prism axis");
  const auto sp = spatial_axes(axis);
  Surface s;
  s.desc.kind = SurfaceDescriptor::Kind::Prism;
  s.desc.center = center;
  s.desc.rho = rho;
  s.desc.t1 = t1;
  s.desc.axis = axis;

  Patch wall = wall_patch(center, rho, sinh_seg(t1, rho), sp, axis);
  wall.label = "wall";
  orient_outward(wall, center);
  s.patches.push_back(std::move(wall));

  for (int sign = -1; sign <= 1; sign += 2) {
    Patch cap =
        radial_cap_patch(center, sign * t1, line_seg(0.0, rho), sp, axis);
    cap.label = sign > 0 ? "cap+" : "cap-";
    orient_outward(cap, center);
    s.patches.push_back(std::move(cap));
  }
  return s;
}

Surface deformed_prism(const Point4& center, double rho, double eps,
                       double t1, DetourRule rule) {
  if (rho <= 0) fail(ErrorCode::BadParameters, "prism radius");
  if (eps <= 0 || eps >= 0.5 * rho)
    fail(ErrorCode::BadParameters, "detour radius must lie in (0, rho/2)");
  if (t1 <= rho + 2 * eps)
    fail(ErrorCode::BadParameters, "prism half-length must exceed rho + 2*eps");
  const int axis = 0;
  const auto sp = spatial_axes(axis);
  const bool plus = rule == DetourRule::IncludePlus;

  // Included poles are rounded below the real axis (upper-half-plane
  // closure), excluded poles above.
  std::vector<CSeg> path;
  path.push_back(line_seg(-t1, -rho - eps));
  path.push_back(plus ? arc_seg(-rho, eps, kPi, 0.0)        // exclude -rho
                      : arc_seg(-rho, eps, kPi, 2 * kPi));  // include -rho
  path.push_back(line_seg(-rho + eps, rho - eps));
  path.push_back(plus ? arc_seg(rho, eps, kPi, 2 * kPi)  // include +rho
                      : arc_seg(rho, eps, kPi, 0.0));    // exclude +rho
  path.push_back(line_seg(rho + eps, t1));

  Surface s;
  s.desc.kind = SurfaceDescriptor::Kind::DeformedPrism;
  s.desc.center = center;
  s.desc.rho = rho;
  s.desc.t1 = t1;
  s.desc.eps = eps;
  s.desc.rule = rule;

  // One orientation sign serves the whole wall: the patches continue each
  // other in u1, so the cofactor direction cannot flip between them.
  Patch probe = wall_patch(center, rho, path.front(), sp, axis);
  const double wall_orient = outward_sign(probe, center, {0.5, 0.3, 0.15});
  int idx = 0;
  for (const auto& seg : path) {
    Patch w = wall_patch(center, rho, seg, sp, axis);
    w.orient = wall_orient;
    w.label = "wall" + std::to_string(idx++);
    s.patches.push_back(std::move(w));
  }
  for (int sign = -1; sign <= 1; sign += 2) {
    Patch cap =
        radial_cap_patch(center, sign * t1, line_seg(0.0, rho), sp, axis);
    cap.label = sign > 0 ? "cap+" : "cap-";
    orient_outward(cap, center);
    s.patches.push_back(std::move(cap));
  }
  return s;
}

Surface wide_prism(const Point4& center, double rho, double eps, double t1,
                   DetourRule rule) {
  if (t1 <= 0) fail(ErrorCode::BadParameters, "prism half-length");
  if (eps <= 0 || eps >= 0.5 * std::min(t1, rho - t1))
    fail(ErrorCode::BadParameters,
         "detour radius must lie in (0, min(t1, rho - t1)/2)");
  if (rho <= t1 + 2 * eps)
    fail(ErrorCode::BadParameters, "wide prism requires rho > t1 + 2*eps");
  const int axis = 0;
  const auto sp = spatial_axes(axis);
  const bool plus = rule == DetourRule::IncludePlus;

  Surface s;
  s.desc.kind = SurfaceDescriptor::Kind::WidePrism;
  s.desc.center = center;
  s.desc.rho = rho;
  s.desc.t1 = t1;
  s.desc.eps = eps;
  s.desc.rule = rule;

  Patch wall = wall_patch(center, rho, line_seg(-t1, t1), sp, axis);
  wall.label = "wall";
  orient_outward(wall, center);
  s.patches.push_back(std::move(wall));

  // The cap's radial coordinate crosses the light cone at r = t1; detour
  // above it for IncludePlus, below for IncludeMinus (this matches the side
  // the narrow route's time contour induces on the shared branch cuts).
  std::vector<CSeg> rpath;
  rpath.push_back(line_seg(0.0, t1 - eps));
  rpath.push_back(arc_seg(t1, eps, kPi, plus ? 0.0 : 2 * kPi));
  rpath.push_back(line_seg(t1 + eps, rho));

  for (int sign = -1; sign <= 1; sign += 2) {
    Patch probe = radial_cap_patch(center, sign * t1, rpath.back(), sp, axis);
    const double cap_orient = outward_sign(probe, center, {0.5, 0.3, 0.15});
    int idx = 0;
    for (const auto& seg : rpath) {
      Patch cap = radial_cap_patch(center, sign * t1, seg, sp, axis);
      cap.orient = cap_orient;
      cap.label = std::string(sign > 0 ? "cap+" : "cap-") +
                  std::to_string(idx++);
      s.patches.push_back(std::move(cap));
    }
  }
  return s;
}

Surface capped_sphere(const Point4& center, double radius, double delta) {
  if (radius <= 0) fail(ErrorCode::BadParameters, "sphere radius");
  if (delta <= 0 || delta >= 0.5 * kPi)
    fail(ErrorCode::BadParameters, "cap half-width must lie in (0, pi/2)");
  Surface s;
  s.desc.kind = SurfaceDescriptor::Kind::CappedSphere;
  s.desc.center = center;
  s.desc.radius = radius;
  s.desc.delta = delta;

  Patch zone;
  zone.label = "zone";
  zone.periodic = {false, false, true};
  zone.pos = [=](double u1, double u2, double u3) {
    const double chi = delta + (kPi - 2 * delta) * u1;
    const Ang a = angular(u2, u3);
    const double rr = radius * std::sin(chi);
    EvalPoint q;
    q.w = center.w + radius * std::cos(chi);
    q.x = center.x + rr * a.n[0];
    q.y = center.y + rr * a.n[1];
    q.z = center.z + rr * a.n[2];
    return q;
  };
  zone.jac = [=](double u1, double u2, double u3) {
    const double chi = delta + (kPi - 2 * delta) * u1;
    const double dchi = kPi - 2 * delta;
    const Ang a = angular(u2, u3);
    const double rr = radius * std::sin(chi);
    const double drr = radius * std::cos(chi) * dchi;
    Jac43 J;
    J.d[0][0] = -radius * std::sin(chi) * dchi;
    for (int k = 0; k < 3; ++k) {
      J.d[k + 1][0] = drr * a.n[k];
      J.d[k + 1][1] = rr * a.d2[k];
      J.d[k + 1][2] = rr * a.d3[k];
    }
    return J;
  };
  orient_outward(zone, center);
  s.patches.push_back(std::move(zone));

  const double wd = radius * std::cos(delta);
  const double rd = radius * std::sin(delta);
  const auto sp = spatial_axes(0);
  for (int sign = -1; sign <= 1; sign += 2) {
    Patch cap = radial_cap_patch(center, sign * wd, line_seg(0.0, rd), sp, 0);
    cap.label = sign > 0 ? "disk+" : "disk-";
    orient_outward(cap, center);
    s.patches.push_back(std::move(cap));
  }
  return s;
}

double SurfaceDescriptor::extent_t1() const {
  if (t1 > 0) return t1;
  switch (kind) {
    case Kind::Prism: return 6.0 * rho;
    case Kind::DeformedPrism: return 4.0 * rho;
    case Kind::WidePrism: return rho / 3.0;
    default: return 0.0;
  }
}

bool SurfaceDescriptor::encloses(const Point4& p) const {
  const Point4 d = p - center;
  switch (kind) {
    case Kind::Sphere3:
      return d.norm() < radius;
    case Kind::CappedSphere:
      return d.norm() < radius && std::abs(d.w) < radius * std::cos(delta);
    case Kind::HyperBox:
      for (int i = 0; i < 4; ++i)
        if (std::abs(pget(d, i)) >= halfw[std::size_t(i)]) return false;
      return true;
    case Kind::Prism:
    case Kind::DeformedPrism:
    case Kind::WidePrism: {
      const int ax = kind == Kind::Prism ? axis : 0;
      double r2 = 0;
      for (int i = 0; i < 4; ++i)
        if (i != ax) r2 += pget(d, i) * pget(d, i);
      return std::sqrt(r2) < rho && std::abs(pget(d, ax)) < extent_t1();
    }
  }
  return false;
}

Surface make_surface(const SurfaceDescriptor& desc) {
  switch (desc.kind) {
    case SurfaceDescriptor::Kind::Sphere3:
      return sphere3(desc.center, desc.radius);
    case SurfaceDescriptor::Kind::HyperBox:
      return hyperbox(desc.center, desc.halfw);
    case SurfaceDescriptor::Kind::Prism:
      return prism(desc.center, desc.rho, desc.extent_t1(), desc.axis);
    case SurfaceDescriptor::Kind::DeformedPrism:
      return deformed_prism(desc.center, desc.rho, desc.eps, desc.extent_t1(),
                            desc.rule);
    case SurfaceDescriptor::Kind::WidePrism:
      return wide_prism(desc.center, desc.rho, desc.eps, desc.extent_t1(),
                        desc.rule);
    case SurfaceDescriptor::Kind::CappedSphere:
      return capped_sphere(desc.center, desc.radius, desc.delta);
  }
  fail(ErrorCode::BadParameters, "unknown surface kind");
}

// ---------------------------------------------------------------------------
// Descriptor text form
// ---------------------------------------------------------------------------

namespace {

const char* kind_name(SurfaceDescriptor::Kind k) {
  switch (k) {
    case SurfaceDescriptor::Kind::Sphere3: return "sphere";
    case SurfaceDescriptor::Kind::HyperBox: return "box";
    case SurfaceDescriptor::Kind::Prism: return "prism";
    case SurfaceDescriptor::Kind::DeformedPrism: return "dprism";
    case SurfaceDescriptor::Kind::WidePrism: return "wprism";
    case SurfaceDescriptor::Kind::CappedSphere: return "csphere";
  }
  return "?";
}

}  // namespace

std::string SurfaceDescriptor::to_string() const {
  std::string out = kind_name(kind);
  out += ":";
  auto kv = [&](const char* k, double v) {
    out += k;
    out += "=";
    out += fmt_double(v);
    out += ",";
  };
  switch (kind) {
    case Kind::Sphere3:
      kv("r", radius);
      break;
    case Kind::CappedSphere:
      kv("r", radius);
      kv("delta", delta);
      break;
    case Kind::HyperBox:
      kv("hw", halfw[0]);
      kv("hx", halfw[1]);
      kv("hy", halfw[2]);
      kv("hz", halfw[3]);
      break;
    case Kind::Prism:
      kv("rho", rho);
      kv("t1", t1);
      out += "axis=" + std::to_string(axis) + ",";
      break;
    case Kind::DeformedPrism:
    case Kind::WidePrism:
      kv("rho", rho);
      kv("t1", t1);
      kv("eps", eps);
      out += rule == DetourRule::IncludePlus ? "rule=plus," : "rule=minus,";
      break;
  }
  kv("cw", center.w);
  kv("cx", center.x);
  kv("cy", center.y);
  kv("cz", center.z);
  out.pop_back();  // trailing comma
  return out;
}

SurfaceDescriptor SurfaceDescriptor::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind_str = text.substr(0, colon);
  SurfaceDescriptor d;
  if (kind_str == "sphere") d.kind = Kind::Sphere3;
  else if (kind_str == "box") d.kind = Kind::HyperBox;
  else if (kind_str == "prism") d.kind = Kind::Prism;
  else if (kind_str == "dprism") d.kind = Kind::DeformedPrism;
  else if (kind_str == "wprism") d.kind = Kind::WidePrism;
  else if (kind_str == "csphere") d.kind = Kind::CappedSphere;
  else fail(ErrorCode::BadParameters, "unknown surface kind: " + kind_str);

  std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  std::size_t pos = 0;
  while (pos < rest.size()) {
    auto comma = rest.find(',', pos);
    if (comma == std::string::npos) comma = rest.size();
    const std::string pair = rest.substr(pos, comma - pos);
    pos = comma + 1;
    if (pair.empty()) continue;
    const auto eq = pair.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::BadParameters, "surface option needs k=v: " + pair);
    const std::string key = pair.substr(0, eq);
    const std::string val = pair.substr(eq + 1);
    auto num = [&] {
      char* end = nullptr;
      const double v = std::strtod(val.c_str(), &end);
      if (val.empty() || end != val.c_str() + val.size())
        fail(ErrorCode::BadParameters, "bad surface number: " + pair);
      return v;
    };
    if (key == "r") d.radius = num();
    else if (key == "h") d.halfw = {num(), num(), num(), num()};
    else if (key == "hw") d.halfw[0] = num();
    else if (key == "hx") d.halfw[1] = num();
    else if (key == "hy") d.halfw[2] = num();
    else if (key == "hz") d.halfw[3] = num();
    else if (key == "rho") d.rho = num();
    else if (key == "t1") d.t1 = num();
    else if (key == "eps") d.eps = num();
    else if (key == "delta") d.delta = num();
    else if (key == "axis") d.axis = int(num());
    else if (key == "cw") d.center.w = num();
    else if (key == "cx") d.center.x = num();
    else if (key == "cy") d.center.y = num();
    else if (key == "cz") d.center.z = num();
    else if (key == "rule")
      d.rule = val == "minus" ? DetourRule::IncludeMinus
             : val == "plus" ? DetourRule::IncludePlus
             : (fail(ErrorCode::BadParameters, "rule must be plus or minus"),
                DetourRule::IncludePlus);
    else fail(ErrorCode::BadParameters, "unknown surface option: " + key);
  }
  return d;
}

bool SurfaceDescriptor::operator==(const SurfaceDescriptor& o) const {
  return kind == o.kind && center.w == o.center.w && center.x == o.center.x &&
         center.y == o.center.y && center.z == o.center.z &&
         radius == o.radius && halfw == o.halfw && rho == o.rho &&
         t1 == o.t1 && axis == o.axis && eps == o.eps && delta == o.delta &&
         rule == o.rule;
}

// ---------------------------------------------------------------------------
// Sandwich quadrature
// ---------------------------------------------------------------------------

namespace {

struct BiKahan {
  KahanSum k[8];

  void add(const BiQuat& v) {
    const auto c = v.components();
    for (int i = 0; i < 8; ++i) k[i].add(c[i]);
  }
  BiQuat value() const {
    return {Complex(k[0].value(), k[1].value()),
            Complex(k[2].value(), k[3].value()),
            Complex(k[4].value(), k[5].value()),
            Complex(k[6].value(), k[7].value())};
  }
};

Rule1D axis_rule(const Patch& p, int axis, const QuadRule& rule) {
  return p.periodic[std::size_t(axis)]
             ? uniform_rule01(rule.nodes_azimuthal())
             : gl_rule01(rule.gl_order, rule.panels);
}

// Evaluate the u1 = const slice sum with a fixed inner order.
BiQuat slice_sum(const std::optional<QField>& left, FormKind kind,
                 const std::optional<QField>& right, const Patch& patch,
                 double u1, double w1, const Rule1D& r2, const Rule1D& r3) {
  BiKahan acc;
  for (std::size_t i2 = 0; i2 < r2.nodes.size(); ++i2) {
    for (std::size_t i3 = 0; i3 < r3.nodes.size(); ++i3) {
      const double u2 = r2.nodes[i2], u3 = r3.nodes[i3];
      const EvalPoint p = patch.pos(u1, u2, u3);
      const double scale = std::max(1.0, p.abs_scale());
      double cl = std::numeric_limits<double>::infinity();
      if (left) cl = std::min(cl, left->clearance(p));
      if (right) cl = std::min(cl, right->clearance(p));
      if (cl < 1e-7 * scale)
        fail(ErrorCode::SingularityOnSurface,
             "quadrature node within 1e-7 of a singular locus");
      BiQuat v = pullback_form(patch, u1, u2, u3, kind) *
                 (w1 * r2.weights[i2] * r3.weights[i3]);
      if (right) v = v * (*right)(p);
      if (left) v = (*left)(p)*v;
      acc.add(v);
    }
  }
  return acc.value();
}

}  // namespace

int max_threads() {
  if (const char* env = std::getenv("QCL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return int(std::min(v, 256L));
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? int(hc) : 1;
}

BiQuat integrate_sandwich(const std::optional<QField>& left, FormKind kind,
                          const std::optional<QField>& right,
                          const Surface& surface, const QuadRule& rule) {
  if (rule.gl_order < 1 || rule.panels < 1 || rule.nodes_azimuthal() < 4)
    fail(ErrorCode::BadParameters, "invalid quadrature rule");
  BiKahan total;
  for (const auto& patch : surface.patches) {
    const Rule1D r1 = axis_rule(patch, 0, rule);
    const Rule1D r2 = axis_rule(patch, 1, rule);
    const Rule1D r3 = axis_rule(patch, 2, rule);
    const std::size_t n1 = r1.nodes.size();
    std::vector<BiQuat> slices(n1);
    std::vector<std::exception_ptr> errors(n1);

    const int threads =
        std::max(1, std::min<int>(max_threads(), int(n1)));
    auto work = [&](int tid) {
      for (std::size_t i1 = std::size_t(tid); i1 < n1;
           i1 += std::size_t(threads)) {
        try {
          slices[i1] = slice_sum(left, kind, right, patch, r1.nodes[i1],
                                 r1.weights[i1], r2, r3);
        } catch (...) {
          errors[i1] = std::current_exception();
        }
      }
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(std::size_t(threads));
      for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
      for (auto& th : pool) th.join();
    }
    for (std::size_t i1 = 0; i1 < n1; ++i1)
      if (errors[i1]) std::rethrow_exception(errors[i1]);
    // Fixed-order reduction: identical result for any thread count.
    for (std::size_t i1 = 0; i1 < n1; ++i1) total.add(slices[i1]);
  }
  return total.value();
}

double surface_area(const Surface& surface, const QuadRule& rule) {
  KahanSum area;
  for (const auto& patch : surface.patches) {
    const Rule1D r1 = axis_rule(patch, 0, rule);
    const Rule1D r2 = axis_rule(patch, 1, rule);
    const Rule1D r3 = axis_rule(patch, 2, rule);
    for (std::size_t i1 = 0; i1 < r1.nodes.size(); ++i1)
      for (std::size_t i2 = 0; i2 < r2.nodes.size(); ++i2)
        for (std::size_t i3 = 0; i3 < r3.nodes.size(); ++i3) {
          const BiQuat n = pullback_form(patch, r1.nodes[i1], r2.nodes[i2],
                                         r3.nodes[i3], FormKind::Sq);
          double m = 0;
          for (int c = 0; c < 4; ++c) m += std::norm(n[c]);
          area.add(std::sqrt(m) * r1.weights[i1] * r2.weights[i2] *
                   r3.weights[i3]);
        }
  }
  return area.value();
}

}  // namespace qcl
