#include "qcl/theorems.hpp"

#include "qcl/operators.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <utility>

namespace qcl {

namespace {

const double kFueterConst = 2.0 * kPi * kPi;
const double kAltConst = 2.0 * kPi * kPi / 3.0;

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fmt_components(const BiQuat& q) {
  std::string out = "[";
  const auto c = q.components();
  for (int i = 0; i < 8; ++i) {
    if (i) out += ",";
    out += fmt_double(c[i]);
  }
  out += "]";
  return out;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') {
      out += '\\';
      out += ch;
    } else if (static_cast<unsigned char>(ch) < 0x20) {
      char buf[8];
      std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
      out += buf;
    } else {
      out += ch;
    }
  }
  return out;
}

struct Sandwich {
  std::optional<QField> left, right;
};

// Kernel (q - q0) / |q - q0|^4: the quaternion conjugate of FueterH, with
// the same point singularity.
QField fueter_plus(const Point4& q0) {
  Kernel k = Kernel::fueter_h(q0);
  return QField::wrap(
      [k](const EvalPoint& p) { return qconj(k.eval(p)); },
      Regularity::None, {k.locus()});
}

std::optional<Kernel> kernel_of(TheoremId t, const Point4& q0) {
  using T = TheoremId;
  switch (t) {
    case T::SandwichZero33:
    case T::Fueter32:
    case T::Fueter39:
    case T::Fueter40:
    case T::Fueter41:
      return Kernel::fueter_h(q0);
    case T::Alt48:
      return Kernel::alt_axis(1, q0);
    case T::Alt49:
      return Kernel::alt_axis(2, q0);
    case T::Alt50:
      return Kernel::alt_axis(3, q0);
    case T::Alt51:
      return Kernel::alt_axis(1, q0, true);
    case T::Alt52:
      return Kernel::alt_axis(1, q0);
    case T::Alt53:
      return Kernel::alt_axis(1, q0, true);
    case T::BiAlt71:
      return Kernel::bi_alt_axis(1, q0);
    case T::BiAlt72:
      return Kernel::bi_alt_axis(1, q0, true);
    case T::BiFueter74:
      return Kernel::bi_fueter(q0);
    default:
      return std::nullopt;
  }
}

Sandwich compose(TheoremId t, const QField& f, const Point4& q0) {
  using T = TheoremId;
  switch (t) {
    case T::Cauchy28:
    case T::CauchyConj:
    case T::BiCauchy61:
      return {std::nullopt, f};
    case T::CauchyRight:
    case T::CauchyRightConj:
      return {f, std::nullopt};
    case T::SandwichZero33:
    case T::Fueter32:
      return {QField::kernel(*kernel_of(t, q0)), f};
    case T::Fueter39:
      return {f, QField::kernel(*kernel_of(t, q0))};
    case T::Fueter40:
      return {fueter_plus(q0), f};
    case T::Fueter41:
      return {f, fueter_plus(q0)};
    case T::Alt48:
    case T::Alt49:
    case T::Alt50:
    case T::Alt51:
    case T::BiAlt71:
      return {std::nullopt,
              QField::product(QField::kernel(*kernel_of(t, q0)), f)};
    case T::Alt52:
    case T::Alt53:
    case T::BiAlt72:
      return {QField::product(f, QField::kernel(*kernel_of(t, q0))),
              std::nullopt};
    case T::BiFueter74:
      return {QField::kernel(*kernel_of(t, q0)), f};
  }
  fail(ErrorCode::BadParameters, "unknown theorem id");
}

// Does the surface's solid meet the kernel's singular locus?  The expected
// value is the theorem constant when it does, zero when fully excluded.
bool locus_enclosed(const SingularLocus& locus, const SurfaceDescriptor& d) {
  using K = SurfaceDescriptor::Kind;
  switch (locus.kind) {
    case SingularLocus::Kind::None:
      return false;
    case SingularLocus::Kind::Point:
    case SingularLocus::Kind::LightCone:
      return d.encloses(locus.q0);
    case SingularLocus::Kind::AxisLine:
    case SingularLocus::Kind::AxisLineAndCone: {
      // The locus line runs along the w/t axis through the spatial point.
      const Point4 rel = locus.q0 - d.center;
      const double sx = rel.x, sy = rel.y, sz = rel.z;
      const double spatial = std::sqrt(sx * sx + sy * sy + sz * sz);
      switch (d.kind) {
        case K::Sphere3:
        case K::CappedSphere:
          return spatial < d.radius;
        case K::HyperBox:
          return std::abs(sx) < d.halfw[1] && std::abs(sy) < d.halfw[2] &&
                 std::abs(sz) < d.halfw[3];
        case K::Prism:
          if (d.axis == 0) return spatial < d.rho;
          // Extruded along a spatial axis: the line must pierce the
          // (w + two spatial) ball within the extrusion range.
          {
            double planar2 = 0;
            for (int i = 1; i < 4; ++i) {
              const double ri = (&rel.w)[i];
              if (i == d.axis) {
                if (std::abs(ri) >= d.extent_t1()) return false;
              } else {
                planar2 += ri * ri;
              }
            }
            return std::sqrt(planar2) < d.rho;
          }
        case K::DeformedPrism:
        case K::WidePrism:
          return spatial < d.rho;
      }
      return false;
    }
  }
  return false;
}

double max_component_dist(const BiQuat& a, const BiQuat& b) {
  const auto ca = a.components(), cb = b.components();
  double m = 0;
  for (int i = 0; i < 8; ++i) m = std::max(m, std::abs(ca[i] - cb[i]));
  return m;
}

void check_regularity(TheoremId t, const QField& f,
                      const SurfaceDescriptor& surf, const RunOptions& opts) {
  const Regularity variant = required_regularity(t);
  double extent = 1.0;
  switch (surf.kind) {
    case SurfaceDescriptor::Kind::Sphere3:
    case SurfaceDescriptor::Kind::CappedSphere:
      extent = surf.radius;
      break;
    case SurfaceDescriptor::Kind::HyperBox:
      extent = *std::max_element(surf.halfw.begin(), surf.halfw.end());
      break;
    default:
      extent = std::max(surf.rho, surf.extent_t1());
      break;
  }
  std::mt19937 rng(opts.sample_seed);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  FdScheme scheme;
  int done = 0, attempts = 0;
  while (done < opts.regularity_samples && attempts < 20 * opts.regularity_samples) {
    ++attempts;
    Point4 p = surf.center;
    p.w += u(rng) * extent;
    p.x += u(rng) * extent;
    p.y += u(rng) * extent;
    p.z += u(rng) * extent;
    const EvalPoint ep = EvalPoint::at(p);
    if (f.clearance(ep) < 0.05 * std::max(1.0, ep.abs_scale())) continue;
    const double residual = regularity_residual(f, ep, variant, scheme);
    const double scale = std::max(1.0, f(ep).max_abs());
    if (residual > 1e-6 * scale)
      fail(ErrorCode::RegularityViolation,
           std::string("field is not ") + to_string(variant) +
               "-regular: residual " + fmt_double(residual) + " at w=" +
               fmt_double(p.w) + " x=" + fmt_double(p.x) + " y=" +
               fmt_double(p.y) + " z=" + fmt_double(p.z));
    ++done;
  }
}

// One-time numerical resolution of the BiFueter74 constant with f = 1.
struct Resolution {
  BiQuat constant;
  std::string note;
};

const Resolution& bi_fueter_resolution() {
  static const Resolution res = [] {
    const Point4 q0{};
    const QField one = QField::constant(BiQuat::scalar(1.0));
    const Sandwich sw = compose(TheoremId::BiFueter74, one, q0);
    const Surface s =
        make_surface(default_surface(TheoremId::BiFueter74, q0));
    const BiQuat v =
        integrate_sandwich(sw.left, FormKind::SH, sw.right, s, QuadRule{});
    const BiQuat scalar_c = BiQuat::scalar(kFueterConst);
    const BiQuat vector_c = BiQuat::unit(1) * kFueterConst;
    const double ds = v.dist(scalar_c), dv = v.dist(vector_c);
    Resolution r;
    if (ds <= dv) {
      r.constant = scalar_c;
      r.note = "constant resolved numerically with f = 1: 2*pi^2 (scalar), "
               "matching to " + fmt_double(ds) +
               "; the alternative 2*pi^2*I is off by " + fmt_double(dv);
    } else {
      r.constant = vector_c;
      r.note = "constant resolved numerically with f = 1: 2*pi^2*I, "
               "matching to " + fmt_double(dv) +
               "; the alternative 2*pi^2 (scalar) is off by " + fmt_double(ds);
    }
    return r;
  }();
  return res;
}

}  // namespace

const char* name(TheoremId t) {
  using T = TheoremId;
  switch (t) {
    case T::Cauchy28: return "cauchy28";
    case T::CauchyConj: return "cauchyConj";
    case T::CauchyRight: return "cauchyRight";
    case T::CauchyRightConj: return "cauchyRightConj";
    case T::SandwichZero33: return "sandwichZero33";
    case T::Fueter32: return "fueter32";
    case T::Fueter39: return "fueter39";
    case T::Fueter40: return "fueter40";
    case T::Fueter41: return "fueter41";
    case T::Alt48: return "alt48";
    case T::Alt49: return "alt49";
    case T::Alt50: return "alt50";
    case T::Alt51: return "alt51";
    case T::Alt52: return "alt52";
    case T::Alt53: return "alt53";
    case T::BiCauchy61: return "biCauchy61";
    case T::BiAlt71: return "biAlt71";
    case T::BiAlt72: return "biAlt72";
    case T::BiFueter74: return "biFueter74";
  }
  return "?";
}

std::optional<TheoremId> theorem_from_string(const std::string& s) {
  auto lower = [](std::string v) {
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    return v;
  };
  const std::string want = lower(s);
  for (TheoremId t : all_theorems())
    if (lower(name(t)) == want) return t;
  return std::nullopt;
}

const std::vector<TheoremId>& all_theorems() {
  using T = TheoremId;
  static const std::vector<TheoremId> all = {
      T::Cauchy28,  T::CauchyConj, T::CauchyRight, T::CauchyRightConj,
      T::SandwichZero33, T::Fueter32, T::Fueter39, T::Fueter40, T::Fueter41,
      T::Alt48,     T::Alt49,      T::Alt50,       T::Alt51,
      T::Alt52,     T::Alt53,      T::BiCauchy61,  T::BiAlt71,
      T::BiAlt72,   T::BiFueter74,
  };
  return all;
}

Regularity required_regularity(TheoremId t) {
  using T = TheoremId;
  switch (t) {
    case T::Cauchy28:
    case T::SandwichZero33:
    case T::Fueter32:
    case T::Alt48:
    case T::Alt49:
    case T::Alt50:
      return Regularity::Left;
    case T::CauchyConj:
    case T::Fueter40:
    case T::Alt51:
      return Regularity::ConjLeft;
    case T::CauchyRight:
    case T::Fueter39:
    case T::Alt52:
      return Regularity::Right;
    case T::CauchyRightConj:
    case T::Fueter41:
    case T::Alt53:
      return Regularity::ConjRight;
    case T::BiCauchy61:
    case T::BiAlt71:
    case T::BiFueter74:
      return Regularity::BiLeft;
    case T::BiAlt72:
      return Regularity::BiConjRight;
  }
  return Regularity::None;
}

FormKind form_kind(TheoremId t) {
  using T = TheoremId;
  switch (t) {
    case T::CauchyConj:
    case T::CauchyRightConj:
    case T::Fueter40:
    case T::Fueter41:
    case T::Alt51:
    case T::Alt53:
      return FormKind::SqSharp;
    case T::BiCauchy61:
    case T::BiAlt71:
    case T::BiFueter74:
      return FormKind::SH;
    case T::BiAlt72:
      return FormKind::SHSharp;
    default:
      return FormKind::Sq;
  }
}

double default_tolerance(TheoremId t) {
  using T = TheoremId;
  switch (t) {
    case T::Cauchy28:
    case T::CauchyConj:
    case T::CauchyRight:
    case T::CauchyRightConj:
    case T::BiCauchy61:
      return 1e-8;
    case T::SandwichZero33:
      return 1e-7;
    case T::Fueter32:
    case T::Fueter39:
    case T::Fueter40:
    case T::Fueter41:
      return 1e-6;
    case T::Alt48:
    case T::Alt49:
    case T::Alt50:
    case T::Alt51:
    case T::Alt52:
    case T::Alt53:
      return 1e-4;
    case T::BiAlt71:
    case T::BiAlt72:
    case T::BiFueter74:
      return 1e-6;
  }
  return 1e-6;
}

SurfaceDescriptor default_surface(TheoremId t, const Point4& q0) {
  using T = TheoremId;
  SurfaceDescriptor d;
  d.center = q0;
  switch (t) {
    case T::Cauchy28:
    case T::CauchyConj:
    case T::Fueter32:
    case T::Fueter39:
    case T::Fueter40:
    case T::Fueter41:
      d.kind = SurfaceDescriptor::Kind::Sphere3;
      d.radius = 1.0;
      break;
    case T::CauchyRight:
    case T::CauchyRightConj:
    case T::BiCauchy61:
      d.kind = SurfaceDescriptor::Kind::HyperBox;
      d.halfw = {1, 1, 1, 1};
      break;
    case T::SandwichZero33:
      d.kind = SurfaceDescriptor::Kind::Sphere3;
      d.radius = 1.0;
      d.center.w += 3.0;  // excludes the kernel point
      break;
    case T::Alt48:
    case T::Alt49:
    case T::Alt50:
    case T::Alt51:
    case T::Alt52:
    case T::Alt53:
      d.kind = SurfaceDescriptor::Kind::Prism;
      d.rho = 1.0;
      d.t1 = 6.0;
      d.axis = 0;
      break;
    case T::BiAlt71:
    case T::BiAlt72:
    case T::BiFueter74:
      d.kind = SurfaceDescriptor::Kind::DeformedPrism;
      d.rho = 1.0;
      d.t1 = 4.0;
      d.eps = 0.25;
      d.rule = kernel_of(t, q0)->detour_rule();
      break;
  }
  return d;
}

BiQuat expected_value(TheoremId t, const BiQuat& f_at_q0) {
  using T = TheoremId;
  switch (t) {
    case T::Cauchy28:
    case T::CauchyConj:
    case T::CauchyRight:
    case T::CauchyRightConj:
    case T::SandwichZero33:
    case T::BiCauchy61:
      return {};
    case T::Fueter32:
    case T::Fueter39:
    case T::Fueter40:
    case T::Fueter41:
      return f_at_q0 * kFueterConst;
    case T::Alt48:
      return BiQuat::unit(1) * f_at_q0 * kAltConst;
    case T::Alt49:
      return BiQuat::unit(2) * f_at_q0 * kAltConst;
    case T::Alt50:
      return BiQuat::unit(3) * f_at_q0 * kAltConst;
    case T::Alt51:
      return BiQuat::scalar(-1.0) * BiQuat::unit(1) * f_at_q0 * kAltConst;
    case T::Alt52:
      return f_at_q0 * BiQuat::unit(1) * kAltConst;
    case T::Alt53:
      return f_at_q0 * BiQuat::scalar(-1.0) * BiQuat::unit(1) * kAltConst;
    case T::BiAlt71:
      return BiQuat::unit(1) * f_at_q0 * kAltConst;
    case T::BiAlt72:
      return f_at_q0 * BiQuat::unit(1) * kAltConst;
    case T::BiFueter74:
      return bi_fueter_resolution().constant * f_at_q0;
  }
  return {};
}

bool expects_zero(TheoremId t) {
  using T = TheoremId;
  switch (t) {
    case T::Cauchy28:
    case T::CauchyConj:
    case T::CauchyRight:
    case T::CauchyRightConj:
    case T::SandwichZero33:
    case T::BiCauchy61:
      return true;
    default:
      return false;
  }
}

std::string Report::to_json() const {
  std::string out = "{";
  out += "\"theorem\":\"" + std::string(name(theorem)) + "\",";
  out += "\"route\":\"" + json_escape(route) + "\",";
  out += "\"surface\":\"" + json_escape(surface) + "\",";
  out += "\"quad\":{\"gl_order\":" + std::to_string(quad.gl_order) +
         ",\"panels\":" + std::to_string(quad.panels) +
         ",\"azimuthal\":" + std::to_string(quad.nodes_azimuthal()) + "},";
  out += "\"value\":" + fmt_components(value) + ",";
  out += "\"expected\":" + fmt_components(expected) + ",";
  out += "\"abs_err\":" + fmt_double(abs_err) + ",";
  out += "\"tolerance\":" + fmt_double(tolerance) + ",";
  out += std::string("\"pass\":") + (pass ? "true" : "false") + ",";
  out += "\"seconds\":" + fmt_double(seconds) + ",";
  out += "\"notes\":[";
  for (std::size_t i = 0; i < notes.size(); ++i) {
    if (i) out += ",";
    out += "\"" + json_escape(notes[i]) + "\"";
  }
  out += "]}";
  return out;
}

std::string Report::csv_header() {
  std::string h = "theorem,route,surface,gl_order,panels,azimuthal";
  const char* slots[] = {"re_w", "im_w", "re_x", "im_x",
                         "re_y", "im_y", "re_z", "im_z"};
  for (const char* s : slots) h += std::string(",value_") + s;
  for (const char* s : slots) h += std::string(",expected_") + s;
  h += ",abs_err,tolerance,pass,seconds";
  return h;
}

std::string Report::to_csv() const {
  std::string out = name(theorem);
  out += "," + route;
  out += ",\"" + surface + "\"";
  out += "," + std::to_string(quad.gl_order);
  out += "," + std::to_string(quad.panels);
  out += "," + std::to_string(quad.nodes_azimuthal());
  for (double c : value.components()) out += "," + fmt_double(c);
  for (double c : expected.components()) out += "," + fmt_double(c);
  out += "," + fmt_double(abs_err);
  out += "," + fmt_double(tolerance);
  out += pass ? ",true" : ",false";
  out += "," + fmt_double(seconds);
  return out;
}

Report run(TheoremId t, const QField& f, const Point4& q0,
           const SurfaceDescriptor& surface, const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  Report rep;
  rep.theorem = t;
  rep.quad = opts.rule;
  rep.tolerance = opts.tolerance > 0 ? opts.tolerance : default_tolerance(t);

  SurfaceDescriptor desc = surface;
  const auto kern = kernel_of(t, q0);
  if (kern) {
    const bool deformed =
        desc.kind == SurfaceDescriptor::Kind::DeformedPrism ||
        desc.kind == SurfaceDescriptor::Kind::WidePrism;
    if (deformed && desc.rule != kern->detour_rule())
      rep.notes.push_back(
          "surface detour rule differs from the kernel's branch rule; the "
          "expected value assumes the kernel rule");
  }

  bool enclosed = false;
  if (kern) enclosed = locus_enclosed(kern->locus(), desc);
  if (t == TheoremId::SandwichZero33 && enclosed)
    fail(ErrorCode::BadGeometry,
         "sandwich zero requires a surface excluding the kernel point");

  if (opts.check_regularity) check_regularity(t, f, desc, opts);

  const Surface s = make_surface(desc);
  rep.surface = s.desc.to_string();
  const Sandwich sw = compose(t, f, q0);
  rep.value = integrate_sandwich(sw.left, form_kind(t), sw.right, s, opts.rule);

  const BiQuat fq0 = f(EvalPoint::at(q0));
  rep.expected =
      (enclosed || expects_zero(t)) ? expected_value(t, fq0) : BiQuat{};
  if (kern && !enclosed && !expects_zero(t))
    rep.notes.push_back("surface excludes the singular locus; expected 0");
  if (t == TheoremId::BiFueter74)
    rep.notes.push_back(bi_fueter_resolution().note);
  if (t == TheoremId::BiAlt72)
    rep.notes.push_back(
        "conjugate Hermitian sandwich uses the SH# form element (the "
        "quaternionic Sq# does not close the Hermitian family)");

  rep.abs_err = max_component_dist(rep.value, rep.expected);
  rep.pass = rep.abs_err <= rep.tolerance;
  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return rep;
}

Report run(TheoremId t, const QField& f, const Point4& q0,
           const RunOptions& opts) {
  return run(t, f, q0, default_surface(t, q0), opts);
}

double surface_independence(TheoremId t, const QField& f, const Point4& q0,
                            const std::vector<SurfaceDescriptor>& surfaces,
                            const RunOptions& opts) {
  if (surfaces.size() < 2)
    fail(ErrorCode::BadParameters, "need at least two surfaces");
  std::vector<BiQuat> values;
  RunOptions o = opts;
  for (const auto& d : surfaces) {
    values.push_back(run(t, f, q0, d, o).value);
    o.check_regularity = false;  // same field, checked once
  }
  double dev = 0;
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j)
      dev = std::max(dev, max_component_dist(values[i], values[j]));
  return dev;
}

// ---------------------------------------------------------------------------
// Semi-analytic prismatic routes
// ---------------------------------------------------------------------------

namespace {

// Componentwise contour integration of a biquaternion-valued density, with
// one density evaluation per node (contour_integrate visits the same nodes
// in the same order for each component).
BiQuat contour_integrate_biquat(const std::function<BiQuat(Complex)>& density,
                                const Contour& c, const ContourRule& rule) {
  std::map<std::pair<double, double>, BiQuat> cache;
  BiQuat out;
  for (int comp = 0; comp < 4; ++comp) {
    out[comp] = contour_integrate(
        [&](Complex z) -> Complex {
          auto it = cache.find({z.real(), z.imag()});
          if (it == cache.end())
            it = cache.emplace(std::make_pair(z.real(), z.imag()), density(z))
                     .first;
          return it->second[comp];
        },
        c, rule);
  }
  return out;
}

struct AngularGrid {
  std::vector<double> n0, n1, n2, wgt;  // unit vectors and dOmega weights
};

// Tensor rule on the unit 2-sphere: Gauss-Legendre in cos(theta), uniform
// midpoints in phi; weights integrate dOmega (total 4 pi) and are exact for
// the polynomial vector moments the kernels need.
AngularGrid angular_grid(const QuadRule& rule) {
  const Rule1D rc = gl_rule01(rule.gl_order, rule.panels);
  const Rule1D rp = uniform_rule01(rule.nodes_azimuthal());
  AngularGrid g;
  for (std::size_t i = 0; i < rc.nodes.size(); ++i) {
    const double c = 2.0 * rc.nodes[i] - 1.0;
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (std::size_t j = 0; j < rp.nodes.size(); ++j) {
      const double phi = 2.0 * kPi * rp.nodes[j];
      g.n0.push_back(s * std::cos(phi));
      g.n1.push_back(s * std::sin(phi));
      g.n2.push_back(c);
      g.wgt.push_back(4.0 * kPi * rc.weights[i] * rp.weights[j]);
    }
  }
  return g;
}

Report finish_report(Report rep, TheoremId t, const BiQuat& fq0,
                     const std::chrono::steady_clock::time_point& start) {
  rep.theorem = t;
  rep.expected = expected_value(t, fq0);
  rep.tolerance = default_tolerance(t);
  rep.abs_err = max_component_dist(rep.value, rep.expected);
  rep.pass = rep.abs_err <= rep.tolerance;
  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return rep;
}

}  // namespace

Report run_bi_narrow(TheoremId t, const QField& f, const Point4& q0,
                     double rho, const QuadRule& rule) {
  if (t != TheoremId::BiAlt71 && t != TheoremId::BiFueter74)
    fail(ErrorCode::BadParameters,
         "the long-prism route supports biAlt71 and biFueter74");
  if (rho <= 0) fail(ErrorCode::BadParameters, "prism radius");
  const auto start = std::chrono::steady_clock::now();
  const double t1 = 4.0 * rho, eps = 0.25 * rho;

  const Kernel kern = *kernel_of(t, q0);
  const AngularGrid grid = angular_grid(rule);

  // Side wall at spatial radius rho: the form reduces to
  // i * (I n_x + J n_y + K n_z) rho^2 dOmega dt (outward normal).
  auto density = [&](Complex tc) -> BiQuat {
    BiQuat acc;
    for (std::size_t a = 0; a < grid.n0.size(); ++a) {
      EvalPoint p;
      p.w = q0.w + tc;
      p.x = q0.x + rho * grid.n0[a];
      p.y = q0.y + rho * grid.n1[a];
      p.z = q0.z + rho * grid.n2[a];
      const BiQuat form{0.0, Complex(0, grid.n0[a]), Complex(0, grid.n1[a]),
                        Complex(0, grid.n2[a])};
      const double w = rho * rho * grid.wgt[a];
      if (t == TheoremId::BiAlt71)
        acc += form * (kern.eval(p) * f(p)) * w;  // S_H K f
      else
        acc += kern.eval(p) * form * f(p) * w;  // K S_H f
    }
    return acc;
  };

  std::vector<PoleSpec> poles(2);
  const bool plus = kern.detour_rule() == DetourRule::IncludePlus;
  poles[0] = {-rho, plus ? PoleSpec::Policy::Exclude : PoleSpec::Policy::Include};
  poles[1] = {+rho, plus ? PoleSpec::Policy::Include : PoleSpec::Policy::Exclude};
  const Contour c = real_line_contour(poles, t1, eps, /*with_tails=*/false);
  const ContourRule crule{24, 6};
  const BiQuat wall = contour_integrate_biquat(density, c, crule);

  // Real end caps at +-t1 close the finite surface (their contribution
  // vanishes in the long-prism limit but is kept for exactness).
  const Surface pr = prism(q0, rho, t1, 0);
  Surface caps;
  caps.desc = pr.desc;
  caps.patches.push_back(pr.patches[1]);
  caps.patches.push_back(pr.patches[2]);
  const Sandwich sw = compose(t, f, q0);
  const BiQuat capv =
      integrate_sandwich(sw.left, FormKind::SH, sw.right, caps, rule);

  Report rep;
  rep.route = "narrow";
  rep.quad = rule;
  rep.value = wall + capv;
  SurfaceDescriptor d;
  d.kind = SurfaceDescriptor::Kind::DeformedPrism;
  d.center = q0;
  d.rho = rho;
  d.t1 = t1;
  d.eps = eps;
  d.rule = kern.detour_rule();
  rep.surface = d.to_string();
  rep.notes.push_back(
      "long-prism route: wall by angular quadrature with the time factor on "
      "a detoured contour; end caps closed by quadrature");
  if (t == TheoremId::BiFueter74)
    rep.notes.push_back(bi_fueter_resolution().note);
  return finish_report(std::move(rep), t, f(EvalPoint::at(q0)), start);
}

Report run_bi_wide(TheoremId t, const QField& f, const Point4& q0, double t1,
                   const QuadRule& rule) {
  if (t != TheoremId::BiAlt71)
    fail(ErrorCode::BadParameters, "the wide-prism route supports biAlt71");
  if (t1 <= 0) fail(ErrorCode::BadParameters, "prism half-length");
  const auto start = std::chrono::steady_clock::now();
  const double rho = 3.0 * t1, eps = 0.25 * t1;

  const Kernel kern = *kernel_of(t, q0);
  const AngularGrid grid = angular_grid(rule);

  // Real side wall by surface quadrature.
  const Surface wp = wide_prism(q0, rho, eps, t1, kern.detour_rule());
  Surface wall_only;
  wall_only.desc = wp.desc;
  wall_only.patches.push_back(wp.patches[0]);
  const Sandwich sw = compose(t, f, q0);
  const BiQuat wall =
      integrate_sandwich(sw.left, FormKind::SH, sw.right, wall_only, rule);

  // End caps: the form reduces to +-r^2 dOmega dr on the w-normal slot.  The
  // radial factor crosses the light cone at r = t1; integrate along the
  // symmetrized line (-rho, rho) / 2, whose detours mirror the time rule: the
  // reciprocal variable swaps which pole the closed contour includes.
  const bool plus = kern.detour_rule() == DetourRule::IncludePlus;
  BiQuat capsum;
  for (int sign = -1; sign <= 1; sign += 2) {
    auto density = [&](Complex rc) -> BiQuat {
      BiQuat acc;
      for (std::size_t a = 0; a < grid.n0.size(); ++a) {
        EvalPoint p;
        p.w = Complex(q0.w + sign * t1);
        p.x = q0.x + rc * grid.n0[a];
        p.y = q0.y + rc * grid.n1[a];
        p.z = q0.z + rc * grid.n2[a];
        const Complex w = double(sign) * rc * rc * grid.wgt[a];
        acc += (kern.eval(p) * f(p)) * w;  // scalar form slot: S_H K f
      }
      return acc;
    };
    std::vector<PoleSpec> poles(2);
    poles[0] = {-t1, plus ? PoleSpec::Policy::Include : PoleSpec::Policy::Exclude};
    poles[1] = {+t1, plus ? PoleSpec::Policy::Exclude : PoleSpec::Policy::Include};
    const Contour c = real_line_contour(poles, rho, eps, /*with_tails=*/false);
    const ContourRule crule{24, 6};
    capsum += contour_integrate_biquat(density, c, crule) * 0.5;
  }

  Report rep;
  rep.route = "wide";
  rep.quad = rule;
  rep.value = wall + capsum;
  rep.surface = wp.desc.to_string();
  rep.notes.push_back(
      "wide-prism route: real wall by quadrature; cap radial factor on a "
      "symmetrized detoured contour (reciprocal variable swaps the included "
      "pole)");
  return finish_report(std::move(rep), t, f(EvalPoint::at(q0)), start);
}

}  // namespace qcl
