#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qcl/contour.hpp"
#include "qcl/fields.hpp"
#include "qcl/quadrature.hpp"

namespace qcl {

// The quaternion-valued 3-surface elements.  Sq has the four cofactor
// components on the basis (1, I, J, K); SH multiplies the vector slots by i;
// Sharp variants negate the vector slots.
enum class FormKind { Sq, SqSharp, SH, SHSharp };

const char* to_string(FormKind k);

// Jacobian d(w,x,y,z)/d(u1,u2,u3); complex entries occur on contour-deformed
// patches (complexified time or radial coordinate).
struct Jac43 {
  Complex d[4][3]{};
};

// One parametrized piece of a surface, mapping the open unit cube into
// (complexified) R^4 with an analytic Jacobian.  Periodic axes are integrated
// with the uniform midpoint rule (exact for low trigonometric polynomials),
// the others with panelized Gauss-Legendre.
struct Patch {
  std::function<EvalPoint(double, double, double)> pos;
  std::function<Jac43(double, double, double)> jac;
  double orient = 1.0;
  std::array<bool, 3> periodic{false, false, false};
  std::string label;
};

struct QuadRule {
  int gl_order = 32;
  int panels = 1;
  int azimuthal = 0;  // uniform node count; 0 means 2 * gl_order

  int nodes_azimuthal() const {
    return azimuthal > 0 ? azimuthal : 2 * gl_order;
  }
};

struct SurfaceDescriptor {
  enum class Kind {
    Sphere3,
    HyperBox,
    Prism,
    DeformedPrism,
    WidePrism,
    CappedSphere,
  };
  Kind kind = Kind::Sphere3;
  Point4 center{};
  double radius = 1.0;                       // Sphere3 / CappedSphere
  std::array<double, 4> halfw{1, 1, 1, 1};   // HyperBox
  double rho = 1.0;                          // prisms: spatial radius
  double t1 = 0.0;                           // prisms: half-length (0 = auto)
  int axis = 0;                              // Prism extrusion axis
  double eps = 0.05;                         // detour radius
  double delta = 0.4;                        // CappedSphere polar half-width
  DetourRule rule = DetourRule::IncludePlus; // side for deformed patches

  double extent_t1() const;  // t1 with the kind's default applied
  bool encloses(const Point4& p) const;
  std::string to_string() const;
  static SurfaceDescriptor parse(const std::string& text);
  bool operator==(const SurfaceDescriptor& o) const;
};

struct Surface {
  SurfaceDescriptor desc;
  std::vector<Patch> patches;
};

// The form pulled back onto patch coordinates at u (orientation applied):
// the four signed 3x3 minors of the Jacobian assembled on (1, I, J, K).
BiQuat pullback_form(const Patch& p, double u1, double u2, double u3,
                     FormKind kind);

// Closed-surface constructors.  All are oriented outward (calibrated so the
// Fueter integral over the unit sphere is +2 pi^2).
Surface sphere3(const Point4& center, double radius);
Surface hyperbox(const Point4& center, const std::array<double, 4>& halfw);
// Spatial 2-sphere of radius rho extruded along `axis` from -t1 to +t1,
// closed by end caps (outward: +dxdydz at +t1, -dxdydz at -t1).
Surface prism(const Point4& center, double rho, double t1, int axis = 0);
// Prism whose wall time-coordinate follows a detoured complex path around
// the light-cone crossings at t = +-rho (semicircles of radius eps, sides
// fixed by `rule`); end caps stay real.
Surface deformed_prism(const Point4& center, double rho, double eps,
                       double t1, DetourRule rule = DetourRule::IncludePlus);
// Wide prism (rho > t1): real wall, end caps whose radial coordinate detours
// around r = t1 in the complex plane per `rule`.
Surface wide_prism(const Point4& center, double rho, double eps, double t1,
                   DetourRule rule = DetourRule::IncludePlus);
// Sphere with polar caps (half-width delta around the w-axis) replaced by
// flat disks: keeps quadrature nodes away from an axis-singular integrand.
Surface capped_sphere(const Point4& center, double radius, double delta);

Surface make_surface(const SurfaceDescriptor& desc);

// Quadrature estimate of the sandwich integral
//     closed-surface sum of  left(p) * form * right(p)
// with the quaternion product order preserved; omitted sides are the
// identity.  Node evaluation may run on several threads (QCL_THREADS), but
// summation is compensated and fixed-order, so results are bit-identical
// for any thread count.
BiQuat integrate_sandwich(const std::optional<QField>& left, FormKind kind,
                          const std::optional<QField>& right,
                          const Surface& surface, const QuadRule& rule);

// Unweighted 3-area (integral of the form's Euclidean magnitude).
double surface_area(const Surface& surface, const QuadRule& rule);

// Thread cap from QCL_THREADS (falls back to hardware concurrency).
int max_threads();

}  // namespace qcl
