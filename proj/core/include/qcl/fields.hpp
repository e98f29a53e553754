#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qcl/algebra.hpp"
#include "qcl/contour.hpp"
#include "qcl/errors.hpp"

namespace qcl {

// Evaluation point with all four coordinates complex.  Ordinary geometry uses
// real coordinates; contour-deformed surfaces complexify the time coordinate
// (and, on wide-prism caps, the radial spatial scale).
struct EvalPoint {
  Complex w{}, x{}, y{}, z{};

  static EvalPoint at(const Point4& p) { return {p.w, p.x, p.y, p.z}; }
  static EvalPoint at(double w, double x, double y, double z) {
    return {Complex(w), Complex(x), Complex(y), Complex(z)};
  }
  bool real_time() const { return w.imag() == 0.0; }
  bool all_real() const {
    return w.imag() == 0 && x.imag() == 0 && y.imag() == 0 && z.imag() == 0;
  }
  double abs_scale() const {
    return std::sqrt(std::norm(w) + std::norm(x) + std::norm(y) +
                     std::norm(z));
  }
};

// Regularity variants: which of the eight first-order operators annihilates
// the field.  Left: D = d_w + I d_x + J d_y + K d_z; Right multiplies the
// basis from the right; Conj flips the sign of the vector derivative; Bi uses
// d_t + i * (vector derivative).
enum class Regularity {
  None,
  Left,
  Right,
  ConjLeft,
  ConjRight,
  BiLeft,
  BiRight,
  BiConjLeft,
  BiConjRight,
};

const char* to_string(Regularity r);

// Declared singular set of a field, used for stencil/surface clearance checks.
struct SingularLocus {
  enum class Kind { None, Point, AxisLine, LightCone, AxisLineAndCone };
  Kind kind = Kind::None;
  Point4 q0{};

  // A nonnegative proximity measure that vanishes exactly on the locus.
  double clearance(const EvalPoint& p) const;
};

// ---------------------------------------------------------------------------
// Polynomial fields
// ---------------------------------------------------------------------------

// Polynomial in (w, x, y, z) with biquaternion coefficients multiplying from
// the left.  Exponent keys are ordered (w, x, y, z).
class PolyField {
 public:
  using Key = std::array<int, 4>;

  PolyField() = default;

  static PolyField constant(const BiQuat& c);
  static PolyField coordinate(int axis);  // 0..3 -> w, x, y, z
  static PolyField monomial(const Key& k, const BiQuat& c);

  PolyField operator+(const PolyField& o) const;
  PolyField operator-(const PolyField& o) const;
  PolyField operator*(const PolyField& o) const;  // coefficient order a then b
  PolyField left_mul(const BiQuat& c) const;
  PolyField right_mul(const BiQuat& c) const;
  PolyField scaled(Complex s) const;

  PolyField partial(int axis) const;
  // Vector derivative I d_x + J d_y + K d_z with the basis multiplying the
  // coefficients from the left (or right).
  PolyField nabla_left() const;
  PolyField nabla_right() const;

  BiQuat eval(const EvalPoint& p) const;
  bool spatial_only() const;  // no w/t dependence
  bool empty() const { return terms_.empty(); }
  int degree() const;
  const std::map<Key, BiQuat>& terms() const { return terms_; }
  bool near_equal(const PolyField& o, double tol) const;

  // Text format: sum of '*'-joined factors, e.g. "1 + x - 2*w*I + 1/3*i*J".
  // Factors: decimals, rationals a/b, the complex unit i, basis letters
  // I, J, K (order-sensitive), and w|t, x, y, z with optional ^n.
  static PolyField parse(const std::string& text);
  std::string to_string() const;

 private:
  void add_term(const Key& k, const BiQuat& c);
  std::map<Key, BiQuat> terms_;
};

// Generating-function exponential variants.  Regular builds
// g = exp(-w * nabla) G (left-regular); Conjugate flips the sign in the
// exponent; Right uses the right vector derivative; the Bi variants replace
// the factor (-w)^k by (-i t)^k and produce biregular fields.
enum class GenVariant {
  Regular,
  Conjugate,
  Right,
  ConjRight,
  BiRegular,
  BiConjugate,
  BiRight,
  BiConjRight,
};

Regularity regularity_of(GenVariant v);

// Exact terminating exponential series applied to a spatial generator
// polynomial G(x, y, z).  Throws NotSpatial if G depends on w.
PolyField gen_exp_poly(const PolyField& G, GenVariant v = GenVariant::Regular);

// ---------------------------------------------------------------------------
// Closed-form kernels
// ---------------------------------------------------------------------------

enum class KernelKind {
  FueterH,     // conj(q - q0) / |q - q0|^4, two-sided regular
  AltAxis,     // exp(-w nabla)(x_a / r^4), transcendental closed form
  ZeroRadial,  // exp(-w nabla)(1 / r^3), integrates to zero
  BiAltAxis,   // exp(-i t nabla)(x_a / r^4), hyperbolic closed form
  BiFueter,    // i (q - q0) / |q - q0|^4 on Hermitian displacements
};

class Kernel {
 public:
  // axis: 1..3 selects x/y/z for the Alt kernels (ignored otherwise).
  // conj: evaluates the exp(+...) variant (time-reflected closed form); for
  // BiAltAxis this also mirrors the branch-cut detour rule.
  Kernel(KernelKind kind, Point4 q0, int axis = 1, bool conj = false);

  static Kernel fueter_h(const Point4& q0);
  static Kernel alt_axis(int axis, const Point4& q0, bool conj = false);
  static Kernel zero_radial(const Point4& q0);
  static Kernel bi_alt_axis(int axis, const Point4& q0, bool conj = false);
  static Kernel bi_fueter(const Point4& q0);

  BiQuat eval(const EvalPoint& p) const;
  // Independent truncated generator series (the oracle used to cross-check
  // eval near w = 0).  Requires |w|/r <= max_ratio and n_terms <= 12.
  BiQuat series(const EvalPoint& p, int n_terms,
                double max_ratio = 0.5) const;
  // Closed form with the two inverse-tangent terms dropped; on closed caps
  // their angular integrals cancel exactly, and quadrature code validates
  // against this form.
  BiQuat eval_cancelled(const EvalPoint& p) const;

  KernelKind kind() const { return kind_; }
  int axis() const { return axis_; }
  bool conj() const { return conj_; }
  const Point4& offset() const { return q0_; }
  DetourRule detour_rule() const;
  SingularLocus locus() const;
  Regularity regularity() const;
  std::string name() const;

 private:
  BiQuat eval_impl(const EvalPoint& p, bool drop_logs) const;

  KernelKind kind_;
  Point4 q0_;
  int axis_ = 1;
  bool conj_ = false;
  double series_crossover_ = 1e-2;  // |w|/r below which eval uses the series
  // Cached nabla^k of the generator for the series path, k = 0..12.
  std::shared_ptr<const void> series_cache_;
};

// ---------------------------------------------------------------------------
// Generic evaluable field
// ---------------------------------------------------------------------------

class QField {
 public:
  QField() = default;

  static QField constant(const BiQuat& c);
  static QField poly(const PolyField& p, Regularity reg = Regularity::None);
  static QField kernel(const Kernel& k);
  static QField wrap(std::function<BiQuat(const EvalPoint&)> f,
                     Regularity reg = Regularity::None,
                     std::vector<SingularLocus> loci = {});
  // Pointwise product a(p) * b(p); loci are merged, declared regularity is
  // dropped (products of regular fields are regular only in special cases).
  static QField product(const QField& a, const QField& b);
  // Convenience: generator polynomial -> regular field with metadata.
  static QField regular(const PolyField& G, GenVariant v);

  BiQuat operator()(const EvalPoint& p) const;
  Regularity regularity() const { return reg_; }
  const std::vector<SingularLocus>& loci() const { return loci_; }
  double clearance(const EvalPoint& p) const;
  const std::optional<PolyField>& poly_rep() const { return poly_; }
  const std::optional<Kernel>& kernel_rep() const { return kernel_; }

 private:
  std::function<BiQuat(const EvalPoint&)> eval_;
  std::optional<PolyField> poly_;
  std::optional<Kernel> kernel_;
  Regularity reg_ = Regularity::None;
  std::vector<SingularLocus> loci_;
};

}  // namespace qcl
