#pragma once

#include <complex>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qcl/algebra.hpp"
#include "qcl/errors.hpp"

namespace qcl {

// ---------------------------------------------------------------------------
// Branch continuation
// ---------------------------------------------------------------------------

// Detour convention for paths that cross the real branch cuts of atanh:
//   IncludePlus : pass below the cut on (1, inf), above on (-inf, -1)
//                 (the pole at +1 ends up inside an upper-half-plane closure);
//   IncludeMinus: the mirror image.
enum class DetourRule { IncludePlus, IncludeMinus };

// atanh continued along a non-winding detoured path: identical to the
// principal branch off the real cuts, with the cut value fixed by the side
// the path passes on.  Pointwise and stateless, which keeps quadrature
// parallelism trivial.
Complex atanh_cont(Complex z, DetourRule rule = DetourRule::IncludePlus);

// Stateful sheet tracking for contour integrands.  Each multivalued factor
// registers under a small integer key; consecutive evaluations must stay
// within half a period of each other or the continuation is lost
// (ErrorCode::BranchJump).
class BranchState {
 public:
  // `principal` is the principal-branch value, `period` the sheet increment
  // (i*pi for atanh, 2*pi*i for log).  Returns the continued value.
  Complex continue_value(int key, Complex principal, Complex period);
  void reset() { slots_.clear(); }

 private:
  struct Slot {
    bool init = false;
    Complex last{};
    Complex offset{};
  };
  std::unordered_map<int, Slot> slots_;
};

Complex tracked_atanh(Complex z, BranchState& bs, int key = 0);
Complex tracked_log(Complex z, BranchState& bs, int key = 1);

// ---------------------------------------------------------------------------
// Polynomials and rational functions (descriptor form used by residue())
// ---------------------------------------------------------------------------

// Dense univariate polynomial, coefficients ascending in degree.
class Poly {
 public:
  Poly() = default;
  Poly(std::initializer_list<Complex> coeffs) : c_(coeffs) { trim(); }
  explicit Poly(std::vector<Complex> coeffs) : c_(std::move(coeffs)) { trim(); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Complex eval(Complex z) const;
  Poly derivative() const;
  // Synthetic division by (z - p): returns quotient, stores remainder.
  Poly deflate(Complex p, Complex* remainder) const;
  const std::vector<Complex>& coeffs() const { return c_; }

 private:
  void trim();
  std::vector<Complex> c_;
};

struct RationalFn {
  Poly num, den;

  Complex eval(Complex z) const { return num.eval(z) / den.eval(z); }
  // den_degree - num_degree; >= 2 admits closure at infinity.
  int decay_order() const { return den.degree() - num.degree(); }
};

// Residue of a rational function at a pole of the stated order (1 or 2),
// computed analytically by deflation and cross-checked against a small-circle
// quadrature.  Disagreement beyond `crosscheck_tol`, or a pole order that does
// not match the denominator, raises OrderMismatch.
Complex residue(const RationalFn& f, Complex pole, int order,
                double crosscheck_tol = 1e-8, double circle_radius = 0.1);

// ---------------------------------------------------------------------------
// Contours
// ---------------------------------------------------------------------------

struct PoleSpec {
  double location = 0;
  enum class Policy { Include, Exclude } policy = Policy::Include;
};

struct Segment {
  enum class Kind {
    Line,      // straight from a to b
    Arc,       // center + radius * exp(i phi), phi0 -> phi1 (either direction)
    TailUp,    // [cutoff, +inf) on the real axis, mapped by z = cutoff / s
    TailDown,  // (-inf, -cutoff], traversed toward -cutoff
  };
  Kind kind = Kind::Line;
  Complex a{}, b{};
  Complex center{};
  double radius = 0, phi0 = 0, phi1 = 0;
  double cutoff = 0;

  static Segment line(Complex a, Complex b);
  static Segment arc(Complex center, double radius, double phi0, double phi1);
  static Segment tail_up(double cutoff);
  static Segment tail_down(double cutoff);
};

struct Contour {
  std::vector<Segment> segments;
  std::vector<PoleSpec> poles;
  // When set, the contour is conceptually closed by the upper semicircle at
  // infinity (zero contribution for integrands decaying like |z|^-2 or
  // faster; contour_integrate verifies the decay by a sampled ratio test).
  bool closed_upper = false;
  double cutoff = 0;
};

// Detoured real line -R -> R with semicircular detours of radius eps around
// each pole: below for Include (the pole falls inside an upper closure),
// above for Exclude.  with_tails appends inversion-mapped tails to +-inf and
// marks the contour as closed at infinity.
Contour real_line_contour(const std::vector<PoleSpec>& poles, double R,
                          double eps, bool with_tails = true);

struct ContourRule {
  int gl_order = 24;
  int panels = 4;  // panels per segment
};

using BranchedFn = std::function<Complex(Complex z, BranchState& bs)>;

// Integrate f dz along the contour segments in order.  Evaluations happen in
// path order so BranchState continuation is well defined.  For contours
// closed at infinity the decay precondition is asserted numerically.
Complex contour_integrate(const BranchedFn& f, const Contour& c,
                          const ContourRule& rule = {});
Complex contour_integrate(const std::function<Complex(Complex)>& f,
                          const Contour& c, const ContourRule& rule = {});

// 2*pi*i * (sum of residues of the Include poles), for rational integrands.
Complex residue_theorem_value(const RationalFn& f, const Contour& c,
                              int pole_order);

}  // namespace qcl
