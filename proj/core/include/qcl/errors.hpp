#pragma once

#include <stdexcept>
#include <string>

namespace qcl {

// Typed failure conditions surfaced by the library.  Every throw site uses
// qcl::Error with one of these codes so callers can dispatch without parsing
// message text.
enum class ErrorCode {
  NonInvertible,          // norm2 too small relative to component scale
  NullDisplacement,       // Hermitian polar decomposition of a null vector
  NotUnitNorm,            // Lorentz transform requires |norm2(q) - 1| small
  NotHermitian,           // operand expected to be a Hermitian biquaternion
  NotSpatial,             // generator polynomial must not depend on w/t
  OnSingularLocus,        // kernel evaluated on its singular set
  ConvergenceDomain,      // series evaluation outside its trust region
  StencilHitsSingularity, // finite-difference stencil touches a singular locus
  NotRegularHere,         // derivative of a non-regular field requested
  DegenerateJacobian,     // surface patch with rank < 3 Jacobian
  SingularityOnSurface,   // quadrature node on (or too near) a singular locus
  BadParameters,          // malformed numeric/config arguments
  BadGeometry,            // inconsistent surface construction
  OrderMismatch,          // pole order disagrees with the rational function
  BranchJump,             // branch continuation lost track between evaluations
  RegularityViolation,    // integrand fails its declared regularity
};

const char* to_string(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace qcl
