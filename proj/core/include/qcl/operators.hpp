#pragma once

#include "qcl/fields.hpp"

namespace qcl {

// Central finite-difference scheme.  The effective step is h * (1 + |p|)
// when scale_by_point is set; agreement_tol is the tolerance used by
// cross-checks such as derivative_regular.
struct FdScheme {
  int order = 4;  // 2, 4 or 6
  double h = 1e-3;
  bool scale_by_point = true;
  double agreement_tol = 1e-6;
};

// The eight first-order operators.  Left variants multiply basis elements
// from the left of the derivative values, right variants from the right;
// Sharp variants negate the vector part; the H family replaces the vector
// derivative by i times itself (time coordinate t = w).
enum class OperatorId {
  D,
  DSharp,
  DTilde,
  DTildeSharp,
  DH,
  DHSharp,
  DHTilde,
  DHTildeSharp,
};

const char* to_string(OperatorId op);

// The operator annihilating fields of the given regularity variant.
OperatorId operator_for(Regularity variant);

// (op f)(p).  Exact when f carries a polynomial representation; otherwise a
// central finite-difference estimate with real-axis steps (the point must
// then have all-real coordinates).
BiQuat apply_operator(OperatorId op, const QField& f, const EvalPoint& p,
                      const FdScheme& scheme = {});

// Euclidean norm of the eight real components of (op f)(p) for the
// operator matching `variant`; small iff f is variant-regular at p.
double regularity_residual(const QField& f, const EvalPoint& p,
                           Regularity variant, const FdScheme& scheme = {});

// 4-Laplacian and d'Alembertian (t^2 minus spatial Laplacian).
BiQuat laplace4(const QField& f, const EvalPoint& p,
                const FdScheme& scheme = {});
BiQuat wave_op(const QField& f, const EvalPoint& p,
               const FdScheme& scheme = {});

// Derivative of a left-regular field: returns the vector derivative
// (I d_x + J d_y + K d_z) f and cross-checks it against -d_w f; the two
// agree for left-regular fields.  Disagreement beyond 10x agreement_tol
// raises NotRegularHere.
BiQuat derivative_regular(const QField& f, const EvalPoint& p,
                          const FdScheme& scheme = {});

}  // namespace qcl
