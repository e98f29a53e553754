#pragma once

#include <random>

#include "qcl/fields.hpp"

namespace qcltest {

inline qcl::GenVariant variant_for(qcl::Regularity r) {
  using qcl::GenVariant;
  for (GenVariant v : {GenVariant::Regular, GenVariant::Conjugate,
                       GenVariant::Right, GenVariant::ConjRight,
                       GenVariant::BiRegular, GenVariant::BiConjugate,
                       GenVariant::BiRight, GenVariant::BiConjRight})
    if (qcl::regularity_of(v) == r) return v;
  qcl::fail(qcl::ErrorCode::BadParameters, "no generator variant");
}

// Uniform real point in [lo, hi]^4.
inline qcl::EvalPoint random_point(std::mt19937& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return qcl::EvalPoint::at(u(rng), u(rng), u(rng), u(rng));
}

// Random real point with all declared loci at least min_clearance away
// (keeps finite-difference stencils and closed forms well conditioned).
inline qcl::EvalPoint admissible_point(std::mt19937& rng, const qcl::QField& f,
                                       double min_clearance, double lo = -2.0,
                                       double hi = 2.0) {
  for (int tries = 0; tries < 1000; ++tries) {
    const qcl::EvalPoint p = random_point(rng, lo, hi);
    if (f.clearance(p) >= min_clearance) return p;
  }
  qcl::fail(qcl::ErrorCode::BadParameters,
            "no admissible sample point found");
}

}  // namespace qcltest
