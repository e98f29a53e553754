#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcl/contour.hpp"
#include "qcl/fields.hpp"
#include "qcl/geometry.hpp"

namespace qcl {

// Every verified integral identity.  Each id carries its form kind, sandwich
// arrangement (which side the kernel and the probe field occupy), the
// regularity variant the probe field must satisfy, the expected constant,
// and a default tolerance and surface.
enum class TheoremId {
  Cauchy28,
  CauchyConj,
  CauchyRight,
  CauchyRightConj,
  SandwichZero33,
  Fueter32,
  Fueter39,
  Fueter40,
  Fueter41,
  Alt48,
  Alt49,
  Alt50,
  Alt51,
  Alt52,
  Alt53,
  BiCauchy61,
  BiAlt71,
  BiAlt72,
  BiFueter74,
};

// Stable lowerCamel identifier ("fueter32", "biAlt71", ...).
const char* name(TheoremId t);
// Case-insensitive inverse of name().
std::optional<TheoremId> theorem_from_string(const std::string& s);
const std::vector<TheoremId>& all_theorems();

// Regularity variant the probe field f must satisfy.
Regularity required_regularity(TheoremId t);
// Surface form element the sandwich uses.
FormKind form_kind(TheoremId t);
// Default absolute tolerance on the max component error.
double default_tolerance(TheoremId t);
// Default verification surface for a kernel anchored at q0.
SurfaceDescriptor default_surface(TheoremId t, const Point4& q0);
// The identity's right-hand side given f(q0), for a surface enclosing the
// kernel's singularity.  Zero-family ids return 0 regardless.
BiQuat expected_value(TheoremId t, const BiQuat& f_at_q0);
bool expects_zero(TheoremId t);

struct Report {
  TheoremId theorem = TheoremId::Cauchy28;
  std::string route = "surface";  // "surface", "narrow" or "wide"
  std::string surface;            // descriptor text form
  QuadRule quad;
  BiQuat value;
  BiQuat expected;
  double abs_err = 0;  // max over the eight real components
  double tolerance = 0;
  bool pass = false;
  double seconds = 0;
  std::vector<std::string> notes;

  // {"theorem":..., "surface":..., "quad":..., "value":[8], "expected":[8],
  //  "abs_err":..., "tolerance":..., "pass":..., "seconds":..., "notes":[...]}
  // Value fields are shortest-round-trip doubles, identical to the CSV cells.
  std::string to_json() const;
  static std::string csv_header();
  std::string to_csv() const;
};

struct RunOptions {
  QuadRule rule{};
  double tolerance = 0;  // 0: theorem default
  bool check_regularity = true;
  unsigned sample_seed = 24601;
  int regularity_samples = 6;
};

// Evaluate the theorem's sandwich integral over the surface and compare with
// the expected value (which is zero when the surface excludes the kernel's
// singular locus).  Throws RegularityViolation if f fails its required
// variant at sampled points, SingularityOnSurface if quadrature nodes come
// too close to a singular locus.
Report run(TheoremId t, const QField& f, const Point4& q0,
           const SurfaceDescriptor& surface, const RunOptions& opts = {});
Report run(TheoremId t, const QField& f, const Point4& q0,
           const RunOptions& opts = {});

// Max pairwise component deviation of the computed integral across surfaces.
double surface_independence(TheoremId t, const QField& f, const Point4& q0,
                            const std::vector<SurfaceDescriptor>& surfaces,
                            const RunOptions& opts = {});

// Long-prism route for BiAlt71 / BiFueter74: the spatial 2-sphere wall is
// integrated by angular quadrature, the time factor by contour_integrate
// along the detoured real line (poles at t - t0 = +-rho, sides per the
// kernel's detour rule); the real end caps close the surface by quadrature.
Report run_bi_narrow(TheoremId t, const QField& f, const Point4& q0,
                     double rho, const QuadRule& rule = {});

// Wide-prism route for BiAlt71: real wall at radius rho = 3 t1 by
// quadrature; each end cap's radial factor by contour_integrate along the
// symmetrized radial line, which includes the mirror pole at -t1 and
// excludes +t1 (the reciprocal variable swaps the included pole).
Report run_bi_wide(TheoremId t, const QField& f, const Point4& q0, double t1,
                   const QuadRule& rule = {});

}  // namespace qcl
