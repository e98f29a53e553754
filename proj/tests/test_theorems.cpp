#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <functional>

#include "qcl/theorems.hpp"
#include "test_util.hpp"

using namespace qcl;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a qcl::Error");
  return ErrorCode::BadParameters;
}

double dist(const BiQuat& a, const BiQuat& b) { return (a - b).max_abs(); }

const double kC = 2 * kPi * kPi;
const double kA = kC / 3;
const Point4 kO{};
const QField kOne = QField::constant(BiQuat::scalar(1.0));

QField probe(const std::string& gen, TheoremId t) {
  return QField::regular(PolyField::parse(gen),
                         qcltest::variant_for(required_regularity(t)));
}

}  // namespace

TEST_CASE("theorem names round trip") {
  CHECK(all_theorems().size() == 19);
  for (TheoremId t : all_theorems()) {
    CAPTURE(name(t));
    CHECK(theorem_from_string(name(t)) == t);
  }
  CHECK(theorem_from_string("FUETER32") == TheoremId::Fueter32);
  CHECK(theorem_from_string("bialt71") == TheoremId::BiAlt71);
  CHECK(!theorem_from_string("nope").has_value());
}

TEST_CASE("per-theorem facts") {
  CHECK(required_regularity(TheoremId::Cauchy28) == Regularity::Left);
  CHECK(required_regularity(TheoremId::Fueter39) == Regularity::Right);
  CHECK(required_regularity(TheoremId::BiAlt72) == Regularity::BiConjRight);
  CHECK(form_kind(TheoremId::Cauchy28) == FormKind::Sq);
  CHECK(form_kind(TheoremId::CauchyConj) == FormKind::SqSharp);
  CHECK(form_kind(TheoremId::BiCauchy61) == FormKind::SH);
  CHECK(form_kind(TheoremId::BiAlt72) == FormKind::SHSharp);

  int zero_count = 0;
  for (TheoremId t : all_theorems()) {
    CHECK(default_tolerance(t) > 0);
    if (expects_zero(t)) ++zero_count;
  }
  CHECK(zero_count == 6);
  CHECK(expects_zero(TheoremId::SandwichZero33));
  CHECK(expects_zero(TheoremId::BiCauchy61));
  CHECK(!expects_zero(TheoremId::Fueter32));

  // The I factor sits left of f in 48 and right of f in 52.
  const BiQuat j = BiQuat::unit(2);
  CHECK(dist(expected_value(TheoremId::Fueter32, BiQuat::scalar(1.0)),
             BiQuat::scalar(kC)) < 1e-14);
  CHECK(dist(expected_value(TheoremId::Alt48, j), BiQuat::unit(3) * kA) <
        1e-14);
  CHECK(dist(expected_value(TheoremId::Alt52, j),
             BiQuat::unit(3) * (-kA)) < 1e-14);
  CHECK(dist(expected_value(TheoremId::Alt49, BiQuat::scalar(1.0)),
             BiQuat::unit(2) * kA) < 1e-14);
}

TEST_CASE("all nineteen identities hold with f = 1 at the defaults") {
  for (TheoremId t : all_theorems()) {
    CAPTURE(std::string(name(t)));
    const Report rep = run(t, kOne, kO);
    CAPTURE(rep.abs_err);
    CHECK(rep.pass);
    CHECK(rep.route == "surface");
    CHECK(!rep.surface.empty());
    CHECK(rep.abs_err <= rep.tolerance);
  }
}

TEST_CASE("the integral is linear in a constant factor") {
  const Report base = run(TheoremId::Fueter32, kOne, kO);
  const BiQuat c{Complex(2.0, 0.5), 0.0, 0.0, 0.0};
  const Report scaled =
      run(TheoremId::Fueter32, QField::constant(c), kO);
  CHECK(dist(scaled.value, base.value * c) < 1e-12);
  CHECK(scaled.pass);
}

TEST_CASE("the constant is translation invariant") {
  const Point4 q0{0.3, -0.2, 0.5, 0.1};
  const Report rep = run(TheoremId::Fueter32, kOne, q0);
  CHECK(dist(rep.value, BiQuat::scalar(kC)) < 1e-10);
}

TEST_CASE("the value does not depend on the enclosing surface") {
  const Point4 q0{0, 1, 0, 0};
  const QField f = probe("x", TheoremId::Fueter32);
  SurfaceDescriptor small, large, box;
  small.kind = SurfaceDescriptor::Kind::Sphere3;
  small.center = q0;
  small.radius = 0.5;
  large = small;
  large.radius = 1.5;
  box.kind = SurfaceDescriptor::Kind::HyperBox;
  box.center = q0;

  CHECK(surface_independence(TheoremId::Fueter32, f, q0,
                             {small, large, box}) < 1e-5);
  for (const auto& d : {small, large, box}) {
    const Report rep = run(TheoremId::Fueter32, f, q0, d);
    // f(q0) = x = 1 there.
    CHECK(dist(rep.value, BiQuat::scalar(kC)) < 1e-5);
  }
}

TEST_CASE("conjugate and plain routes agree on a shared generator") {
  const Point4 q0{0, 1, 0, 0};
  const Report a = run(TheoremId::Fueter32, probe("x", TheoremId::Fueter32),
                       q0);
  const Report b = run(TheoremId::Fueter40, probe("x", TheoremId::Fueter40),
                       q0);
  CHECK(a.pass);
  CHECK(b.pass);
  CHECK(dist(a.value, b.value) < 1e-8);
}

TEST_CASE("regular fields close the cauchy-family integrals") {
  const TheoremId ids[] = {TheoremId::Cauchy28, TheoremId::CauchyConj,
                           TheoremId::CauchyRight,
                           TheoremId::CauchyRightConj};
  SurfaceDescriptor sphere, box;
  sphere.kind = SurfaceDescriptor::Kind::Sphere3;
  box.kind = SurfaceDescriptor::Kind::HyperBox;
  for (TheoremId t : ids) {
    const QField f = probe("x^2*y + z^3 - 2*x", t);
    const QField g = probe("x*J + y^3", t);
    for (const auto& d : {sphere, box}) {
      CAPTURE(name(t));
      CAPTURE(d.to_string());
      CHECK(run(t, f, kO, d).pass);
      CHECK(run(t, g, kO, d).pass);
    }
  }
  CHECK(run(TheoremId::BiCauchy61, probe("x*y - z + x*K", TheoremId::BiCauchy61),
            kO).pass);
}

TEST_CASE("sandwich zero needs an excluding surface") {
  const Report rep = run(TheoremId::SandwichZero33, kOne, kO);
  CHECK(rep.pass);
  CHECK(rep.abs_err < 1e-7);

  SurfaceDescriptor enclosing;
  enclosing.kind = SurfaceDescriptor::Kind::Sphere3;
  CHECK(code_of([&] {
          run(TheoremId::SandwichZero33, kOne, kO, enclosing);
        }) == ErrorCode::BadGeometry);
}

TEST_CASE("excluded singularities integrate to zero") {
  SurfaceDescriptor away;
  away.kind = SurfaceDescriptor::Kind::Sphere3;
  away.center = {3, 0, 0, 0};
  const Report rep = run(TheoremId::Fueter32, kOne, kO, away);
  CHECK(rep.pass);
  CHECK(rep.expected.max_abs() == 0.0);
  REQUIRE(!rep.notes.empty());
  CHECK(rep.notes.front().find("excludes") != std::string::npos);

  const SurfaceDescriptor off =
      SurfaceDescriptor::parse("prism:rho=1,t1=6,axis=0,cx=5");
  CHECK(run(TheoremId::Alt48, kOne, kO, off).pass);
}

TEST_CASE("axis identities hold for a nonconstant probe") {
  const Point4 q0{0, 0.5, 0, 0};
  const QField f = probe("x", TheoremId::Alt48);
  const Report rep = run(TheoremId::Alt48, f, q0);
  CHECK(rep.pass);
  CHECK(dist(rep.value, BiQuat::unit(1) * BiQuat::scalar(0.5) * kA) <
        rep.tolerance);
}

TEST_CASE("prismatic routes reproduce the axis constant") {
  const Report n = run_bi_narrow(TheoremId::BiAlt71, kOne, kO, 1.0);
  const Report w = run_bi_wide(TheoremId::BiAlt71, kOne, kO, 1.0);
  CHECK(n.pass);
  CHECK(w.pass);
  CHECK(n.route == "narrow");
  CHECK(w.route == "wide");
  CHECK(dist(n.value, BiQuat::unit(1) * kA) < 1e-6);
  CHECK(dist(w.value, BiQuat::unit(1) * kA) < 1e-6);
  CHECK(dist(n.value, w.value) < 2e-6);
  CHECK(code_of([] { run_bi_narrow(TheoremId::Fueter32, kOne, kO, 1.0); }) ==
        ErrorCode::BadParameters);
}

TEST_CASE("the hermitian point formula records its resolution") {
  const Report rep = run(TheoremId::BiFueter74, kOne, kO);
  CHECK(rep.pass);
  CHECK(std::abs(rep.expected.max_abs() - kC) < 1e-9);
  CHECK(!rep.notes.empty());
}

TEST_CASE("reports serialize to json and csv") {
  const Report rep = run(TheoremId::Fueter32, kOne, kO,
                         [&] {
                           RunOptions o;
                           o.rule = QuadRule{8, 1, 0};
                           return o;
                         }());
  const auto j = nlohmann::json::parse(rep.to_json());
  CHECK(j["theorem"] == "fueter32");
  CHECK(j["route"] == "surface");
  CHECK(j["value"].size() == 8);
  CHECK(j["expected"].size() == 8);
  CHECK(j["quad"]["gl_order"] == 8);
  CHECK(j["pass"].is_boolean());
  CHECK(j["seconds"].is_number());
  CHECK(j["notes"].is_array());
  CHECK(j["surface"].get<std::string>().substr(0, 6) == "sphere");

  const std::string header = Report::csv_header();
  CHECK(header.substr(0, 21) == "theorem,route,surface");
  const std::string row = rep.to_csv();
  CHECK(row.substr(0, 17) == "fueter32,surface,");
  CHECK(row.find("\"sphere:") != std::string::npos);
}

TEST_CASE("options control tolerance and regularity checking") {
  RunOptions strict;
  strict.tolerance = 1e-30;
  const Report rep = run(TheoremId::Fueter32, kOne, kO, strict);
  CHECK(!rep.pass);
  CHECK(rep.tolerance == 1e-30);

  const QField bad = QField::poly(PolyField::parse("x^2"));
  CHECK(code_of([&] { run(TheoremId::Fueter32, bad, kO); }) ==
        ErrorCode::RegularityViolation);
  RunOptions lax;
  lax.check_regularity = false;
  const Report loose = run(TheoremId::Fueter32, bad, kO, lax);
  CHECK(!loose.pass);
  CHECK(loose.abs_err > 1e-3);
}
