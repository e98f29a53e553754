#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <functional>

#include "qcl/geometry.hpp"

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

const QuadRule kQ16{16, 1, 0};
const Point4 kO{};

BiQuat form_only(const Surface& s, const QuadRule& r = kQ16) {
  return integrate_sandwich(std::nullopt, FormKind::Sq, std::nullopt, s, r);
}

const Patch& patch_by_label(const Surface& s, const std::string& label) {
  const auto it = std::find_if(
      s.patches.begin(), s.patches.end(),
      [&](const Patch& p) { return p.label == label; });
  REQUIRE(it != s.patches.end());
  return *it;
}

}  // namespace

TEST_CASE("surface areas match the closed forms") {
  CHECK(std::abs(surface_area(sphere3(kO, 1.0), kQ16) - 2 * kPi * kPi) <
        1e-9);
  CHECK(std::abs(surface_area(sphere3({1, 2, 0, -1}, 2.0), kQ16) -
                 16 * kPi * kPi) < 1e-8);
  CHECK(std::abs(surface_area(hyperbox(kO, {1, 1, 1, 1}), kQ16) - 64.0) <
        1e-10);
  // Wall 4*pi*rho^2 * 2*t1 plus two solid-ball caps of 4/3*pi*rho^3.
  CHECK(std::abs(surface_area(prism(kO, 1.0, 2.0, 0), kQ16) -
                 (16 * kPi + 8 * kPi / 3)) < 1e-9);
}

TEST_CASE("the form integrates to zero over closed surfaces") {
  CHECK(form_only(sphere3({0.3, -0.2, 0.1, 0.5}, 1.25)).max_abs() < 1e-9);
  CHECK(form_only(hyperbox(kO, {1, 0.5, 2, 0.75})).max_abs() < 1e-9);
  CHECK(form_only(prism(kO, 1.0, 3.0, 2)).max_abs() < 1e-9);
  CHECK(form_only(capped_sphere(kO, 1.0, 0.4)).max_abs() < 1e-9);
  CHECK(form_only(deformed_prism(kO, 1.0, 0.05, 4.0)).max_abs() < 1e-8);
  CHECK(form_only(wide_prism(kO, 1.0, 0.05, 0.3)).max_abs() < 1e-8);
}

TEST_CASE("fueter kernel calibrates the outward orientation") {
  const QField k = QField::kernel(Kernel::fueter_h(kO));
  const BiQuat v = integrate_sandwich(k, FormKind::Sq, std::nullopt,
                                      sphere3(kO, 1.0), kQ16);
  CHECK(dist(v, BiQuat::scalar(2 * kPi * kPi)) < 1e-8);

  // Translation moves the charge along: same constant, still +.
  const Point4 q0{0, 1, 0, 0};
  const QField ks = QField::kernel(Kernel::fueter_h(q0));
  const BiQuat vs = integrate_sandwich(ks, FormKind::Sq, std::nullopt,
                                       sphere3(q0, 1.0), kQ16);
  CHECK(dist(vs, BiQuat::scalar(2 * kPi * kPi)) < 1e-8);
}

TEST_CASE("box face pullback points outward") {
  const Surface box = hyperbox(kO, {1, 1, 1, 1});
  CHECK(box.patches.size() == 8);
  const Patch& face = patch_by_label(box, "face+w");
  CHECK(face.pos(0.5, 0.5, 0.5).w.real() == doctest::Approx(1.0));
  const BiQuat n = pullback_form(face, 0.5, 0.5, 0.5, FormKind::Sq);
  // +w face: scalar slot carries +dx^dy^dz over the full side (2^3).
  CHECK(std::abs(n[0] - Complex(8.0)) < 1e-12);
  for (int c = 1; c < 4; ++c) CHECK(std::abs(n[c]) < 1e-12);
}

TEST_CASE("form kinds transform the cofactor vector as documented") {
  const Surface s = sphere3({0.2, -0.1, 0.3, 0.0}, 1.3);
  const Patch& p = s.patches.front();
  const Complex i1(0, 1);
  const double u1 = 0.3, u2 = 0.7, u3 = 0.2;
  const BiQuat n = pullback_form(p, u1, u2, u3, FormKind::Sq);
  CHECK(n.max_abs() > 1e-3);
  CHECK(dist(pullback_form(p, u1, u2, u3, FormKind::SqSharp), qconj(n)) <
        1e-14);
  CHECK(dist(pullback_form(p, u1, u2, u3, FormKind::SH),
             BiQuat{n[0], i1 * n[1], i1 * n[2], i1 * n[3]}) < 1e-14);
  CHECK(dist(pullback_form(p, u1, u2, u3, FormKind::SHSharp),
             BiQuat{n[0], -i1 * n[1], -i1 * n[2], -i1 * n[3]}) < 1e-14);

  CHECK(std::string(to_string(FormKind::Sq)) == "Sq");
  CHECK(std::string(to_string(FormKind::SHSharp)) == "SH#");
}

TEST_CASE("surface descriptors round trip through text") {
  SurfaceDescriptor sph;
  sph.kind = SurfaceDescriptor::Kind::Sphere3;
  sph.radius = 2.5;
  sph.center = {0.5, -1, 0.25, 3};
  CHECK(sph.to_string() == "sphere:r=2.5,cw=0.5,cx=-1,cy=0.25,cz=3");

  SurfaceDescriptor box;
  box.kind = SurfaceDescriptor::Kind::HyperBox;
  box.halfw = {1, 2, 0.5, 0.75};

  SurfaceDescriptor pr;
  pr.kind = SurfaceDescriptor::Kind::Prism;
  pr.rho = 1.5;
  pr.t1 = 4;
  pr.axis = 2;

  SurfaceDescriptor dp;
  dp.kind = SurfaceDescriptor::Kind::DeformedPrism;
  dp.rho = 1;
  dp.t1 = 5;
  dp.eps = 0.0625;
  dp.rule = DetourRule::IncludeMinus;

  SurfaceDescriptor wp;
  wp.kind = SurfaceDescriptor::Kind::WidePrism;
  wp.rho = 2;
  wp.t1 = 0.5;
  wp.eps = 0.03125;

  SurfaceDescriptor cs;
  cs.kind = SurfaceDescriptor::Kind::CappedSphere;
  cs.radius = 1.25;
  cs.delta = 0.5;

  for (const auto& d : {sph, box, pr, dp, wp, cs}) {
    CAPTURE(d.to_string());
    CHECK(SurfaceDescriptor::parse(d.to_string()) == d);
  }

  // A bare halfwidth fans out to all four axes.
  CHECK(SurfaceDescriptor::parse("box:h=2").halfw ==
        std::array<double, 4>{2, 2, 2, 2});
  CHECK(SurfaceDescriptor::parse("dprism:rule=minus").rule ==
        DetourRule::IncludeMinus);

  CHECK(code_of([] { SurfaceDescriptor::parse("blob:r=1"); }) ==
        ErrorCode::BadParameters);
  CHECK(code_of([] { SurfaceDescriptor::parse("sphere:q=1"); }) ==
        ErrorCode::BadParameters);
  CHECK(code_of([] { SurfaceDescriptor::parse("sphere:r=abc"); }) ==
        ErrorCode::BadParameters);
  CHECK(code_of([] { SurfaceDescriptor::parse("sphere:r"); }) ==
        ErrorCode::BadParameters);
  CHECK(code_of([] { SurfaceDescriptor::parse("dprism:rule=diag"); }) ==
        ErrorCode::BadParameters);
}

TEST_CASE("make_surface dispatches on the descriptor") {
  SurfaceDescriptor pr;
  pr.kind = SurfaceDescriptor::Kind::Prism;
  pr.rho = 1.5;
  pr.t1 = 4;
  pr.axis = 2;
  for (const std::string text :
       {std::string("sphere:r=1.5,cx=1"), std::string("box:h=0.5"),
        pr.to_string(), std::string("dprism:rho=1,t1=5,eps=0.05"),
        std::string("wprism:rho=1,t1=0.25,eps=0.05"),
        std::string("csphere:r=1,delta=0.4")}) {
    const SurfaceDescriptor d = SurfaceDescriptor::parse(text);
    const Surface s = make_surface(d);
    CHECK(!s.patches.empty());
    CHECK(s.desc.kind == d.kind);
    CHECK(s.desc == d);
  }
}

TEST_CASE("encloses classifies points per kind") {
  SurfaceDescriptor sph;
  sph.kind = SurfaceDescriptor::Kind::Sphere3;
  CHECK(sph.encloses({0.5, 0, 0, 0}));
  CHECK(!sph.encloses({1.5, 0, 0, 0}));

  SurfaceDescriptor box;
  box.kind = SurfaceDescriptor::Kind::HyperBox;
  CHECK(box.encloses({0.9, 0.9, 0.9, 0.9}));
  CHECK(!box.encloses({1.1, 0, 0, 0}));

  SurfaceDescriptor pr;
  pr.kind = SurfaceDescriptor::Kind::Prism;
  pr.rho = 1;
  pr.t1 = 2;
  CHECK(pr.encloses({1.5, 0.5, 0, 0}));
  CHECK(!pr.encloses({2.5, 0.5, 0, 0}));
  CHECK(!pr.encloses({1.5, 1.2, 0, 0}));

  SurfaceDescriptor cs;
  cs.kind = SurfaceDescriptor::Kind::CappedSphere;
  cs.radius = 1;
  cs.delta = 0.4;
  CHECK(cs.encloses({0, 0.9, 0, 0}));
  CHECK(!cs.encloses({0.95, 0, 0, 0}));  // above the polar cap cut
}

TEST_CASE("prism extents default per kind") {
  SurfaceDescriptor d;
  d.kind = SurfaceDescriptor::Kind::Prism;
  d.rho = 2;
  d.t1 = 0;
  CHECK(d.extent_t1() == doctest::Approx(12.0));
  d.kind = SurfaceDescriptor::Kind::DeformedPrism;
  d.rho = 1;
  CHECK(d.extent_t1() == doctest::Approx(4.0));
  d.kind = SurfaceDescriptor::Kind::WidePrism;
  d.rho = 3;
  CHECK(d.extent_t1() == doctest::Approx(1.0));
  d.t1 = 7;
  CHECK(d.extent_t1() == doctest::Approx(7.0));
}

TEST_CASE("surface constructors validate their dimensions") {
  CHECK(code_of([] { prism(kO, -1.0, 2.0, 0); }) ==
        ErrorCode::BadParameters);
  CHECK(code_of([] { prism(kO, 1.0, 2.0, 5); }) == ErrorCode::BadParameters);
  CHECK(code_of([] { deformed_prism(kO, 1.0, 0.6, 5.0); }) ==
        ErrorCode::BadParameters);
  CHECK(code_of([] { deformed_prism(kO, 1.0, 0.05, 1.05); }) ==
        ErrorCode::BadParameters);
  CHECK(code_of([] { wide_prism(kO, 1.0, 0.05, 0.95); }) ==
        ErrorCode::BadParameters);
  CHECK(code_of([] { form_only(sphere3(kO, 1.0), QuadRule{0, 1, 0}); }) ==
        ErrorCode::BadParameters);
  CHECK(code_of([] { form_only(sphere3(kO, 1.0), QuadRule{16, 1, 3}); }) ==
        ErrorCode::BadParameters);
}

TEST_CASE("quadrature error decreases with the order") {
  const Point4 q0{0, 0.3, 0, 0};
  const QField k = QField::kernel(Kernel::fueter_h(q0));
  const Surface s = sphere3(kO, 1.0);
  auto err = [&](int order) {
    const BiQuat v =
        integrate_sandwich(k, FormKind::Sq, std::nullopt, s,
                           QuadRule{order, 1, 0});
    return dist(v, BiQuat::scalar(2 * kPi * kPi));
  };
  const double e8 = err(8), e16 = err(16);
  CHECK(e16 < e8);
  CHECK(e16 < 1e-8);
}

TEST_CASE("axis-kernel arctangent terms cancel over prism caps") {
  // Caps only: the arctangent pieces average out ring by ring, so the
  // full kernel and its cancelled form integrate identically.
  Surface caps = prism(kO, 1.0, 6.0, 0);
  REQUIRE(caps.patches.front().label == "wall");
  caps.patches.erase(caps.patches.begin());
  REQUIRE(caps.patches.size() == 2);

  const Kernel k = Kernel::alt_axis(1, kO);
  const QField full = QField::kernel(k);
  const QField cancelled = QField::wrap(
      [k](const EvalPoint& p) { return k.eval_cancelled(p); },
      Regularity::None, {k.locus()});
  const BiQuat a =
      integrate_sandwich(full, FormKind::Sq, std::nullopt, caps, kQ16);
  const BiQuat b =
      integrate_sandwich(cancelled, FormKind::Sq, std::nullopt, caps, kQ16);
  CHECK(a.max_abs() > 1e-6);  // each piece is a nontrivial number
  CHECK(dist(a, b) < 1e-9);
}

TEST_CASE("results are bit-identical for any thread count") {
  const QField k = QField::kernel(Kernel::fueter_h({0, 0.2, -0.1, 0.3}));
  const Surface s = sphere3(kO, 1.2);
  auto run_with = [&](const char* n) {
    setenv("QCL_THREADS", n, 1);
    const BiQuat v = integrate_sandwich(k, FormKind::Sq, std::nullopt, s,
                                        kQ16);
    unsetenv("QCL_THREADS");
    return v;
  };
  const BiQuat v1 = run_with("1");
  const BiQuat v2 = run_with("2");
  const BiQuat v5 = run_with("5");
  for (int c = 0; c < 4; ++c) {
    CHECK(v1[c] == v2[c]);
    CHECK(v1[c] == v5[c]);
  }
  CHECK(max_threads() >= 1);
}

TEST_CASE("nodes on the singular locus are refused") {
  const Point4 q0{0.5, 0, 0, 0};
  const QField k = QField::kernel(Kernel::fueter_h(q0));
  CHECK(code_of([&] {
          integrate_sandwich(k, FormKind::Sq, std::nullopt,
                             sphere3(q0, 1e-8), kQ16);
        }) == ErrorCode::SingularityOnSurface);
}

TEST_CASE("degenerate patch jacobians are detected") {
  Patch p;
  p.pos = [](double u1, double u2, double) {
    return EvalPoint{u1, u2, 0.0, 0.0};
  };
  p.jac = [](double, double, double) {
    Jac43 J;
    J.d[0][0] = 1.0;
    J.d[0][1] = 1.0;  // column 1 repeats column 0
    J.d[1][2] = 1.0;
    return J;
  };
  CHECK(code_of([&] { pullback_form(p, 0.5, 0.5, 0.5, FormKind::Sq); }) ==
        ErrorCode::DegenerateJacobian);
}
