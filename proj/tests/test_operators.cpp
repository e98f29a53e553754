#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qcl/operators.hpp"
#include "test_util.hpp"

using namespace qcl;
using qcltest::admissible_point;
using qcltest::random_point;
using qcltest::variant_for;

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

// Wrapper that hides the polynomial representation, forcing the
// finite-difference path.
QField hide_poly(const PolyField& p) {
  return QField::wrap([p](const EvalPoint& q) { return p.eval(q); });
}

}  // namespace

TEST_CASE("first-order operators on the identity field") {
  const QField q = QField::poly(PolyField::parse("w + x*I + y*J + z*K"));
  const QField qs = QField::poly(PolyField::parse("w - x*I - y*J - z*K"));
  const EvalPoint p = EvalPoint::at(0.3, -0.7, 0.2, 0.9);
  // D q = 1 + I I + J J + K K = -2;  D q# = 1 + 3 = 4.
  CHECK(apply_operator(OperatorId::D, q, p).dist(BiQuat::scalar(-2.0)) <
        1e-14);
  CHECK(apply_operator(OperatorId::D, qs, p).dist(BiQuat::scalar(4.0)) <
        1e-14);
  CHECK(apply_operator(OperatorId::DSharp, q, p).dist(BiQuat::scalar(4.0)) <
        1e-14);
  // The Hermitian operator turns the vector contraction imaginary.
  CHECK(apply_operator(OperatorId::DH, q, p)
            .dist(BiQuat::scalar(Complex(1.0, -3.0))) < 1e-14);
}

TEST_CASE("left and right operators differ on quaternion coefficients") {
  const QField xj = QField::poly(PolyField::parse("x*J"));
  const EvalPoint p = EvalPoint::at(0.1, 0.2, 0.3, 0.4);
  const BiQuat left = apply_operator(OperatorId::D, xj, p);
  const BiQuat right = apply_operator(OperatorId::DTilde, xj, p);
  CHECK(left.dist(BiQuat::unit(3)) < 1e-15);    // I J = K
  CHECK(right.dist(-BiQuat::unit(3)) < 1e-15);  // J I = -K
}

TEST_CASE("every generator variant is annihilated by its operator") {
  std::mt19937 rng(31);
  const PolyField G = PolyField::parse("x^2*y - z + x*J + 2*y*z*K");
  for (Regularity reg :
       {Regularity::Left, Regularity::Right, Regularity::ConjLeft,
        Regularity::ConjRight, Regularity::BiLeft, Regularity::BiRight,
        Regularity::BiConjLeft, Regularity::BiConjRight}) {
    const QField f = QField::regular(G, variant_for(reg));
    for (int k = 0; k < 5; ++k) {
      const EvalPoint p = random_point(rng, -1.5, 1.5);
      CHECK(regularity_residual(f, p, reg) < 1e-12);
    }
    // The same field fails the mismatched variants.
    const Regularity other =
        reg == Regularity::Left ? Regularity::Right : Regularity::Left;
    double worst = 0;
    for (int k = 0; k < 5; ++k)
      worst = std::max(worst,
                       regularity_residual(f, random_point(rng, -1.5, 1.5),
                                           other));
    CHECK(worst > 1e-3);
  }
}

TEST_CASE("finite differences agree with exact polynomial derivatives") {
  std::mt19937 rng(37);
  const PolyField p = PolyField::parse("w^2*x - y^3 + x*y*z*I - 2*w*J");
  const QField exact = QField::poly(p);
  const QField fd = hide_poly(p);
  for (int k = 0; k < 6; ++k) {
    const EvalPoint pt = random_point(rng, -1.0, 1.0);
    for (OperatorId op : {OperatorId::D, OperatorId::DTilde, OperatorId::DH,
                          OperatorId::DHTildeSharp}) {
      const BiQuat a = apply_operator(op, exact, pt);
      const BiQuat b = apply_operator(op, fd, pt);
      // Degree-3 polynomial: the order-4 stencil is exact up to roundoff.
      CHECK(a.dist(b) < 1e-9);
    }
  }
}

TEST_CASE("finite-difference error shrinks with the step") {
  const QField f = QField::wrap([](const EvalPoint& p) {
    return BiQuat::scalar(std::sin(p.w) * std::cos(p.x));
  });
  const EvalPoint pt = EvalPoint::at(0.3, 0.4, 0.5, 0.6);
  const BiQuat truth{std::cos(0.3) * std::cos(0.4),
                     -std::sin(0.3) * std::sin(0.4), 0.0, 0.0};
  FdScheme coarse{2, 0.1, false};
  FdScheme fine{2, 0.05, false};
  const double e1 = apply_operator(OperatorId::D, f, pt, coarse).dist(truth);
  const double e2 = apply_operator(OperatorId::D, f, pt, fine).dist(truth);
  CHECK(e1 > 0.0);
  // Second-order scheme: halving the step divides the error by about 4.
  CHECK(e1 / e2 > 3.0);
  CHECK(e1 / e2 < 5.0);
  // Raising the order beats both.
  FdScheme high{6, 0.05, false};
  CHECK(apply_operator(OperatorId::D, f, pt, high).dist(truth) < e2 / 100.0);
}

TEST_CASE("second-order operators") {
  const EvalPoint p = EvalPoint::at(0.2, 0.4, -0.3, 0.8);
  CHECK(laplace4(QField::poly(PolyField::parse("w^2 + x^2 + y^2 + z^2")), p)
            .dist(BiQuat::scalar(8.0)) < 1e-13);
  CHECK(wave_op(QField::poly(PolyField::parse("t^2 + x^2")), p)
            .dist(BiQuat{}) < 1e-13);
  CHECK(wave_op(QField::poly(PolyField::parse("t^2 - x^2")), p)
            .dist(BiQuat::scalar(4.0)) < 1e-13);
}

TEST_CASE("kernels are 4-harmonic or wave solutions") {
  std::mt19937 rng(41);
  for (auto kind : {KernelKind::FueterH, KernelKind::AltAxis,
                    KernelKind::ZeroRadial}) {
    const QField f = QField::kernel(Kernel(kind, {}, 1));
    for (int k = 0; k < 4; ++k) {
      const EvalPoint p = admissible_point(rng, f, 0.8);
      CHECK(laplace4(f, p).max_abs() < 1e-5);
    }
  }
  for (auto kind : {KernelKind::BiAltAxis, KernelKind::BiFueter}) {
    const QField f = QField::kernel(Kernel(kind, {}, 1));
    for (int k = 0; k < 4; ++k) {
      const EvalPoint p = admissible_point(rng, f, 0.8);
      CHECK(wave_op(f, p).max_abs() < 1e-5);
    }
  }
}

TEST_CASE("kernel regularity residuals") {
  std::mt19937 rng(43);
  const Point4 q0{0.25, -0.5, 0.0, 0.5};
  for (const Kernel& k :
       {Kernel::fueter_h(q0), Kernel::alt_axis(2, q0),
        Kernel::alt_axis(3, q0, true), Kernel::zero_radial(q0),
        Kernel::bi_alt_axis(1, q0), Kernel::bi_fueter(q0)}) {
    const QField f = QField::kernel(k);
    for (int s = 0; s < 6; ++s) {
      const EvalPoint p = admissible_point(rng, f, 0.8);
      CHECK(regularity_residual(f, p, k.regularity()) < 1e-6);
    }
  }
}

TEST_CASE("vector-derivative identities") {
  std::mt19937 rng(47);
  // nabla rvec = -3, exactly on the polynomial path.
  const QField rvec = QField::poly(PolyField::parse("x*I + y*J + z*K"));
  CHECK(apply_operator(OperatorId::D, rvec, EvalPoint::at(0, 1, 2, 3))
            .dist(BiQuat::scalar(-3.0)) < 1e-14);

  auto rn = [](const EvalPoint& p, int n) {  // |r|^-n
    const double r2 = std::norm(p.x) + std::norm(p.y) + std::norm(p.z);
    return std::pow(r2, -0.5 * n);
  };
  SingularLocus axis{SingularLocus::Kind::AxisLine, {}};
  for (int n : {1, 2, 3}) {
    // nabla (1/r^n) = -n rvec / r^(n+2); w-independent, so D computes it.
    const QField f = QField::wrap(
        [rn, n](const EvalPoint& p) { return BiQuat::scalar(rn(p, n)); },
        Regularity::None, {axis});
    for (int s = 0; s < 4; ++s) {
      const EvalPoint p = admissible_point(rng, f, 0.8);
      const double c = -n * rn(p, n + 2);
      const BiQuat want{0.0, c * p.x, c * p.y, c * p.z};
      CHECK(apply_operator(OperatorId::D, f, p).dist(want) <
            1e-6 * std::max(1.0, want.max_abs()));
    }
  }
  for (int n : {1, 3, 5}) {
    // nabla (rvec / r^(n+3)) = n / r^(n+3) for odd n.
    const QField f = QField::wrap(
        [rn, n](const EvalPoint& p) {
          const double c = rn(p, n + 3);
          return BiQuat{0.0, c * p.x, c * p.y, c * p.z};
        },
        Regularity::None, {axis});
    for (int s = 0; s < 4; ++s) {
      const EvalPoint p = admissible_point(rng, f, 0.8);
      const BiQuat want = BiQuat::scalar(n * rn(p, n + 3));
      CHECK(apply_operator(OperatorId::D, f, p).dist(want) <
            1e-6 * std::max(1.0, want.max_abs()));
    }
  }
}

TEST_CASE("derivative of a regular field") {
  const QField f = QField::regular(PolyField::parse("x"), GenVariant::Regular);
  const EvalPoint p = EvalPoint::at(0.5, 0.25, -0.5, 1.0);
  // nabla (x - wI) = I, and it matches -d_w.
  CHECK(derivative_regular(f, p).dist(BiQuat::unit(1)) < 1e-12);
  CHECK(code_of([&] {
          derivative_regular(QField::poly(PolyField::parse("x")), p);
        }) == ErrorCode::NotRegularHere);
}

TEST_CASE("stencil and scheme guards") {
  const QField k = QField::kernel(Kernel::fueter_h({}));
  const FdScheme fixed{4, 1e-2, false};
  CHECK(code_of([&] {
          apply_operator(OperatorId::D, k, EvalPoint::at(1e-2, 0, 0, 0),
                         fixed);
        }) == ErrorCode::StencilHitsSingularity);

  const QField f = QField::wrap(
      [](const EvalPoint& p) { return BiQuat::scalar(p.w); });
  CHECK(code_of([&] {
          apply_operator(OperatorId::D, f, EvalPoint{{0, 1}, 0, 0, 0});
        }) == ErrorCode::BadParameters);
  CHECK(code_of([&] {
          apply_operator(OperatorId::D, f, EvalPoint::at(0, 0, 0, 0),
                         FdScheme{3, 1e-3});
        }) == ErrorCode::BadParameters);
  CHECK(code_of([&] {
          apply_operator(OperatorId::D, f, EvalPoint::at(0, 0, 0, 0),
                         FdScheme{4, -1.0});
        }) == ErrorCode::BadParameters);
  CHECK(code_of([] { operator_for(Regularity::None); }) ==
        ErrorCode::BadParameters);
}

TEST_CASE("operator names") {
  CHECK(std::string(to_string(OperatorId::D)) == "D");
  CHECK(std::string(to_string(OperatorId::DHTildeSharp)) == "D~_H#");
  CHECK(operator_for(Regularity::BiLeft) == OperatorId::DH);
}
