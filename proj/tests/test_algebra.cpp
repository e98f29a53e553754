#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qcl/algebra.hpp"

using namespace qcl;

namespace {

BiQuat random_biquat(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return {{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)},
          {u(rng), u(rng)}};
}

BiQuat random_quat(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return {u(rng), u(rng), u(rng), u(rng)};
}

}  // namespace

TEST_CASE("basis multiplication table") {
  const BiQuat one = BiQuat::unit(0);
  const BiQuat I = BiQuat::unit(1);
  const BiQuat J = BiQuat::unit(2);
  const BiQuat K = BiQuat::unit(3);
  CHECK((I * I).dist(-one) == 0.0);
  CHECK((J * J).dist(-one) == 0.0);
  CHECK((K * K).dist(-one) == 0.0);
  CHECK((I * J).dist(K) == 0.0);
  CHECK((J * K).dist(I) == 0.0);
  CHECK((K * I).dist(J) == 0.0);
  CHECK((J * I).dist(-K) == 0.0);
  CHECK((K * J).dist(-I) == 0.0);
  CHECK((I * K).dist(-J) == 0.0);
  CHECK((I * J * K).dist(-one) == 0.0);
  CHECK_THROWS_AS(BiQuat::unit(4), Error);
  CHECK_THROWS_AS(BiQuat::unit(-1), Error);
}

TEST_CASE("product is associative and conjugations are (anti)morphisms") {
  std::mt19937 rng(7);
  for (int k = 0; k < 25; ++k) {
    const BiQuat a = random_biquat(rng), b = random_biquat(rng),
                 c = random_biquat(rng);
    const double scale = a.max_abs() * b.max_abs() * c.max_abs() + 1.0;
    CHECK(((a * b) * c).dist(a * (b * c)) < 1e-13 * scale);
    CHECK(qconj(a * b).dist(qconj(b) * qconj(a)) < 1e-13 * scale);
    CHECK(cconj(a * b).dist(cconj(a) * cconj(b)) < 1e-13 * scale);
    CHECK(hconj(a * b).dist(hconj(b) * hconj(a)) < 1e-13 * scale);
    CHECK(std::abs(norm2(a * b) - norm2(a) * norm2(b)) < 1e-12 * scale);
  }
}

TEST_CASE("component order is fixed") {
  const BiQuat q{{1, 2}, {3, 4}, {5, 6}, {7, 8}};
  const std::array<double, 8> want{1, 2, 3, 4, 5, 6, 7, 8};
  CHECK(q.components() == want);
  CHECK(q[0] == Complex(1, 2));
  CHECK(q[3] == Complex(7, 8));
  CHECK(q.max_abs() == doctest::Approx(std::hypot(7.0, 8.0)));
}

TEST_CASE("hermitian predicate") {
  const BiQuat h{2.0, {0, 1}, {0, -3}, {0, 0.5}};
  CHECK(h.is_hermitian());
  CHECK(hconj(h).dist(h) == 0.0);
  CHECK(!BiQuat{{1, 1}, 0.0, 0.0, 0.0}.is_hermitian());
  CHECK(!BiQuat{1.0, 1.0, 0.0, 0.0}.is_hermitian());
  CHECK(std::abs(norm2(h) - Complex(4.0 - 1.0 - 9.0 - 0.25)) < 1e-15);
}

TEST_CASE("inverse and zero divisors") {
  std::mt19937 rng(11);
  const BiQuat one = BiQuat::unit(0);
  for (int k = 0; k < 20; ++k) {
    const BiQuat a = random_biquat(rng);
    if (std::abs(norm2(a)) < 0.1) continue;
    CHECK((a * inverse(a)).dist(one) < 1e-13);
    CHECK((inverse(a) * a).dist(one) < 1e-13);
  }
  // 1 + iI has norm2 = 1 - 1 = 0: a zero divisor, not invertible.
  CHECK_THROWS_AS(inverse(BiQuat{1.0, {0, 1}, 0.0, 0.0}), Error);
  CHECK_THROWS_AS(inverse(BiQuat{}), Error);
  try {
    inverse(BiQuat{1.0, {0, 1}, 0.0, 0.0});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonInvertible);
  }
}

TEST_CASE("quaternion polar form round trip") {
  std::mt19937 rng(13);
  for (int k = 0; k < 25; ++k) {
    const BiQuat a = random_quat(rng);
    if (a.max_abs() < 0.1) continue;
    const PolarQuat p = polar(a);
    CHECK(p.r > 0.0);
    CHECK(p.theta >= 0.0);
    CHECK(p.theta <= kPi);
    CHECK(std::abs(p.axis.norm() - 1.0) < 1e-12);
    CHECK(p.reconstruct().dist(a) < 1e-12 * p.r);
  }
  // Pure scalar: canonical axis I, theta 0 or pi.
  const PolarQuat ps = polar(BiQuat::scalar(-3.0));
  CHECK(ps.r == doctest::Approx(3.0));
  CHECK(ps.theta == doctest::Approx(kPi));
  CHECK(ps.axis.x == doctest::Approx(1.0));
  CHECK_THROWS_AS(polar(BiQuat{{1, 1}, 0.0, 0.0, 0.0}), Error);
  CHECK_THROWS_AS(polar(BiQuat{}), Error);
}

TEST_CASE("hermitian polar form") {
  // Timelike: t = 2, |v| = 1.
  const BiQuat p{2.0, {0, 1}, 0.0, 0.0};
  const PolarHermitian hp = polar_h(p);
  CHECK(hp.kind == PolarHermitian::Kind::Timelike);
  CHECK(hp.r == doctest::Approx(std::sqrt(3.0)));
  CHECK(hp.theta == doctest::Approx(std::atanh(0.5)));
  CHECK(hp.reconstruct().dist(p) < 1e-12);

  // Spacelike: t = 1, |v| = 2.
  const BiQuat s{1.0, 0.0, {0, 2}, 0.0};
  const PolarHermitian hs = polar_h(s);
  CHECK(hs.kind == PolarHermitian::Kind::Spacelike);
  CHECK(hs.reconstruct().dist(s) < 1e-12);

  CHECK_THROWS_AS(polar_h(BiQuat{1.0, {0, 1}, 0.0, 0.0}), Error);  // null
  CHECK_THROWS_AS(polar_h(BiQuat{1.0, 1.0, 0.0, 0.0}), Error);  // not hermitian
  try {
    polar_h(BiQuat{1.0, {0, 1}, 0.0, 0.0});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NullDisplacement);
  }
}

TEST_CASE("lorentz boost") {
  const double alpha = 0.3;
  // q = cosh(a) + i sinh(a) I has norm2 = cosh^2 - sinh^2 = 1.
  const BiQuat q{std::cosh(alpha), {0, std::sinh(alpha)}, 0.0, 0.0};
  const BiQuat p{1.5, {0, 0.25}, {0, -0.75}, {0, 0.5}};
  const BiQuat out = lorentz(p, q);
  CHECK(out.is_hermitian(1e-12));
  // Rapidity-2a boost along x; y and z components are untouched.
  const double c2 = std::cosh(2 * alpha), s2 = std::sinh(2 * alpha);
  CHECK(std::abs(out.w - Complex(c2 * 1.5 + s2 * 0.25)) < 1e-12);
  CHECK(std::abs(out.x - Complex(0.0, c2 * 0.25 + s2 * 1.5)) < 1e-12);
  CHECK(std::abs(out.y - p.y) < 1e-12);
  CHECK(std::abs(out.z - p.z) < 1e-12);
  CHECK(std::abs(norm2(out) - norm2(p)) < 1e-12);

  CHECK_THROWS_AS(lorentz(p, BiQuat::scalar(2.0)), Error);       // not unit
  CHECK_THROWS_AS(lorentz(BiQuat{1.0, 1.0, 0.0, 0.0}, q), Error);  // not herm
}

TEST_CASE("lorentz preserves the interval for random boosts") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    const double a = 0.5 * u(rng);
    Vec3 n{u(rng), u(rng), u(rng)};
    if (n.norm() < 0.1) continue;
    n = n * (1.0 / n.norm());
    const Complex is(0.0, std::sinh(a));
    const BiQuat q{std::cosh(a), is * n.x, is * n.y, is * n.z};
    const BiQuat p{u(rng) * 2, {0, u(rng)}, {0, u(rng)}, {0, u(rng)}};
    const BiQuat out = lorentz(p, q);
    CHECK(out.is_hermitian(1e-10));
    CHECK(std::abs(norm2(out) - norm2(p)) < 1e-10);
  }
}

TEST_CASE("rotation") {
  const BiQuat I = BiQuat::unit(1);
  const BiQuat J = BiQuat::unit(2);
  // Quarter turn about z sends the x direction to y.
  CHECK(rotate(I, kPi / 2, {0, 0, 1}).dist(J) < 1e-15);
  CHECK(rotate(I, kPi, {0, 0, 1}).dist(-I) < 1e-15);
  // Scalar part and norm are invariant.
  const BiQuat p{0.5, 1.0, -2.0, 0.25};
  const BiQuat r = rotate(p, 1.1, {1, 2, -1});
  CHECK(r.is_quaternion());
  CHECK(std::abs(r.w - p.w) < 1e-14);
  CHECK(std::abs(norm2(r) - norm2(p)) < 1e-13);
  CHECK_THROWS_AS(rotate(p, 1.0, {0, 0, 0}), Error);
}

TEST_CASE("string forms") {
  CHECK(to_string(BiQuat{1.0, {0, 2}, 0.0, -1.0}).size() > 0);
  CHECK(std::string(to_string(ErrorCode::BranchJump)) == "BranchJump");
  const Error e(ErrorCode::BadParameters, "probe");
  CHECK(std::string(e.what()).find("BadParameters") != std::string::npos);
  CHECK(std::string(e.what()).find("probe") != std::string::npos);
}
