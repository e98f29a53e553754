#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "qcl/errors.hpp"

namespace qcl {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Spatial 3-vector with real components.
struct Vec3 {
  double x = 0, y = 0, z = 0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
};

// Real point of R^4 in coordinate order (w, x, y, z); w doubles as the time
// coordinate t in the Hermitian setting.
struct Point4 {
  double w = 0, x = 0, y = 0, z = 0;

  Vec3 spatial() const { return {x, y, z}; }
  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
  Point4 operator+(const Point4& o) const {
    return {w + o.w, x + o.x, y + o.y, z + o.z};
  }
  Point4 operator-(const Point4& o) const {
    return {w - o.w, x - o.x, y - o.y, z - o.z};
  }
};

// Biquaternion: q = w + x*I + y*J + z*K with complex coordinates and
// I^2 = J^2 = K^2 = IJK = -1, IJ = K = -JI.  Real quaternions are the
// subset with all imaginary parts zero (a predicate, not a separate type).
struct BiQuat {
  Complex w{}, x{}, y{}, z{};

  static BiQuat scalar(Complex s) { return {s, 0.0, 0.0, 0.0}; }
  // Basis element for axis 0..3 -> 1, I, J, K.
  static BiQuat unit(int axis);
  static BiQuat from_vec(const Vec3& v) { return {0.0, v.x, v.y, v.z}; }

  Complex& operator[](int i) { return *(&w + i); }
  const Complex& operator[](int i) const { return *(&w + i); }

  BiQuat operator+(const BiQuat& o) const {
    return {w + o.w, x + o.x, y + o.y, z + o.z};
  }
  BiQuat operator-(const BiQuat& o) const {
    return {w - o.w, x - o.x, y - o.y, z - o.z};
  }
  BiQuat operator-() const { return {-w, -x, -y, -z}; }
  BiQuat& operator+=(const BiQuat& o) {
    w += o.w; x += o.x; y += o.y; z += o.z;
    return *this;
  }

  // Largest coordinate modulus; the scale used by degeneracy thresholds.
  double max_abs() const;
  // Max modulus over the componentwise difference.
  double dist(const BiQuat& o) const;

  bool is_quaternion() const {
    return w.imag() == 0.0 && x.imag() == 0.0 && y.imag() == 0.0 &&
           z.imag() == 0.0;
  }
  bool is_hermitian(double tol = 0.0) const;

  // Fixed serialization order [Re w, Im w, Re x, Im x, Re y, Im y, Re z, Im z].
  std::array<double, 8> components() const {
    return {w.real(), w.imag(), x.real(), x.imag(),
            y.real(), y.imag(), z.real(), z.imag()};
  }
};

// Hamilton product on complex coordinates.
BiQuat operator*(const BiQuat& a, const BiQuat& b);
inline BiQuat operator*(const BiQuat& a, Complex s) {
  return {a.w * s, a.x * s, a.y * s, a.z * s};
}
inline BiQuat operator*(Complex s, const BiQuat& a) { return a * s; }
inline BiQuat operator*(const BiQuat& a, double s) { return a * Complex(s); }
inline BiQuat operator*(double s, const BiQuat& a) { return a * Complex(s); }

// Quaternion conjugate q# (vector part negated); an anti-automorphism.
inline BiQuat qconj(const BiQuat& a) { return {a.w, -a.x, -a.y, -a.z}; }
// Complex conjugate q* (per coordinate).
inline BiQuat cconj(const BiQuat& a) {
  return {std::conj(a.w), std::conj(a.x), std::conj(a.y), std::conj(a.z)};
}
// Hermitian conjugate q#* = qconj(cconj(q)).
inline BiQuat hconj(const BiQuat& a) { return qconj(cconj(a)); }

// norm2(q) = q q# = w^2 + x^2 + y^2 + z^2 (a complex number in general;
// the Minkowski interval t^2 - |r|^2 on Hermitian biquaternions).
inline Complex norm2(const BiQuat& a) {
  return a.w * a.w + a.x * a.x + a.y * a.y + a.z * a.z;
}

// Multiplicative inverse q# / norm2(q); throws NonInvertible when norm2 is
// degenerate relative to the component scale (|norm2| < 1e-12 * max_abs^2),
// which covers zero divisors like 1 + iI.
BiQuat inverse(const BiQuat& a);

// Polar form of a nonzero real quaternion: a = r (cos(theta) + n sin(theta))
// with r > 0, theta in [0, pi] and unit axis n.  theta = pi only on the
// negative real ray; for a pure scalar the axis is canonically I.
struct PolarQuat {
  double r = 0;
  double theta = 0;
  Vec3 axis{1, 0, 0};

  BiQuat reconstruct() const;
};
PolarQuat polar(const BiQuat& a);

// Polar form of a non-null Hermitian biquaternion:
//   timelike  p = r (cosh(theta) + i n sinh(theta)),
//   spacelike p = r (sinh(theta) + i n cosh(theta)),
// with theta >= 0 and unit axis n.  Null inputs throw NullDisplacement.
struct PolarHermitian {
  enum class Kind { Timelike, Spacelike };
  Kind kind = Kind::Timelike;
  double r = 0;
  double theta = 0;
  Vec3 axis{1, 0, 0};

  BiQuat reconstruct() const;
};
PolarHermitian polar_h(const BiQuat& p);

// Lorentz transform p -> q p hconj(q) for unit-norm2 q acting on a Hermitian
// biquaternion p.  Throws NotUnitNorm / NotHermitian on bad operands.
BiQuat lorentz(const BiQuat& p, const BiQuat& q);

// 3D rotation of a real quaternion: exp(theta n/2) p exp(-theta n/2).
BiQuat rotate(const BiQuat& p, double theta, const Vec3& axis);

std::string to_string(const BiQuat& a);

}  // namespace qcl
