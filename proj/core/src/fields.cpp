#include "qcl/fields.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace qcl {

namespace {

// Integer power of a complex number (small exponents only).
Complex ipow(Complex b, int n) {
  Complex out = 1.0;
  for (int i = 0; i < n; ++i) out *= b;
  return out;
}

// r^n for integer n (possibly negative or odd), given r and r^2.  Odd powers
// pick up one factor of r so the principal square root enters exactly once.
Complex rpow(Complex r, Complex r2, int n) {
  const int m = n < 0 ? -n : n;
  Complex out = ipow(r2, m / 2);
  if (m % 2) out *= r;
  return n < 0 ? 1.0 / out : out;
}

// Shortest decimal form that round-trips through strtod.
std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

const char* to_string(Regularity r) {
  switch (r) {
    case Regularity::None: return "none";
    case Regularity::Left: return "left";
    case Regularity::Right: return "right";
    case Regularity::ConjLeft: return "conj-left";
    case Regularity::ConjRight: return "conj-right";
    case Regularity::BiLeft: return "bi-left";
    case Regularity::BiRight: return "bi-right";
    case Regularity::BiConjLeft: return "bi-conj-left";
    case Regularity::BiConjRight: return "bi-conj-right";
  }
  return "none";
}

double SingularLocus::clearance(const EvalPoint& p) const {
  const Complex w = p.w - q0.w;
  const Complex x = p.x - q0.x;
  const Complex y = p.y - q0.y;
  const Complex z = p.z - q0.z;
  const double raxis =
      std::sqrt(std::norm(x) + std::norm(y) + std::norm(z));
  auto cone = [&] {
    const Complex r = std::sqrt(x * x + y * y + z * z);
    return std::min(std::abs(w - r), std::abs(w + r)) / std::sqrt(2.0);
  };
  switch (kind) {
    case Kind::None:
      return std::numeric_limits<double>::infinity();
    case Kind::Point:
      return std::sqrt(std::norm(w) + raxis * raxis);
    case Kind::AxisLine:
      return raxis;
    case Kind::LightCone:
      return cone();
    case Kind::AxisLineAndCone:
      return std::min(raxis, cone());
  }
  return std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// PolyField
// ---------------------------------------------------------------------------

void PolyField::add_term(const Key& k, const BiQuat& c) {
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    if (c.max_abs() != 0.0) terms_.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second.max_abs() == 0.0) terms_.erase(it);
}

PolyField PolyField::constant(const BiQuat& c) {
  PolyField p;
  p.add_term({0, 0, 0, 0}, c);
  return p;
}

PolyField PolyField::coordinate(int axis) {
  if (axis < 0 || axis > 3) fail(ErrorCode::BadParameters, "coordinate axis");
  Key k{0, 0, 0, 0};
  k[axis] = 1;
  return monomial(k, BiQuat::scalar(1.0));
}

PolyField PolyField::monomial(const Key& k, const BiQuat& c) {
  for (int e : k)
    if (e < 0) fail(ErrorCode::BadParameters, "negative exponent");
  PolyField p;
  p.add_term(k, c);
  return p;
}

PolyField PolyField::operator+(const PolyField& o) const {
  PolyField out = *this;
  for (const auto& [k, c] : o.terms_) out.add_term(k, c);
  return out;
}

PolyField PolyField::operator-(const PolyField& o) const {
  PolyField out = *this;
  for (const auto& [k, c] : o.terms_) out.add_term(k, -c);
  return out;
}

PolyField PolyField::operator*(const PolyField& o) const {
  PolyField out;
  for (const auto& [ka, ca] : terms_)
    for (const auto& [kb, cb] : o.terms_)
      out.add_term({ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2],
                    ka[3] + kb[3]},
                   ca * cb);
  return out;
}

PolyField PolyField::left_mul(const BiQuat& c) const {
  PolyField out;
  for (const auto& [k, v] : terms_) out.add_term(k, c * v);
  return out;
}

PolyField PolyField::right_mul(const BiQuat& c) const {
  PolyField out;
  for (const auto& [k, v] : terms_) out.add_term(k, v * c);
  return out;
}

PolyField PolyField::scaled(Complex s) const {
  PolyField out;
  for (const auto& [k, v] : terms_) out.add_term(k, v * s);
  return out;
}

PolyField PolyField::partial(int axis) const {
  if (axis < 0 || axis > 3) fail(ErrorCode::BadParameters, "partial axis");
  PolyField out;
  for (const auto& [k, v] : terms_) {
    if (k[axis] == 0) continue;
    Key kd = k;
    kd[axis] -= 1;
    out.add_term(kd, v * double(k[axis]));
  }
  return out;
}

PolyField PolyField::nabla_left() const {
  PolyField out;
  for (int m = 1; m <= 3; ++m)
    out = out + partial(m).left_mul(BiQuat::unit(m));
  return out;
}

PolyField PolyField::nabla_right() const {
  PolyField out;
  for (int m = 1; m <= 3; ++m)
    out = out + partial(m).right_mul(BiQuat::unit(m));
  return out;
}

BiQuat PolyField::eval(const EvalPoint& p) const {
  BiQuat acc{};
  for (const auto& [k, v] : terms_) {
    const Complex mono =
        ipow(p.w, k[0]) * ipow(p.x, k[1]) * ipow(p.y, k[2]) * ipow(p.z, k[3]);
    acc += v * mono;
  }
  return acc;
}

bool PolyField::spatial_only() const {
  for (const auto& [k, v] : terms_)
    if (k[0] != 0) return false;
  return true;
}

int PolyField::degree() const {
  int d = 0;
  for (const auto& [k, v] : terms_)
    d = std::max(d, k[0] + k[1] + k[2] + k[3]);
  return d;
}

bool PolyField::near_equal(const PolyField& o, double tol) const {
  auto check = [&](const PolyField& a, const PolyField& b) {
    for (const auto& [k, v] : a.terms_) {
      auto it = b.terms_.find(k);
      const BiQuat other = it == b.terms_.end() ? BiQuat{} : it->second;
      if (v.dist(other) > tol) return false;
    }
    return true;
  };
  return check(*this, o) && check(o, *this);
}

namespace {

// One '*'-separated factor of a polynomial term.
void apply_factor(const std::string& f, BiQuat& coef,
                  PolyField::Key& exps) {
  if (f.empty()) fail(ErrorCode::BadParameters, "empty factor");
  if (f == "i") {
    coef = coef * Complex(0.0, 1.0);
    return;
  }
  if (f == "I" || f == "J" || f == "K") {
    coef = coef * BiQuat::unit(1 + (f[0] - 'I'));
    return;
  }
  const char c0 = f[0];
  if (c0 == 'w' || c0 == 't' || c0 == 'x' || c0 == 'y' || c0 == 'z') {
    int axis = 0;
    if (c0 == 'x') axis = 1;
    if (c0 == 'y') axis = 2;
    if (c0 == 'z') axis = 3;
    int e = 1;
    if (f.size() > 1) {
      if (f[1] != '^') fail(ErrorCode::BadParameters, "bad variable: " + f);
      char* end = nullptr;
      const long v = std::strtol(f.c_str() + 2, &end, 10);
      if (end != f.c_str() + f.size() || v <= 0)
        fail(ErrorCode::BadParameters, "bad exponent: " + f);
      e = int(v);
    }
    exps[axis] += e;
    return;
  }
  // Decimal or rational a/b.
  auto number = [](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
      fail(ErrorCode::BadParameters, "bad number: " + s);
    return v;
  };
  const auto slash = f.find('/');
  double v;
  if (slash == std::string::npos) {
    v = number(f);
  } else {
    const double den = number(f.substr(slash + 1));
    if (den == 0.0) fail(ErrorCode::BadParameters, "zero denominator: " + f);
    v = number(f.substr(0, slash)) / den;
  }
  coef = coef * v;
}

}  // namespace

PolyField PolyField::parse(const std::string& text) {
  std::string s;
  s.reserve(text.size());
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) fail(ErrorCode::BadParameters, "empty polynomial");

  PolyField out;
  std::size_t i = 0;
  while (i < s.size()) {
    double sign = 1.0;
    while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      if (s[i] == '-') sign = -sign;
      ++i;
    }
    // Term extends to the next +/- that is not part of an exponent like 1e-3.
    std::size_t j = i;
    while (j < s.size()) {
      const char c = s[j];
      if ((c == '+' || c == '-') &&
          !(j > 0 && (s[j - 1] == 'e' || s[j - 1] == 'E') && j > i))
        break;
      ++j;
    }
    const std::string term = s.substr(i, j - i);
    if (term.empty()) fail(ErrorCode::BadParameters, "empty term");
    BiQuat coef = BiQuat::scalar(sign);
    Key exps{0, 0, 0, 0};
    std::size_t p = 0;
    while (p <= term.size()) {
      const auto q = term.find('*', p);
      const std::string f =
          term.substr(p, (q == std::string::npos ? term.size() : q) - p);
      apply_factor(f, coef, exps);
      if (q == std::string::npos) break;
      p = q + 1;
    }
    out.add_term(exps, coef);
    i = j;
  }
  return out;
}

std::string PolyField::to_string() const {
  static const char* kBasis[4] = {"", "I", "J", "K"};
  static const char* kVar[4] = {"w", "x", "y", "z"};
  std::string out;
  for (const auto& [k, c] : terms_) {
    for (int ax = 0; ax < 4; ++ax) {
      const Complex comp = c[ax];
      for (int im = 0; im < 2; ++im) {
        const double val = im ? comp.imag() : comp.real();
        if (val == 0.0) continue;
        if (out.empty()) {
          if (val < 0) out += "-";
        } else {
          out += val < 0 ? " - " : " + ";
        }
        std::vector<std::string> factors;
        const bool has_other =
            im || ax > 0 || k[0] || k[1] || k[2] || k[3];
        const double mag = std::fabs(val);
        if (mag != 1.0 || !has_other) factors.push_back(fmt_double(mag));
        if (im) factors.push_back("i");
        if (ax > 0) factors.push_back(kBasis[ax]);
        for (int v = 0; v < 4; ++v) {
          if (k[v] == 0) continue;
          factors.push_back(k[v] == 1 ? std::string(kVar[v])
                                      : std::string(kVar[v]) + "^" +
                                            std::to_string(k[v]));
        }
        for (std::size_t f = 0; f < factors.size(); ++f) {
          if (f) out += "*";
          out += factors[f];
        }
      }
    }
  }
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------------------
// Generating-function exponentials
// ---------------------------------------------------------------------------

Regularity regularity_of(GenVariant v) {
  switch (v) {
    case GenVariant::Regular: return Regularity::Left;
    case GenVariant::Conjugate: return Regularity::ConjLeft;
    case GenVariant::Right: return Regularity::Right;
    case GenVariant::ConjRight: return Regularity::ConjRight;
    case GenVariant::BiRegular: return Regularity::BiLeft;
    case GenVariant::BiConjugate: return Regularity::BiConjLeft;
    case GenVariant::BiRight: return Regularity::BiRight;
    case GenVariant::BiConjRight: return Regularity::BiConjRight;
  }
  return Regularity::None;
}

PolyField gen_exp_poly(const PolyField& G, GenVariant v) {
  if (!G.spatial_only())
    fail(ErrorCode::NotSpatial, "generator depends on the time coordinate");
  const bool right = v == GenVariant::Right || v == GenVariant::ConjRight ||
                     v == GenVariant::BiRight ||
                     v == GenVariant::BiConjRight;
  const bool conj = v == GenVariant::Conjugate ||
                    v == GenVariant::ConjRight ||
                    v == GenVariant::BiConjugate ||
                    v == GenVariant::BiConjRight;
  const bool bi = v == GenVariant::BiRegular || v == GenVariant::BiConjugate ||
                  v == GenVariant::BiRight || v == GenVariant::BiConjRight;
  const Complex step = (bi ? Complex(0.0, 1.0) : Complex(1.0)) *
                       (conj ? 1.0 : -1.0);

  PolyField out = G;
  PolyField cur = G;
  Complex fk = 1.0;
  for (int k = 1; !cur.empty(); ++k) {
    if (k > 256) fail(ErrorCode::BadParameters, "series does not terminate");
    cur = right ? cur.nabla_right() : cur.nabla_left();
    if (cur.empty()) break;
    fk *= step / double(k);
    out = out + PolyField::monomial({k, 0, 0, 0}, BiQuat::scalar(fk)) * cur;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

namespace {

// Spatial function as a sum of c * x^a y^b z^c * r^n terms; the class is
// closed under the vector derivative, which is what makes the truncated
// generator series an independent oracle for the closed forms.
struct STerm {
  int a = 0, b = 0, c = 0, n = 0;
  BiQuat coef{};
};
using STermList = std::vector<STerm>;

STermList merge_terms(const STermList& in) {
  std::map<std::array<int, 4>, BiQuat> acc;
  for (const auto& t : in) acc[{t.a, t.b, t.c, t.n}] += t.coef;
  STermList out;
  for (const auto& [k, c] : acc)
    if (c.max_abs() != 0.0) out.push_back({k[0], k[1], k[2], k[3], c});
  return out;
}

// Left vector derivative (I d_x + J d_y + K d_z) applied to a term list.
STermList nabla_terms(const STermList& in) {
  STermList out;
  for (const auto& t : in) {
    for (int m = 1; m <= 3; ++m) {
      const BiQuat c2 = BiQuat::unit(m) * t.coef;
      int e[3] = {t.a, t.b, t.c};
      if (e[m - 1] > 0) {
        STerm d{t.a, t.b, t.c, t.n, c2 * double(e[m - 1])};
        (m == 1 ? d.a : m == 2 ? d.b : d.c) -= 1;
        out.push_back(d);
      }
      if (t.n != 0) {
        STerm d{t.a, t.b, t.c, t.n - 2, c2 * double(t.n)};
        (m == 1 ? d.a : m == 2 ? d.b : d.c) += 1;
        out.push_back(d);
      }
    }
  }
  return merge_terms(out);
}

BiQuat eval_terms(const STermList& terms, Complex x, Complex y, Complex z,
                  Complex r, Complex r2) {
  BiQuat acc{};
  for (const auto& t : terms)
    acc += t.coef * (ipow(x, t.a) * ipow(y, t.b) * ipow(z, t.c) *
                     rpow(r, r2, t.n));
  return acc;
}

constexpr int kSeriesLevels = 12;  // cached powers of the vector derivative
using SeriesCache = std::vector<STermList>;

STermList generator_terms(KernelKind kind, int axis) {
  switch (kind) {
    case KernelKind::FueterH:
    case KernelKind::BiFueter:
      // -r_vec / r^4
      return {{1, 0, 0, -4, -BiQuat::unit(1)},
              {0, 1, 0, -4, -BiQuat::unit(2)},
              {0, 0, 1, -4, -BiQuat::unit(3)}};
    case KernelKind::AltAxis:
    case KernelKind::BiAltAxis: {
      // x_axis / r^4
      STerm t{0, 0, 0, -4, BiQuat::scalar(1.0)};
      (axis == 1 ? t.a : axis == 2 ? t.b : t.c) = 1;
      return {t};
    }
    case KernelKind::ZeroRadial:
      // 1 / r^3
      return {{0, 0, 0, -3, BiQuat::scalar(1.0)}};
  }
  return {};
}

}  // namespace

Kernel::Kernel(KernelKind kind, Point4 q0, int axis, bool conj)
    : kind_(kind), q0_(q0), axis_(axis), conj_(conj) {
  if (axis_ < 1 || axis_ > 3)
    fail(ErrorCode::BadParameters, "kernel axis must be 1, 2 or 3");
  auto cache = std::make_shared<SeriesCache>();
  cache->push_back(generator_terms(kind_, axis_));
  for (int k = 1; k <= kSeriesLevels; ++k)
    cache->push_back(nabla_terms(cache->back()));
  series_cache_ = std::shared_ptr<const void>(cache, cache.get());
}

Kernel Kernel::fueter_h(const Point4& q0) {
  return Kernel(KernelKind::FueterH, q0);
}
Kernel Kernel::alt_axis(int axis, const Point4& q0, bool conj) {
  return Kernel(KernelKind::AltAxis, q0, axis, conj);
}
Kernel Kernel::zero_radial(const Point4& q0) {
  return Kernel(KernelKind::ZeroRadial, q0);
}
Kernel Kernel::bi_alt_axis(int axis, const Point4& q0, bool conj) {
  return Kernel(KernelKind::BiAltAxis, q0, axis, conj);
}
Kernel Kernel::bi_fueter(const Point4& q0) {
  return Kernel(KernelKind::BiFueter, q0);
}

DetourRule Kernel::detour_rule() const {
  return conj_ ? DetourRule::IncludeMinus : DetourRule::IncludePlus;
}

SingularLocus Kernel::locus() const {
  SingularLocus l;
  l.q0 = q0_;
  switch (kind_) {
    case KernelKind::FueterH:
      l.kind = SingularLocus::Kind::Point;
      break;
    case KernelKind::AltAxis:
    case KernelKind::ZeroRadial:
      l.kind = SingularLocus::Kind::AxisLine;
      break;
    case KernelKind::BiAltAxis:
      l.kind = SingularLocus::Kind::AxisLineAndCone;
      break;
    case KernelKind::BiFueter:
      l.kind = SingularLocus::Kind::LightCone;
      break;
  }
  return l;
}

Regularity Kernel::regularity() const {
  const bool bi = kind_ == KernelKind::BiAltAxis || kind_ == KernelKind::BiFueter;
  if (bi) return conj_ ? Regularity::BiConjLeft : Regularity::BiLeft;
  return conj_ ? Regularity::ConjLeft : Regularity::Left;
}

std::string Kernel::name() const {
  std::string n;
  static const char* kAxis[4] = {"", "x", "y", "z"};
  switch (kind_) {
    case KernelKind::FueterH: n = "fueter_h"; break;
    case KernelKind::AltAxis: n = std::string("alt_axis_") + kAxis[axis_]; break;
    case KernelKind::ZeroRadial: n = "zero_radial"; break;
    case KernelKind::BiAltAxis:
      n = std::string("bi_alt_axis_") + kAxis[axis_];
      break;
    case KernelKind::BiFueter: n = "bi_fueter"; break;
  }
  if (conj_) n += "_conj";
  return n;
}

BiQuat Kernel::series(const EvalPoint& p, int n_terms,
                      double max_ratio) const {
  if (n_terms < 1 || n_terms > kSeriesLevels)
    fail(ErrorCode::BadParameters, "series term count out of range");
  const Complex w = p.w - q0_.w;
  const Complex x = p.x - q0_.x;
  const Complex y = p.y - q0_.y;
  const Complex z = p.z - q0_.z;
  const Complex r2 = x * x + y * y + z * z;
  const Complex r = std::sqrt(r2);
  const double scale = std::max(1.0, p.abs_scale() + q0_.norm());
  if (std::abs(r) < 1e-14 * scale)
    fail(ErrorCode::OnSingularLocus, "series at zero spatial radius");
  if (std::abs(w) > max_ratio * std::abs(r))
    fail(ErrorCode::ConvergenceDomain,
         "series requested outside its convergence control");

  const bool bi =
      kind_ == KernelKind::BiAltAxis || kind_ == KernelKind::BiFueter;
  Complex step = bi ? Complex(0.0, 1.0) * w : w;
  if (!conj_) step = -step;

  const auto& cache = *static_cast<const SeriesCache*>(series_cache_.get());
  BiQuat acc{};
  Complex fk = 1.0;
  for (int k = 0; k < n_terms; ++k) {
    if (k > 0) fk *= step / double(k);
    acc += eval_terms(cache[std::size_t(k)], x, y, z, r, r2) * fk;
  }
  return acc;
}

BiQuat Kernel::eval(const EvalPoint& p) const { return eval_impl(p, false); }

BiQuat Kernel::eval_cancelled(const EvalPoint& p) const {
  return eval_impl(p, true);
}

BiQuat Kernel::eval_impl(const EvalPoint& p, bool drop_logs) const {
  const double scale = std::max(1.0, p.abs_scale() + q0_.norm());
  if (locus().clearance(p) < 1e-12 * scale)
    fail(ErrorCode::OnSingularLocus, name() + " evaluated on its locus");

  Complex w = p.w - q0_.w;
  if (conj_) w = -w;
  const Complex x = p.x - q0_.x;
  const Complex y = p.y - q0_.y;
  const Complex z = p.z - q0_.z;
  const Complex r2 = x * x + y * y + z * z;
  const Complex r = std::sqrt(r2);
  const BiQuat rvec{0.0, x, y, z};

  switch (kind_) {
    case KernelKind::FueterH: {
      const Complex A = w * w + r2;
      return BiQuat{w, -x, -y, -z} * (1.0 / (A * A));
    }
    case KernelKind::BiFueter: {
      const Complex it = Complex(0.0, 1.0) * w;
      const Complex A = it * it + r2;
      return BiQuat{it, -x, -y, -z} * (1.0 / (A * A));
    }
    case KernelKind::ZeroRadial: {
      const Complex A = w * w + r2;
      const Complex s = (r2 - w * w) / (r * A * A);
      const Complex vc = w * (3.0 * r2 + w * w) / (r * r2 * A * A);
      return BiQuat::scalar(s) + rvec * vc;
    }
    case KernelKind::AltAxis:
    case KernelKind::BiAltAxis: {
      const bool bi = kind_ == KernelKind::BiAltAxis;
      // The transcendental bracket degenerates to 0/0 as the time offset
      // vanishes; hand off to the generator series there.
      if (!drop_logs && std::abs(w) < series_crossover_ * std::abs(r)) {
        // series() applies the reflection itself; pass the raw point.
        return series(p, 10, series_crossover_ * 1.0001);
      }
      // In the Hermitian case the closed form is the quaternion one continued
      // in the time variable, w -> i t, with atan(i t / r) = i atanh(t / r)
      // continued per the detour convention.
      const Complex weff = bi ? Complex(0.0, 1.0) * w : w;
      const Complex A = weff * weff + r2;
      Complex T = 0.0;
      if (!drop_logs)
        T = bi ? Complex(0.0, 1.0) * atanh_cont(w / r, detour_rule())
               : std::atan(w / r);
      const Complex xa = axis_ == 1 ? x : axis_ == 2 ? y : z;
      const BiQuat ea = BiQuat::unit(axis_);
      Complex b2 = 1.0 / A;
      Complex b3 = (5.0 * r2 + 3.0 * weff * weff) / (8.0 * A * A);
      if (!drop_logs) {
        b2 += T / (r * weff);
        b3 += 3.0 * T / (8.0 * r * weff);
      }
      const Complex c2 = -(weff / (2.0 * r2)) * b2;
      const Complex c3 = 4.0 * xa * weff / (r2 * r2) * b3;
      return BiQuat::scalar(xa / (A * A)) + ea * c2 + rvec * c3;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// QField
// ---------------------------------------------------------------------------

QField QField::constant(const BiQuat& c) {
  return poly(PolyField::constant(c), Regularity::None);
}

QField QField::poly(const PolyField& p, Regularity reg) {
  QField f;
  f.eval_ = [p](const EvalPoint& q) { return p.eval(q); };
  f.poly_ = p;
  f.reg_ = reg;
  return f;
}

QField QField::kernel(const Kernel& k) {
  QField f;
  f.eval_ = [k](const EvalPoint& q) { return k.eval(q); };
  f.kernel_ = k;
  f.reg_ = k.regularity();
  f.loci_ = {k.locus()};
  return f;
}

QField QField::wrap(std::function<BiQuat(const EvalPoint&)> fn,
                    Regularity reg, std::vector<SingularLocus> loci) {
  QField f;
  f.eval_ = std::move(fn);
  f.reg_ = reg;
  f.loci_ = std::move(loci);
  return f;
}

QField QField::product(const QField& a, const QField& b) {
  QField f;
  auto ae = a.eval_;
  auto be = b.eval_;
  f.eval_ = [ae, be](const EvalPoint& q) { return ae(q) * be(q); };
  if (a.poly_ && b.poly_) f.poly_ = *a.poly_ * *b.poly_;
  f.loci_ = a.loci_;
  f.loci_.insert(f.loci_.end(), b.loci_.begin(), b.loci_.end());
  return f;
}

QField QField::regular(const PolyField& G, GenVariant v) {
  return poly(gen_exp_poly(G, v), regularity_of(v));
}

BiQuat QField::operator()(const EvalPoint& p) const {
  if (!eval_) return {};
  return eval_(p);
}

double QField::clearance(const EvalPoint& p) const {
  double c = std::numeric_limits<double>::infinity();
  for (const auto& l : loci_) c = std::min(c, l.clearance(p));
  return c;
}

}  // namespace qcl
