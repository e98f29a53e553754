#include "qcl/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace qcl {

namespace {

// Newton iteration on P_n with the usual interlacing initial guesses.
std::pair<std::vector<double>, std::vector<double>> compute_gl(int n) {
  std::vector<double> x(n), w(n);
  const double pi = 3.141592653589793238462643383279502884;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(pi * (i + 0.75) / (n + 0.5));
    double p0, p1, dp;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = -t;
    x[n - 1 - i] = t;
    const double wi = 2.0 / ((1.0 - t * t) * dp * dp);
    w[i] = wi;
    w[n - 1 - i] = wi;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
  return {x, w};
}

}  // namespace

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(
    int order) {
  if (order < 1 || order > 512)
    throw std::invalid_argument("gauss_legendre order out of range");
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>>
      cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gl(order)).first;
  return it->second;
}

Rule1D gl_rule01(int order, int panels) {
  const auto& [xs, ws] = gauss_legendre(order);
  Rule1D r;
  r.nodes.reserve(order * panels);
  r.weights.reserve(order * panels);
  const double h = 1.0 / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = p * h;
    for (int i = 0; i < order; ++i) {
      r.nodes.push_back(a + 0.5 * h * (xs[i] + 1.0));
      r.weights.push_back(0.5 * h * ws[i]);
    }
  }
  return r;
}

Rule1D uniform_rule01(int n) {
  Rule1D r;
  r.nodes.reserve(n);
  r.weights.assign(n, 1.0 / n);
  for (int i = 0; i < n; ++i) r.nodes.push_back((i + 0.5) / n);
  return r;
}

}  // namespace qcl
