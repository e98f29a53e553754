#pragma once

#include <cmath>
#include <utility>
#include <vector>

namespace qcl {

// Compensated (Kahan-Neumaier) accumulator.  Summation order is fixed by the
// caller, which keeps every integration result bit-reproducible.
struct KahanSum {
  double s = 0, c = 0;

  void add(double v) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

// Gauss-Legendre nodes and weights on [-1, 1]; cached per order.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(
    int order);

// Nodes/weights of a panelised rule on [0, 1].
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre with `panels` equal panels on [0, 1].
Rule1D gl_rule01(int order, int panels);

// Midpoint rule with n equispaced nodes on [0, 1]; exact for trigonometric
// polynomials of degree < n on periodic integrands (the azimuthal axes).
Rule1D uniform_rule01(int n);

}  // namespace qcl
