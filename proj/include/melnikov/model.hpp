// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "melnikov/rational.hpp"

namespace mlk::model {

// Exponent of the switching curve y = x^m.  Parity of m drives all branch
// selection downstream, so it is kept as a strong type rather than an int.
struct CurvePower {
  int m = 1;

  explicit CurvePower(int m_) : m(m_) {
    if (m < 1) throw std::domain_error("CurvePower: m must be a positive integer");
  }
  bool odd() const { return m % 2 == 1; }
  bool even() const { return m % 2 == 0; }
  // m = 2k+1 or m = 2k.
  int k() const { return odd() ? (m - 1) / 2 : m / 2; }
};

struct Point {
  double x = 0, y = 0;
};

// Orbit label: u is the abscissa of the right intersection point B, and
// h = u^2 + u^{2m} is the energy of the circle x^2 + y^2 = h.
struct OrbitParam {
  double u;
  double h;
  CurvePower m;
};

// The unique u > 0 with u^2 + u^{2m} = h, to relative 1e-14.
double u_from_h(double h, CurvePower m);

inline double h_from_u(double u, CurvePower m) {
  return u * u + std::pow(u, 2.0 * m.m);
}

inline OrbitParam orbit_from_h(double h, CurvePower m) {
  return OrbitParam{u_from_h(h, m), h, m};
}

// A(-u, (-u)^m) and B(u, u^m); both lie on x^2 + y^2 = u^2 + u^{2m}.
std::pair<Point, Point> intersection_points(double u, CurvePower m);

using CoeffMap = std::map<std::pair<int, int>, Rat>;

// Full problem instance: degree-n polynomial perturbations
//   p^±(x,y) = sum a^±_{i,j} x^i y^j,  q^±(x,y) = sum b^±_{i,j} x^i y^j
// with exact rational coefficients.
struct PerturbationSpec {
  CurvePower m{1};
  int n = 0;
  CoeffMap a_plus, a_minus, b_plus, b_minus;

  Rat a(int side, int i, int j) const;  // side: +1 / -1
  Rat b(int side, int i, int j) const;
  void set_a(int side, int i, int j, const Rat& v);
  void set_b(int side, int i, int j, const Rat& v);

  // Throws std::domain_error if any index violates 0 <= i+j <= n.
  void validate() const;

  std::string to_json() const;
  static PerturbationSpec from_json(const std::string& text);
};

}  // namespace mlk::model
