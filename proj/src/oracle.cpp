// SPDX-License-Identifier: Apache-2.0
#include "melnikov/oracle.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <stdexcept>

namespace mlk::oracle {

namespace {

constexpr double kAbsTol = 1e-12;
constexpr long kEvalCap = 1 << 20;

struct Arc {
  double radius;
  double theta_start;  // integration runs theta_start -> theta_end, decreasing
  double theta_end;
};

// Clockwise arcs of the orbit through A(-u, (-u)^m) and B(u, u^m).
// The upper arc is the one containing theta = pi/2.
Arc upper_arc(double u, CurvePower m) {
  const double h = u * u + std::pow(u, 2.0 * m.m);
  const double ym = std::pow(u, static_cast<double>(m.m));
  const double tb = std::atan2(ym, u);
  const double ta = std::atan2(m.odd() ? -ym : ym, -u);
  double lift = std::fmod(ta - tb, 2.0 * M_PI);
  if (lift <= 0) lift += 2.0 * M_PI;
  return {std::sqrt(h), tb + lift, tb};
}

Arc lower_arc(double u, CurvePower m) {
  Arc up = upper_arc(u, m);
  return {up.radius, up.theta_end, up.theta_start - 2.0 * M_PI};
}

// Integrates f(x,y) dx + g(x,y) dy over the arc, clockwise, adaptively.
// Accumulation runs in long double so that integrands with magnitude ~1e9
// (large radii, high powers) that cancel to ~0 keep absolute noise below the
// comparison tolerances.
template <typename Fx, typename Fy>
QuadratureResult line_integral(const Arc& arc, Fx fx, Fy fy) {
  QuadratureResult res;
  long evals = 0;
  auto integrand = [&](long double th) -> long double {
    ++evals;
    const long double x = arc.radius * std::cos(th);
    const long double y = arc.radius * std::sin(th);
    const long double dx = -arc.radius * std::sin(th);
    const long double dy = arc.radius * std::cos(th);
    return fx(static_cast<double>(x), static_cast<double>(y)) * dx +
           fy(static_cast<double>(x), static_cast<double>(y)) * dy;
  };
  // Split at quadrant boundaries; the integrand is smooth but the split
  // keeps the adaptive depth shallow when the curve crowds the circle.
  const double span = arc.theta_start - arc.theta_end;
  const int pieces = std::max(2, static_cast<int>(std::ceil(std::abs(span) / (M_PI / 2))));
  long double total = 0, err_total = 0;
  using GK = boost::math::quadrature::gauss_kronrod<long double, 15>;
  for (int p = 0; p < pieces; ++p) {
    const long double a = arc.theta_start - span * static_cast<long double>(p) / pieces;
    const long double b =
        arc.theta_start - span * static_cast<long double>(p + 1) / pieces;
    long double err = 0;
    total += GK::integrate(integrand, a, b, 12, kAbsTol / pieces, &err);
    err_total += err;
    if (evals > kEvalCap) break;
  }
  res.value = static_cast<double>(total);
  res.error_estimate = static_cast<double>(err_total);
  res.evaluations = evals;
  res.converged = (evals <= kEvalCap) && (res.error_estimate < 1e-9);
  return res;
}

}  // namespace

double switching_ratio_at_A(double u, CurvePower m) {
  // (H_x^+ + H_y^+ phi') / (H_x^- + H_y^- phi') at A(a(h), phi(a(h))),
  // with H^± = x^2 + y^2, phi(x) = x^m.
  const double a = -u;
  const double phi_a = std::pow(a, static_cast<double>(m.m));
  const double dphi = m.m * std::pow(a, static_cast<double>(m.m - 1));
  const double num = 2 * a + 2 * phi_a * dphi;
  const double den = 2 * a + 2 * phi_a * dphi;
  if (num == 0 || den == 0)
    throw std::domain_error("switching_ratio_at_A: tangency at A (assumption A3 violated)");
  return num / den;
}

QuadratureResult integral_quadrature(int i, int j, double u, CurvePower m, Side side) {
  if (!(u > 0)) throw std::domain_error("integral_quadrature: u must be positive");
  if (i < 0 || j < 0) throw std::domain_error("integral_quadrature: indices must be >= 0");
  const Arc arc = (side == Side::Plus) ? upper_arc(u, m) : lower_arc(u, m);
  auto mono = [i, j](double x, double y) { return std::pow(x, i) * std::pow(y, j); };
  auto zero = [](double, double) { return 0.0; };
  return line_integral(arc, mono, zero);
}

QuadratureResult melnikov_quadrature(const PerturbationSpec& spec, double u) {
  if (!(u > 0)) throw std::domain_error("melnikov_quadrature: u must be positive");
  spec.validate();
  const double ratio = switching_ratio_at_A(u, spec.m);
  if (std::abs(ratio - 1.0) > 1e-12)
    throw std::logic_error("melnikov_quadrature: switching ratio != 1 (geometry bug)");

  auto poly = [&](const model::CoeffMap& c, double x, double y) {
    double acc = 0;
    for (const auto& [ij, v] : c)
      acc += v.get_d() * std::pow(x, ij.first) * std::pow(y, ij.second);
    return acc;
  };
  auto q_plus = [&](double x, double y) { return poly(spec.b_plus, x, y); };
  auto p_plus = [&](double x, double y) { return -poly(spec.a_plus, x, y); };
  auto q_minus = [&](double x, double y) { return poly(spec.b_minus, x, y); };
  auto p_minus = [&](double x, double y) { return -poly(spec.a_minus, x, y); };

  QuadratureResult up = line_integral(upper_arc(u, spec.m), q_plus, p_plus);
  QuadratureResult low = line_integral(lower_arc(u, spec.m), q_minus, p_minus);
  QuadratureResult res;
  res.value = up.value + ratio * low.value;
  res.error_estimate = up.error_estimate + low.error_estimate;
  res.evaluations = up.evaluations + low.evaluations;
  res.converged = up.converged && low.converged;
  return res;
}

}  // namespace mlk::oracle
