// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "melnikov/oracle.hpp"

using namespace mlk;
using model::CurvePower;
using oracle::Side;

namespace {
double dfact(int n) {  // double factorial with (-1)!! = 1
  double r = 1;
  for (int k = n; k >= 2; k -= 2) r *= k;
  return r;
}
// int_0^{2pi} cos^{2a} sin^{2b} = 2 pi (2a-1)!!(2b-1)!!/(2a+2b)!!
double wallis(int a, int b) {
  return 2 * M_PI * dfact(2 * a - 1) * dfact(2 * b - 1) / dfact(2 * a + 2 * b);
}
}  // namespace

TEST_CASE("quadrature reproduces the base integrals") {
  CurvePower m3(3);
  auto r = oracle::integral_quadrature(0, 0, 1.0, m3, Side::Plus);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-11));
  CHECK(r.converged);
  CHECK(r.evaluations > 0);
  CHECK(oracle::integral_quadrature(1, 1, 1.0, m3, Side::Plus).value ==
        doctest::Approx(-2.0 / 3).epsilon(1e-11));
  CHECK(oracle::integral_quadrature(0, 1, 1.0, CurvePower(2), Side::Minus).value ==
        doctest::Approx(3.71238898038469).epsilon(1e-10));
  CHECK_THROWS_AS(oracle::integral_quadrature(0, 0, -1.0, m3, Side::Plus),
                  std::domain_error);
}

TEST_CASE("full-loop integral matches the classical disk value") {
  // Clockwise over the full circle: loop x^i y^j dx = j * iint x^i y^{j-1} dA,
  // nonzero only for i even, j odd.  A self-check independent of any closed
  // form in this project.
  for (int m : {2, 3}) {
    CurvePower cp(m);
    for (double u : {0.8, 1.2}) {
      const double h = u * u + std::pow(u, 2.0 * m);
      const double R = std::sqrt(h);
      int tested = 0;
      for (int i = 0; i <= 3 && tested < 10; ++i)
        for (int j = 0; j <= 3 && tested < 10; ++j, ++tested) {
          const double loop = oracle::integral_quadrature(i, j, u, cp, Side::Plus).value +
                              oracle::integral_quadrature(i, j, u, cp, Side::Minus).value;
          double want = 0;
          if (i % 2 == 0 && j % 2 == 1) {
            const int a = i / 2, b = (j - 1) / 2;
            want = j * std::pow(R, i + j + 1) / (i + j + 1) * wallis(a, b);
          }
          CAPTURE(m); CAPTURE(u); CAPTURE(i); CAPTURE(j);
          CHECK(loop == doctest::Approx(want).epsilon(1e-9).scale(std::max(1.0, std::abs(want))));
        }
    }
  }
}

TEST_CASE("switching ratio is 1 everywhere tested") {
  for (int m : {1, 2, 3, 4, 5, 6})
    for (double u : {0.3, 0.9, 1.7})
      CHECK(oracle::switching_ratio_at_A(u, CurvePower(m)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("melnikov quadrature worked examples") {
  CurvePower m3(3);
  model::PerturbationSpec s{m3, 0};
  s.set_b(+1, 0, 0, Rat(1));
  s.set_b(-1, 0, 0, Rat(-1));
  CHECK(oracle::melnikov_quadrature(s, 1.0).value == doctest::Approx(4.0).epsilon(1e-11));

  model::PerturbationSpec zero{m3, 0};
  CHECK(oracle::melnikov_quadrature(zero, 1.0).value == doctest::Approx(0.0).scale(1));

  model::PerturbationSpec s2{m3, 0};
  s2.set_a(+1, 0, 0, Rat(1));
  CHECK(oracle::melnikov_quadrature(s2, 1.0).value == doctest::Approx(-2.0).epsilon(1e-11));
}
