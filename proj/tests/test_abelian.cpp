// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "melnikov/abelian.hpp"
#include "melnikov/oracle.hpp"

using namespace mlk;
using abelian::Gen;
using abelian::IntegralExpr;
using model::CurvePower;

namespace {

// Independent 1-D Simpson oracle for int_0^b sqrt(h - x^2) dx.
double simpson_sqrt_arc(double h, double b) {
  const int N = 20000;
  double acc = 0;
  auto f = [&](double x) { return std::sqrt(std::max(0.0, h - x * x)); };
  for (int k = 0; k < N; ++k) {
    const double x0 = b * k / N, x1 = b * (k + 1) / N;
    acc += (x1 - x0) / 6.0 * (f(x0) + 4 * f(0.5 * (x0 + x1)) + f(x1));
  }
  return acc;
}

IntegralExpr single(const Rat& c, int hp, int up, Gen g) {
  IntegralExpr e;
  e.add(c, hp, up, g);
  e.normalize();
  return e;
}

}  // namespace

TEST_CASE("base integrals, odd m") {
  CurvePower m(3);
  auto t = abelian::base_integrals(m);
  CHECK(t.J00 == single(Rat(1), 0, 0, Gen::J00));
  CHECK(t.J10.is_zero());
  CHECK(t.J01 == single(Rat(1), 0, 0, Gen::J01));
  CHECK(t.J11 == single(Rat(1), 0, 0, Gen::J11));
  // values at u = 1: J00 = 2, J01 = pi/2 * 2 = pi, J11 = -2/3
  CHECK(t.J00.eval(1.0, m) == doctest::Approx(2.0));
  CHECK(t.J01.eval(1.0, m) == doctest::Approx(M_PI));
  CHECK(t.J11.eval(1.0, m) == doctest::Approx(-2.0 / 3));
  // I side by symmetry
  CHECK(t.I00 == single(Rat(-1), 0, 0, Gen::J00));
  CHECK(t.I01 == single(Rat(1), 0, 0, Gen::J01));
  CHECK(t.I11 == single(Rat(-1), 0, 0, Gen::J11));
}

TEST_CASE("base integrals, even m") {
  CurvePower m(2);
  auto t = abelian::base_integrals(m);
  CHECK(t.J11.is_zero());
  CHECK(t.I11.is_zero());
  CHECK(t.J10.is_zero());
  CHECK(t.I10.is_zero());
  CHECK(t.I00.eval(1.0, m) == doctest::Approx(-2.0));
  // J01 = 2 int_0^u sqrt(h - x^2) dx, I01 = pi h - J01; u = 1, h = 2.
  const double j01 = 2.0 * simpson_sqrt_arc(2.0, 1.0);
  CHECK(t.J01.eval(1.0, m) == doctest::Approx(j01).epsilon(1e-10));
  CHECK(t.I01.eval(1.0, m) == doctest::Approx(2.0 * M_PI - j01).epsilon(1e-10));
  CHECK(t.I01.eval(1.0, m) == doctest::Approx(3.7123889803847).epsilon(1e-10));
}

TEST_CASE("reduce_J golden structure from the recursion") {
  CurvePower m(3);
  // J_{1,0} = 0 for any m
  CHECK(abelian::reduce_J(1, 0, m).is_zero());
  CHECK(abelian::reduce_J(1, 0, CurvePower(2)).is_zero());
  // J_{2,0} = (1/3) h J00 - (2/3) u^{2m+1}; evaluates to (2/3) u^3.
  auto j20 = abelian::reduce_J(2, 0, m);
  IntegralExpr expect;
  expect.add(Rat(1, 3), 1, 0, Gen::J00);
  expect.add(Rat(-2, 3), 0, 7, Gen::Unit);
  CHECK(j20 == expect);
  CHECK(j20.eval(1.3, m) == doctest::Approx(2.0 / 3 * 1.3 * 1.3 * 1.3).epsilon(1e-13));
  // J_{0,2} = (2/3) h J00 + (2/3) u^{2m+1} (matches the displayed table).
  IntegralExpr e02;
  e02.add(Rat(2, 3), 1, 0, Gen::J00);
  e02.add(Rat(2, 3), 0, 7, Gen::Unit);
  CHECK(abelian::reduce_J(0, 2, m) == e02);
}

TEST_CASE("reduce_I examples") {
  CurvePower m3(3);
  // sign flip of reduce_J by the symmetry rules (even j)
  CHECK(abelian::reduce_I(2, 0, m3) == abelian::reduce_J(2, 0, m3).scaled(Rat(-1)));
  // even m: I_{0,1} at u=1 equals pi h - 2 int_0^1 sqrt(2-x^2) dx
  CurvePower m2(2);
  const double want = 2 * M_PI - 2.0 * simpson_sqrt_arc(2.0, 1.0);
  CHECK(abelian::reduce_I(0, 1, m2).eval(1.0, m2) == doctest::Approx(want).epsilon(1e-10));
  // J_{1,1} = I_{1,1} = 0 for even m
  CHECK(abelian::reduce_J(1, 1, m2).is_zero());
  CHECK(abelian::reduce_I(1, 1, m2).is_zero());
}

TEST_CASE("verify_pythagoras residuals") {
  CHECK(abelian::verify_pythagoras(0, 0, 2.0, CurvePower(3)) < 1e-10);
  CHECK(abelian::verify_pythagoras(1, 1, 1.0, CurvePower(3)) < 1e-10);
  CHECK(abelian::verify_pythagoras(2, 2, 0.5, CurvePower(5)) < 1e-10);
}

TEST_CASE("pythagoras identity cancels symbolically") {
  for (int m : {2, 3}) {
    CurvePower cp(m);
    for (int i = 0; i <= 5; ++i)
      for (int j = 0; i + j <= 5; ++j) {
        CAPTURE(i); CAPTURE(j); CAPTURE(m);
        CHECK(abelian::pythagoras_defect(i, j, cp, false).is_zero());
        CHECK(abelian::pythagoras_defect(i, j, cp, true).is_zero());
      }
  }
}

TEST_CASE("Lemma 3.3(i) symmetries hold symbolically for odd m") {
  for (int m : {3, 5}) {
    CurvePower cp(m);
    for (int i = 0; i <= 6; ++i)
      for (int j = 0; i + j <= 6; ++j) {
        const int s = (j % 2 == 0) ? -1 : (i % 2 == 0 ? 1 : -1);
        CAPTURE(i); CAPTURE(j); CAPTURE(m);
        CHECK(abelian::reduce_I(i, j, cp) == abelian::reduce_J(i, j, cp).scaled(Rat(s)));
      }
  }
}

TEST_CASE("Lemma 3.3 structure: exponent families for odd m") {
  // (3.12): J_{odd,even} = 0 and J_{2l-2d,2d+1} = chi h^l J01 (single term).
  for (int m : {3, 5, 7}) {
    CurvePower cp(m);
    for (int l = 0; l <= 3; ++l)
      for (int d = 0; d <= l; ++d) {
        auto e = abelian::reduce_J(2 * l - 2 * d + 1, 2 * d, cp);
        CHECK(e.is_zero());
        auto o = abelian::reduce_J(2 * l - 2 * d, 2 * d + 1, cp);
        REQUIRE(o.terms.size() == 1);
        CHECK(o.terms[0].gen == Gen::J01);
        CHECK(o.terms[0].h_pow == l);
        CHECK(o.terms[0].u_pow == 0);
      }
    // (3.10)/(3.20): expanded even-even entries live on u^{2l+2j(m-1)+1}.
    for (int l = 0; l <= 3; ++l)
      for (int d = 0; d <= l; ++d) {
        auto e = abelian::reduce_J(2 * l - 2 * d, 2 * d, cp).expand_h(cp);
        for (const auto& t : e.terms) {
          const int base = (t.gen == Gen::J00) ? 1 : 0;
          const int exp = t.u_pow + base;  // J00 carries one power of u
          bool member = false;
          for (int j = 0; j <= l; ++j)
            if (exp == 2 * l + 2 * j * (m - 1) + 1) member = true;
          CAPTURE(l); CAPTURE(d); CAPTURE(m); CAPTURE(exp);
          CHECK(member);
        }
      }
  }
}

TEST_CASE("boundary polynomial degree stays within m(n+1)") {
  for (int m : {2, 3, 4, 5})
    for (int n = 0; n <= 4; ++n) {
      CurvePower cp(m);
      for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j)
          for (const auto& t : abelian::reduce_J(i, j, cp).terms)
            if (t.gen == Gen::Unit) {
              CAPTURE(m); CAPTURE(n); CAPTURE(i); CAPTURE(j); CAPTURE(t.u_pow);
              CHECK(t.u_pow <= m * (n + 1));
            }
    }
}

TEST_CASE("closed forms agree with the quadrature oracle (spot grid)") {
  for (int m : {2, 3}) {
    CurvePower cp(m);
    for (int i = 0; i <= 4; ++i)
      for (int j = 0; i + j <= 4; ++j)
        for (double u : {0.7, 1.3}) {
          const double cf = abelian::reduce_J(i, j, cp).eval(u, cp);
          const auto q = oracle::integral_quadrature(i, j, u, cp, oracle::Side::Plus);
          CAPTURE(m); CAPTURE(i); CAPTURE(j); CAPTURE(u);
          CHECK(std::abs(cf - q.value) <= 1e-8 * std::max(1.0, std::abs(q.value)));
        }
  }
}

TEST_CASE("IntegralExpr JSON shape") {
  auto j = abelian::reduce_J(2, 0, CurvePower(3)).to_json();
  CHECK(j.find("\"terms\"") != std::string::npos);
  CHECK(j.find("\"g\":\"J00\"") != std::string::npos);
  CHECK(j.find("\"c\":\"1/3\"") != std::string::npos);
}
