// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "melnikov/model.hpp"

using namespace mlk;
using model::CurvePower;

namespace {
// Independent oracle: 200-step bisection on u^2 + u^{2m} - h.
double bisect_u(double h, int m) {
  double lo = 0, hi = std::max(1.0, std::sqrt(h)) + 1.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (mid * mid + std::pow(mid, 2.0 * m) < h ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}
}  // namespace

TEST_CASE("u_from_h basic values") {
  CHECK(model::u_from_h(2.0, CurvePower(3)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(model::u_from_h(2.0, CurvePower(5)) == doctest::Approx(1.0).epsilon(1e-14));
  // h -> 0+ drives u -> 0
  CHECK(model::u_from_h(1e-12, CurvePower(3)) < 2e-6);
  // Frozen from the stated bisection oracle on u^2 + u^4 - 1.
  const double expected = bisect_u(1.0, 2);
  CHECK(expected == doctest::Approx(0.7861513777574233).epsilon(1e-12));
  CHECK(model::u_from_h(1.0, CurvePower(2)) == doctest::Approx(expected).epsilon(1e-13));
  CHECK_THROWS_AS(model::u_from_h(0.0, CurvePower(2)), std::domain_error);
  CHECK_THROWS_AS(model::u_from_h(-1.0, CurvePower(2)), std::domain_error);
}

TEST_CASE("u_from_h round trip and monotonicity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> logh(std::log(1e-3), std::log(100.0));
  for (int m = 1; m <= 8; ++m) {
    CurvePower cp(m);
    double prev_u = 0, prev_h = 0;
    for (int k = 0; k < 200; ++k) {
      const double h = std::exp(logh(rng));
      const double u = model::u_from_h(h, cp);
      const double back = u * u + std::pow(u, 2.0 * m);
      CHECK(std::abs(back - h) <= 1e-12 * h);
      if (h > prev_h) CHECK(u > prev_u * (h > prev_h ? 1.0 : 0.0));
      prev_u = u;
      prev_h = h;
    }
    // explicit monotonicity on a sorted pair
    CHECK(model::u_from_h(0.5, cp) < model::u_from_h(0.7, cp));
  }
}

TEST_CASE("intersection points") {
  auto [A, B] = model::intersection_points(1.0, CurvePower(3));
  CHECK(A.x == -1.0);
  CHECK(A.y == -1.0);
  CHECK(B.x == 1.0);
  CHECK(B.y == 1.0);

  auto [A2, B2] = model::intersection_points(1.0, CurvePower(2));
  CHECK(A2.y == 1.0);  // even m reflects to the same height
  CHECK(B2.y == 1.0);

  auto [A3, B3] = model::intersection_points(0.5, CurvePower(3));
  CHECK(A3.x == -0.5);
  CHECK(A3.y == doctest::Approx(-0.125));
  const double h = 0.25 + 0.015625;
  CHECK(A3.x * A3.x + A3.y * A3.y == doctest::Approx(h).epsilon(1e-14));
  CHECK(B3.x * B3.x + B3.y * B3.y == doctest::Approx(h).epsilon(1e-14));
}

TEST_CASE("intersection points lie on the circle (property)") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> du(0.05, 3.0);
  for (int m = 1; m <= 8; ++m)
    for (int k = 0; k < 50; ++k) {
      const double u = du(rng);
      auto [A, B] = model::intersection_points(u, CurvePower(m));
      const double h = u * u + std::pow(u, 2.0 * m);
      CHECK(std::abs(A.x * A.x + A.y * A.y - h) <= 1e-12 * (1 + h));
      CHECK(std::abs(B.x * B.x + B.y * B.y - h) <= 1e-12 * (1 + h));
    }
}

TEST_CASE("spec JSON round trip") {
  model::PerturbationSpec s{CurvePower(3), 2};
  s.set_a(+1, 1, 1, parse_rational("2/3"));
  s.set_b(-1, 0, 2, parse_rational("-0.125"));
  s.set_b(+1, 0, 0, Rat(7));
  const std::string j = s.to_json();
  auto t = model::PerturbationSpec::from_json(j);
  CHECK(t.m.m == 3);
  CHECK(t.n == 2);
  CHECK(t.a(+1, 1, 1) == Rat(2, 3));
  CHECK(t.b(-1, 0, 2) == Rat(-1, 8));
  CHECK(t.b(+1, 0, 0) == Rat(7));
  CHECK(t.to_json() == j);
}

TEST_CASE("spec validation and parse errors") {
  model::PerturbationSpec s{CurvePower(2), 1};
  s.set_a(+1, 1, 1, Rat(1));  // i+j = 2 > n = 1
  CHECK_THROWS_AS(s.validate(), std::domain_error);
  CHECK_THROWS_AS(model::PerturbationSpec::from_json("{not json"), std::invalid_argument);
  CHECK_THROWS_AS(model::PerturbationSpec::from_json(R"({"m":0,"n":0})"), std::domain_error);
  CHECK_THROWS(parse_rational("1/x"));
}

TEST_CASE("rational literals") {
  CHECK(parse_rational("0.125") == Rat(1, 8));
  CHECK(parse_rational("-3/9") == Rat(-1, 3));
  CHECK(parse_rational("42") == Rat(42));
  CHECK(to_string(Rat(-4, 6)) == "-2/3");
}
