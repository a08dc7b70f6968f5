// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "melnikov/melnikov.hpp"
#include "melnikov/roots.hpp"

using namespace mlk;
using melnikov::MelnikovExpansion;
using model::CurvePower;
using roots::PiPoly;
using roots::RootInterval;

namespace {
PiPoly from_ints(std::initializer_list<long> cs) {
  PiPoly p;
  for (long c : cs) p.a.push_back(PiRat(Rat(c)));
  p.trim();
  return p;
}
bool contains(const RootInterval& ri, double x) {
  return to_double(ri.lo) < x && x <= to_double(ri.hi) + 1e-15;
}
}  // namespace

TEST_CASE("isolation of plain polynomials") {
  // u(u^2-1)(u^2-4) = 4u - 5u^3 + u^5: positive roots 1 and 2, both simple.
  auto iso = roots::isolate_positive_roots(from_ints({0, 4, 0, -5, 0, 1}));
  REQUIRE(iso.size() == 2);
  CHECK(contains(iso[0], 1.0));
  CHECK(contains(iso[1], 2.0));
  CHECK(iso[0].mult == RootInterval::Mult::Simple);
  CHECK(iso[1].mult == RootInterval::Mult::Simple);

  // (u-1)^2 (u-3): double root at 1, simple at 3.
  // = u^3 - 5u^2 + 7u - 3
  auto iso2 = roots::isolate_positive_roots(from_ints({-3, 7, -5, 1}));
  REQUIRE(iso2.size() == 2);
  CHECK(contains(iso2[0], 1.0));
  CHECK(iso2[0].mult == RootInterval::Mult::Even);
  CHECK(contains(iso2[1], 3.0));
  CHECK(iso2[1].mult == RootInterval::Mult::Simple);

  // (u-2)^3: triple root -> odd multiplicity.
  auto iso3 = roots::isolate_positive_roots(from_ints({-8, 12, -6, 1}));
  REQUIRE(iso3.size() == 1);
  CHECK(iso3[0].mult == RootInterval::Mult::Odd);
}

TEST_CASE("isolation with pi coefficients") {
  // u^2 - pi: single positive root sqrt(pi).
  PiPoly p;
  p.a = {-PiRat::pi(), PiRat(), PiRat(Rat(1))};
  auto iso = roots::isolate_positive_roots(p);
  REQUIRE(iso.size() == 1);
  CHECK(contains(iso[0], std::sqrt(M_PI)));

  // (u - pi)(u - 3) = u^2 - (3+pi)u + 3pi: two nearby roots separated exactly.
  PiPoly q;
  q.a = {PiRat::pi_times(Rat(3)), -(PiRat(Rat(3)) + PiRat::pi()), PiRat(Rat(1))};
  auto iso2 = roots::isolate_positive_roots(q);
  REQUIRE(iso2.size() == 2);
  CHECK(contains(iso2[0], 3.0));
  CHECK(contains(iso2[1], M_PI));
  CHECK(to_double(iso2[0].hi) <= to_double(iso2[1].lo) + 1e-15);
}

TEST_CASE("count_zeros on polynomial expansions (odd m)") {
  MelnikovExpansion e;
  e.m = CurvePower(3);
  e.n = 0;
  e.mono[1] = PiRat(Rat(4));  // M = 4u > 0
  auto rep = roots::count_zeros(e);
  CHECK(rep.intervals.empty());
  CHECK(rep.rigor == roots::ZeroReport::Rigor::Exact);
  CHECK(rep.upper_bound == 0);

  MelnikovExpansion e2;
  e2.m = CurvePower(3);
  e2.n = 4;
  e2.mono[1] = PiRat(Rat(4));
  e2.mono[3] = PiRat(Rat(-5));
  e2.mono[5] = PiRat(Rat(1));  // u(u^2-1)(u^2-4)
  auto rep2 = roots::count_zeros(e2);
  REQUIRE(rep2.intervals.size() == 2);
  CHECK(contains(rep2.intervals[0], 1.0));
  CHECK(contains(rep2.intervals[1], 2.0));
  CHECK(rep2.certified_lower == 2);
  CHECK(rep2.upper_bound == 2);

  CHECK_THROWS_AS(roots::count_zeros(MelnikovExpansion{}), std::domain_error);
}

TEST_CASE("count_zeros on an even-m expansion with a live arc part") {
  // M = (u^2+u^4)(k pi + T(u)) with k pi ~ -0.4723: T decreases from pi/4 to
  // 0, so M has exactly one (simple) zero, where T crosses -k pi.
  MelnikovExpansion e;
  e.m = CurvePower(2);
  e.n = 1;
  const Rat k(-4511, 30000);
  e.ring[0] = PiRat::pi_times(k);
  e.arc[0] = PiRat(Rat(1));
  auto rep = roots::count_zeros(e);
  CHECK(rep.certified_lower == 1);
  REQUIRE(rep.intervals.size() == 1);
  CHECK(rep.rigor == roots::ZeroReport::Rigor::IntervalCertified);
  melnikov::ArcFunction T(CurvePower(2));
  const double level = -PiRat::pi_times(k).to_double();
  CHECK(T(to_double(rep.intervals[0].hi)) <= level + 1e-9);
  CHECK(level <= T(to_double(rep.intervals[0].lo)) + 1e-9);
}

TEST_CASE("wronskian closed forms") {
  // W(1, u^{r1}, u^{r2}) = r1 r2 (r2 - r1) u^{r1+r2-3}
  for (int r1 = 1; r1 <= 10; ++r1)
    for (int r2 = r1 + 1; r2 <= 10; ++r2)
      for (double u : {0.5, 2.0}) {
        const double want = r1 * r2 * (r2 - r1) * std::pow(u, r1 + r2 - 3);
        const double got = roots::wronskian_monomials({0, r1, r2}, u);
        CAPTURE(r1); CAPTURE(r2); CAPTURE(u);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
      }
  // singleton: W[u^{n1}] = u^{n1} > 0
  CHECK(roots::wronskian_monomials({4}, 0.7) == doctest::Approx(std::pow(0.7, 4)));
  // W(1, u) = 1
  CHECK(roots::wronskian_monomials({0, 1}, 1.7) == doctest::Approx(1.0));
}

TEST_CASE("ect_certify") {
  CHECK(roots::ect_certify({0, 1, 2, 3}));
  CHECK(roots::ect_certify({1, 3, 7, 12, 25, 31, 38, 40}));
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> exps;
    int cur = static_cast<int>(rng() % 5);
    const int len = 1 + static_cast<int>(rng() % 8);
    for (int k = 0; k < len && cur <= 40; ++k) {
      exps.push_back(cur);
      cur += 1 + static_cast<int>(rng() % 6);
    }
    CHECK(roots::ect_certify(exps));
  }
  CHECK_THROWS_AS(roots::ect_certify({2, 2}), std::domain_error);
  CHECK_THROWS_AS(roots::ect_certify({3, 1}), std::domain_error);
  CHECK_THROWS_AS(roots::ect_certify({-1, 2}), std::domain_error);
}

TEST_CASE("bound_Z corollary values") {
  auto pair = [](CurvePower m, int n) {
    auto b = roots::bound_Z(m, n);
    return std::make_pair(b.lower, b.upper);
  };
  for (int n = 1; n <= 6; ++n)
    CHECK(pair(CurvePower(1), n) == std::make_pair((long)n, (long)n));
  CHECK(pair(CurvePower(2), 1) == std::make_pair(3L, 3L));
  CHECK(pair(CurvePower(2), 2) == std::make_pair(4L, 4L));
  CHECK(pair(CurvePower(3), 2) == std::make_pair(5L, 6L));
  CHECK(pair(CurvePower(3), 3) == std::make_pair(6L, 9L));
  CHECK(pair(CurvePower(3), 4) == std::make_pair(9L, 12L));
  // Theorem 1.1(i) at n = 0 evaluates through [-1/2] = -1.
  CHECK(roots::bound_Z(CurvePower(5), 0).lower == 1);
  CHECK(roots::bound_Z(CurvePower(3), 0).lower == 1);
}

TEST_CASE("bound_Z internal consistency grid") {
  for (int m = 1; m <= 6; ++m)
    for (int n = 0; n <= 6; ++n) {
      auto b = roots::bound_Z(CurvePower(m), n);
      CAPTURE(m); CAPTURE(n); CAPTURE(b.lower); CAPTURE(b.upper);
      // Violations must be surfaced as findings, never silent.
      if (b.lower > b.upper) CHECK(b.finding);
      if (!b.finding) CHECK(b.lower <= b.upper);
    }
  // The even-m formulas misbehave at n = 0 (negative upper bound): flagged.
  CHECK(roots::bound_Z(CurvePower(2), 0).finding);
}

TEST_CASE("construct_max_zeros worked example (3,2)") {
  std::vector<double> targets{0.5, 1.0, 1.5, 2.0, 2.5};
  auto res = roots::construct_max_zeros(CurvePower(3), 2, targets);
  REQUIRE(res.report.intervals.size() >= 5);
  CHECK(res.report.rigor == roots::ZeroReport::Rigor::Exact);
  int simple = 0;
  for (const auto& ri : res.report.intervals)
    if (ri.mult == RootInterval::Mult::Simple) ++simple;
  CHECK(simple >= 5);
  // each target is isolated by some interval
  for (double t : targets) {
    bool hit = false;
    for (const auto& ri : res.report.intervals) hit = hit || contains(ri, t);
    CAPTURE(t);
    CHECK(hit);
  }
  // round trip: re-assembling the spec reproduces the certified count
  auto again = roots::count_zeros(melnikov::assemble(res.spec));
  CHECK(again.intervals.size() == res.report.intervals.size());
}

TEST_CASE("construct_max_zeros at the n=0 lower bound") {
  // Theorem 1.1(i) lower bound at n=0 is 1.
  auto res = roots::construct_max_zeros(CurvePower(3), 0, {1.0});
  CHECK(res.report.intervals.size() >= 1);
  CHECK(res.report.intervals[0].mult == RootInterval::Mult::Simple);
}

TEST_CASE("construct_max_zeros rejects over-long target lists") {
  // dimension of (3,0) is 2, so two targets cannot be realized.
  CHECK_THROWS_AS(roots::construct_max_zeros(CurvePower(3), 0, {0.5, 1.5}),
                  std::domain_error);
  CHECK_THROWS_AS(roots::construct_max_zeros(CurvePower(3), 2, {1.0, 0.5}),
                  std::domain_error);
}

TEST_CASE("default targets are increasing and inside (0.3, 3)") {
  for (int count : {1, 3, 6}) {
    auto t = roots::default_targets(count);
    REQUIRE(static_cast<int>(t.size()) == count);
    for (size_t k = 0; k < t.size(); ++k) {
      CHECK(t[k] > 0.3);
      CHECK(t[k] < 3.0);
      if (k) CHECK(t[k] > t[k - 1]);
    }
  }
}
