// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one line per criterion, nonzero exit on any failure.
// FINDINGs (computations that contradict a documented claim) are printed and
// resolved by the independent quadrature oracle, never silently accepted.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "melnikov/abelian.hpp"
#include "melnikov/melnikov.hpp"
#include "melnikov/model.hpp"
#include "melnikov/oracle.hpp"
#include "melnikov/roots.hpp"
#include "melnikov/simulate.hpp"

using namespace mlk;
using abelian::Gen;
using abelian::IntegralExpr;
using model::CurvePower;
using model::PerturbationSpec;

namespace {

int g_failures = 0;
using Clock = std::chrono::steady_clock;

struct Criterion {
  const char* name;
  Clock::time_point t0 = Clock::now();
  bool ok = true;
  std::string detail;

  explicit Criterion(const char* n) : name(n) {}
  void fail(const std::string& why) {
    ok = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
  void finish() {
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("[%s] criterion %-60s (%6.2fs)%s%s\n", ok ? "PASS" : "FAIL", name, secs,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
  }
};

PerturbationSpec random_spec(std::mt19937_64& rng, int m, int n) {
  PerturbationSpec s{CurvePower(m), n};
  auto coin = [&]() { return rat((long)(rng() % 11) - 5, 1 + (long)(rng() % 3)); };
  for (int i = 0; i <= n; ++i)
    for (int j = 0; i + j <= n; ++j) {
      s.set_a(+1, i, j, coin());
      s.set_a(-1, i, j, coin());
      s.set_b(+1, i, j, coin());
      s.set_b(-1, i, j, coin());
    }
  return s;
}

// ---------------------------------------------------------------------------
// 1. Integral oracle suite
// ---------------------------------------------------------------------------
void criterion1() {
  Criterion c("1: closed-form J/I vs quadrature, i+j<=8, m<=6, rel 1e-8");
  double worst = 0;
  for (int m = 1; m <= 6; ++m) {
    CurvePower cp(m);
    for (int i = 0; i <= 8; ++i)
      for (int j = 0; i + j <= 8; ++j)
        for (double u : {0.3, 0.7, 1.0, 1.5})
          for (int side = 0; side < 2; ++side) {
            const auto expr = side == 0 ? abelian::reduce_J(i, j, cp)
                                        : abelian::reduce_I(i, j, cp);
            const double cf = expr.eval(u, cp);
            const auto q = oracle::integral_quadrature(
                i, j, u, cp, side == 0 ? oracle::Side::Plus : oracle::Side::Minus);
            const double rel = std::abs(cf - q.value) / std::max(1.0, std::abs(q.value));
            worst = std::max(worst, rel);
            if (rel > 1e-8) {
              std::ostringstream os;
              os << "(" << m << "," << i << "," << j << ",u=" << u
                 << (side ? ",I)" : ",J)") << " rel=" << rel;
              c.fail(os.str());
            }
          }
  }
  c.detail += "max rel err " + std::to_string(worst);
  c.finish();
}

// ---------------------------------------------------------------------------
// 2. Identity suite (symbolic)
// ---------------------------------------------------------------------------
void criterion2() {
  Criterion c("2: (3.14) and Lemma 3.3(i) hold symbolically");
  for (int m : {2, 3, 4, 5, 6, 7}) {
    CurvePower cp(m);
    for (int i = 0; i <= 8; ++i)
      for (int j = 0; i + j <= 8; ++j) {
        if (!abelian::pythagoras_defect(i, j, cp, false).is_zero())
          c.fail("J defect at (" + std::to_string(i) + "," + std::to_string(j) +
                 "), m=" + std::to_string(m));
        if (!abelian::pythagoras_defect(i, j, cp, true).is_zero())
          c.fail("I defect at (" + std::to_string(i) + "," + std::to_string(j) +
                 "), m=" + std::to_string(m));
      }
  }
  for (int m : {1, 3, 5, 7}) {
    CurvePower cp(m);
    for (int i = 0; i <= 8; ++i)
      for (int j = 0; i + j <= 8; ++j) {
        const int s = (j % 2 == 0) ? -1 : (i % 2 == 0 ? 1 : -1);
        if (!(abelian::reduce_I(i, j, cp) == abelian::reduce_J(i, j, cp).scaled(Rat(s))))
          c.fail("symmetry at (" + std::to_string(i) + "," + std::to_string(j) +
                 "), m=" + std::to_string(m));
      }
  }
  c.finish();
}

// ---------------------------------------------------------------------------
// 3. Paper golden values (typo-aware)
// ---------------------------------------------------------------------------
struct DisplayedEntry {
  int i, j;
  IntegralExpr shown;  // as printed in the source table
};

void criterion3() {
  Criterion c("3: Lemma 3.3 proof table, mismatches resolved by oracle");
  auto term = [](const Rat& q, int hp, int up, Gen g) {
    IntegralExpr e;
    e.add(q, hp, up, g);
    return e;
  };
  auto U = [&](const Rat& q, int hp, int up) { return term(q, hp, up, Gen::Unit); };
  const int M = 0;  // u-powers recorded as c0 + c1*m, filled per m below
  (void)M;

  // Displayed entries, exponents parameterized by m at evaluation time.
  struct Row {
    int i, j;
    // (coeff, h_pow, gen) for generator terms; (coeff, h_pow, a, b) for pure
    // u-terms with exponent a + b*m.
    std::vector<std::tuple<Rat, int, Gen>> gens;
    std::vector<std::tuple<Rat, int, int, int>> units;
  };
  const std::vector<Row> displayed = {
      {2, 0, {{Rat(2, 3), 1, Gen::J00}}, {{Rat(-2, 3), 0, 1, 2}}},
      {0, 2, {{Rat(2, 3), 1, Gen::J00}}, {{Rat(2, 3), 0, 1, 2}}},
      {4, 0, {{Rat(1), 2, Gen::J00}}, {{Rat(-2, 3), 1, 1, 2}, {Rat(-2, 5), 0, 3, 2}}},
      {3, 1, {{Rat(4, 5), 1, Gen::J11}}, {{Rat(-2, 5), 0, 2, 3}}},
      {1, 3, {{Rat(3, 5), 1, Gen::J11}}, {{Rat(2, 5), 0, 2, 3}}},
      {2, 2, {{Rat(2, 5), 2, Gen::J00}}, {{Rat(-4, 15), 1, 1, 2}, {Rat(2, 5), 0, 3, 2}}},
      {0, 4, {{Rat(8, 15), 2, Gen::J00}}, {{Rat(8, 15), 1, 1, 2}, {Rat(2, 5), 0, 1, 4}}},
  };

  int matches = 0, findings = 0;
  for (const auto& row : displayed) {
    // Evaluate for two odd curve powers.
    bool entry_matches = true;
    for (int m : {3, 5}) {
      CurvePower cp(m);
      IntegralExpr shown;
      for (const auto& [q, hp, g] : row.gens) shown = shown + term(q, hp, 0, g);
      for (const auto& [q, hp, a, b] : row.units) shown = shown + U(q, hp, a + b * m);
      shown.normalize();
      const auto ours = abelian::reduce_J(row.i, row.j, cp);
      if (!(ours == shown)) entry_matches = false;
    }
    if (entry_matches) {
      ++matches;
      continue;
    }
    // Mismatch: the oracle arbitrates.  Our closed form must agree with the
    // quadrature; the displayed expression must not.
    ++findings;
    bool resolved = true;
    for (int m : {3, 5}) {
      CurvePower cp(m);
      IntegralExpr shown;
      for (const auto& [q, hp, g] : row.gens) shown = shown + term(q, hp, 0, g);
      for (const auto& [q, hp, a, b] : row.units) shown = shown + U(q, hp, a + b * m);
      for (double u : {0.7, 1.3}) {
        const double truth =
            oracle::integral_quadrature(row.i, row.j, u, cp, oracle::Side::Plus).value;
        const double ours = abelian::reduce_J(row.i, row.j, cp).eval(u, cp);
        const double theirs = shown.eval(u, cp);
        if (std::abs(ours - truth) > 1e-8 * std::max(1.0, std::abs(truth))) resolved = false;
        if (std::abs(theirs - truth) < 1e-6 * std::max(1.0, std::abs(truth)))
          resolved = false;  // display would be right; our mismatch is a bug
      }
    }
    std::printf("  FINDING: displayed J_{%d,%d} disagrees with the recursion; "
                "quadrature sides with the recursion (%s)\n",
                row.i, row.j, resolved ? "resolved" : "UNRESOLVED");
    if (!resolved)
      c.fail("entry J_{" + std::to_string(row.i) + "," + std::to_string(row.j) +
             "} unresolved");
  }
  {
    std::ostringstream os;
    os << matches << " exact matches, " << findings << " typo findings resolved";
    c.detail += os.str();
  }
  c.finish();
}

// ---------------------------------------------------------------------------
// 4. Bound table
// ---------------------------------------------------------------------------
void criterion4() {
  Criterion c("4: bound_Z reproduces every Corollary 1.2 value");
  auto expect = [&](int m, int n, long lo, long hi) {
    auto b = roots::bound_Z(CurvePower(m), n);
    if (b.lower != lo || b.upper != hi) {
      std::ostringstream os;
      os << "Z(" << m << "," << n << ") = (" << b.lower << "," << b.upper
         << ") want (" << lo << "," << hi << ")";
      c.fail(os.str());
    }
  };
  for (int n = 1; n <= 6; ++n) expect(1, n, n, n);
  expect(2, 1, 3, 3);
  expect(2, 2, 4, 4);
  expect(3, 2, 5, 6);
  expect(3, 3, 6, 9);
  expect(3, 4, 9, 12);
  c.finish();
}

// ---------------------------------------------------------------------------
// 5. Lower-bound realization at desk scale
// ---------------------------------------------------------------------------
void criterion5() {
  Criterion c("5: construct_max_zeros certifies the paper lower bounds");
  const std::vector<std::tuple<int, int, int>> cases = {
      {3, 2, 5}, {2, 1, 3}, {2, 2, 4}, {3, 3, 6}};
  for (auto [m, n, want] : cases) {
    const auto lower = roots::bound_Z(CurvePower(m), n).lower;
    if (lower != want)
      c.fail("lower bound mismatch for (" + std::to_string(m) + "," + std::to_string(n) + ")");
    try {
      auto res = roots::construct_max_zeros(CurvePower(m), n,
                                            roots::default_targets(want));
      int simple = 0;
      for (const auto& ri : res.report.intervals)
        if (ri.mult == roots::RootInterval::Mult::Simple) ++simple;
      if (simple < want) {
        std::ostringstream os;
        os << "(" << m << "," << n << "): " << simple << " certified simple zeros < "
           << want;
        c.fail(os.str());
      }
    } catch (const std::exception& ex) {
      c.fail(std::string("construct threw: ") + ex.what());
    }
  }
  c.finish();
}

// ---------------------------------------------------------------------------
// 6. Upper-bound conformance on random specs
// ---------------------------------------------------------------------------
void criterion6() {
  Criterion c("6: 200 random specs per (m,n) never exceed the upper bound");
  std::mt19937_64 rng(20240811);
  for (auto [m, n] :
       std::vector<std::pair<int, int>>{{3, 2}, {3, 3}, {5, 2}, {2, 2}, {2, 3}}) {
    const auto bound = roots::bound_Z(CurvePower(m), n);
    for (int trial = 0; trial < 200; ++trial) {
      auto s = random_spec(rng, m, n);
      auto e = melnikov::assemble(s);
      if (e.is_zero()) continue;
      auto rep = roots::count_zeros(e);
      if (rep.certified_lower > bound.upper) {
        std::printf("  FINDING: spec exceeds the upper bound (would falsify the "
                    "implementation or the claim): %s\n",
                    s.to_json().c_str());
        std::ostringstream os;
        os << "(" << m << "," << n << ") trial " << trial << ": " << rep.certified_lower
           << " > " << bound.upper;
        c.fail(os.str());
      }
    }
  }
  c.finish();
}

// ---------------------------------------------------------------------------
// 7. ODE confirmation at first order
// ---------------------------------------------------------------------------
void criterion7() {
  Criterion c("7: find_limit_cycles confirms construct(2,1) at eps=1e-3");
  const std::vector<double> targets{0.6, 1.0, 1.5};
  try {
    auto res = roots::construct_max_zeros(CurvePower(2), 1, targets);
    auto cycles = simulate::find_limit_cycles(res.spec, 1e-3, 0.3, 2.0, 41, 1e-10);
    if (cycles.size() != 3) {
      c.fail("found " + std::to_string(cycles.size()) + " cycles, want 3");
    } else {
      for (size_t k = 0; k < 3; ++k) {
        if (std::abs(cycles[k].u_star - targets[k]) >= 0.05) {
          std::ostringstream os;
          os << "cycle " << k << " at u*=" << cycles[k].u_star << " vs target "
             << targets[k];
          c.fail(os.str());
        }
        if (cycles[k].residual >= 1e-10)
          c.fail("residual " + std::to_string(cycles[k].residual));
      }
    }
  } catch (const std::exception& ex) {
    c.fail(std::string("threw: ") + ex.what());
  }
  c.finish();
}

// ---------------------------------------------------------------------------
// 8. Even-m arc function
// ---------------------------------------------------------------------------
void criterion8() {
  Criterion c("8: arc function T: T(0)=pi/4, series matches closed form");
  if (std::abs(melnikov::ArcFunction(CurvePower(2))(1e-10) - M_PI / 4) > 1e-12)
    c.fail("T(0) != pi/4");
  if (!(melnikov::ArcFunction::series_coeff(1) == Rat(-1, 3)))
    c.fail("series coefficient at u^{3m-3} is not -1/3");
  if (!(melnikov::ArcFunction::series_coeff(2) == Rat(2, 5)))
    c.fail("series coefficient at u^{5m-5} is not 2/5");
  for (int m : {2, 4}) {
    melnikov::ArcFunction T{CurvePower(m)};
    for (double u : {0.1, 0.25, 0.5}) {
      double series = M_PI / 4;
      for (int k = 1; k <= 60; ++k)
        series += melnikov::ArcFunction::series_coeff(k).get_d() *
                  std::pow(u, (2 * k + 1) * (m - 1));
      if (std::abs(series - T(u)) > 1e-12) {
        std::ostringstream os;
        os << "m=" << m << " u=" << u << " |series-closed|=" << std::abs(series - T(u));
        c.fail(os.str());
      }
    }
  }
  c.finish();
}

// ---------------------------------------------------------------------------
// 9. Independence Jacobians
// ---------------------------------------------------------------------------
void criterion9() {
  Criterion c("9: Jacobians nonsingular for m<=7, n<=6; G1 diagonal pattern");
  for (int m = 1; m <= 7; ++m)
    for (int n = 0; n <= 6; ++n) {
      auto jac = melnikov::independence_jacobian(CurvePower(m), n);
      if (jac.singular || jac.determinant.sign() == 0) {
        std::printf("  FINDING: singular independence Jacobian at (%d,%d) "
                    "(contradicts the independence claim)\n", m, n);
        c.fail("singular at (" + std::to_string(m) + "," + std::to_string(n) + ")");
      }
    }
  // D1 diagonal pattern for odd m, n <= 4: rho block 2/(2l+1), gamma block
  // -2/(j+1), zeta block pi-multiples, all off-diagonal zero.
  for (auto [m, n] : std::vector<std::pair<int, int>>{{7, 4}, {7, 3}, {5, 3}, {5, 2}}) {
    auto jac = melnikov::independence_jacobian(CurvePower(m), n);
    const int N = jac.basis.dimension();
    int next_rho = 0;
    for (int k = 0; k < N; ++k) {
      for (int c2 = 0; c2 < N; ++c2)
        if (c2 != k && jac.matrix[k][c2].sign() != 0)
          c.fail("off-diagonal entry in G1 at (" + std::to_string(m) + "," +
                 std::to_string(n) + ")");
      const auto& coord = jac.selected[k];
      const PiRat& d = jac.matrix[k][k];
      if (coord.which == 'r') {
        const int l = (coord.i + coord.j) / 2;
        if (!(d == PiRat(rat(2, 2 * l + 1))))
          c.fail("rho diagonal not 2/(2l+1) at l=" + std::to_string(l));
        if (l != next_rho) c.fail("rho diagonal out of order");
        ++next_rho;
      } else if (coord.which == 'g') {
        if (!(d == PiRat(rat(-2, coord.j + 1)))) c.fail("gamma diagonal not -2/(j+1)");
      } else {
        if (!(d.coeff(0) == 0) || d.coeff(1) == 0 || d.pi_degree() != 1)
          c.fail("zeta diagonal not a nonzero pi multiple");
      }
    }
    if (next_rho != floor_div(n, 2) + 1) c.fail("rho diagonal count wrong");
  }
  c.finish();
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  std::printf("%s (%d failing)\n", g_failures == 0 ? "ALL CRITERIA PASS" : "FAILURES",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
