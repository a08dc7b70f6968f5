// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "melnikov/melnikov.hpp"
#include "melnikov/pirat.hpp"

namespace mlk::roots {

using melnikov::MelnikovExpansion;
using melnikov::Region;
using model::CurvePower;
using model::PerturbationSpec;

// Dense polynomial in u over Q[pi].
struct PiPoly {
  std::vector<PiRat> a;  // a[i] * u^i

  static PiPoly zero() { return {}; }
  void trim();
  bool is_zero() const { return a.empty(); }
  int degree() const { return static_cast<int>(a.size()) - 1; }
  int valuation() const;  // lowest nonzero power; -1 for zero poly
  const PiRat& lead() const { return a.back(); }

  PiPoly operator+(const PiPoly& o) const;
  PiPoly operator-(const PiPoly& o) const;
  PiPoly operator*(const PiPoly& o) const;
  PiPoly scaled(const PiRat& c) const;
  PiPoly derivative() const;
  PiPoly shifted_down(int k) const;  // divide by u^k (requires valuation >= k)

  PiRat eval(const Rat& u) const;
  double eval_d(double u) const;
  Interval eval_interval(const Interval& u, mpfr_prec_t prec) const;

  bool rational_only() const;
};

// Sturm machinery (coefficients exact in Q[pi], signs via pi intervals).
std::vector<PiPoly> sturm_sequence(const PiPoly& p);
int sign_variations_at(const std::vector<PiPoly>& chain, const Rat& x);
int sign_variations_at_inf(const std::vector<PiPoly>& chain, int dir);  // dir=+1 only
// Number of distinct roots of the squarefree part in (lo, hi].
int sturm_count(const std::vector<PiPoly>& chain, const Rat& lo, const Rat& hi);

// Cauchy-type bound: all real roots lie in (0, bound].
Rat root_upper_bound(const PiPoly& p);

struct RootInterval {
  Rat lo, hi;                 // isolating, P(lo) != 0 != P(hi), lo < root <= hi
  enum class Mult { Simple, Odd, Even } mult = Mult::Simple;
};

// Isolates all roots of p in (0, +inf); exact and complete.
std::vector<RootInterval> isolate_positive_roots(const PiPoly& p);

struct ZeroReport {
  std::vector<RootInterval> intervals;
  enum class Rigor { Exact, IntervalCertified, Heuristic } rigor = Rigor::Exact;
  int certified_lower = 0;  // zeros certain to exist (odd multiplicity located)
  int upper_bound = 0;      // proven upper bound on zeros in (0, inf)
  double search_bound = 0;  // zeros are confined to (0, search_bound]
  std::vector<std::string> notes;
  std::string to_json() const;
};

// Rigorous zero count/isolation of M on (0, inf).  Odd m (and the all-arc-zero
// even cases) run exact Sturm; even m with a live arc part runs the Rolle
// reduction M2 = M1' * M0^2 plus an interval sign-change scan.
ZeroReport count_zeros(const MelnikovExpansion& e);

// Wronskian of (u^{n_1},...,u^{n_k}) at u, via the derivative determinant.
double wronskian_monomials(const std::vector<int>& exponents, double u);
// True iff every leading principal Wronskian is nonvanishing on (0, inf);
// for monomials this is the generalized Vandermonde product, checked exactly.
bool ect_certify(const std::vector<int>& exponents);

struct BoundPair {
  long lower = 0;
  long upper = 0;
  Region region;
  bool finding = false;          // lower > upper or other formula anomaly
  std::string finding_note;
};

// Z(m,n) per Theorems 1.1/1.2 region formulas with the corollary refinements.
BoundPair bound_Z(CurvePower m, int n);

struct ConstructResult {
  PerturbationSpec spec;
  ZeroReport report;
  std::vector<double> solved_coefficients;  // basis coefficients before rationalization
};

// Builds a spec whose Melnikov function has (at least) one simple zero near
// each target: solves the interpolation system in the generating basis,
// rationalizes, pulls back through the unimodular maps, and re-certifies.
ConstructResult construct_max_zeros(CurvePower m, int n,
                                    const std::vector<double>& targets);

// Geometric default targets in (0.3, 3).
std::vector<double> default_targets(int count);

}  // namespace mlk::roots
