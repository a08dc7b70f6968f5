// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "melnikov/model.hpp"
#include "melnikov/rational.hpp"

namespace mlk::abelian {

using model::CurvePower;

// Base generators of the closed forms.  Unit is a pure u-power term.
// ArcT is the even-m arc function T(u) = int_0^{1/sqrt(1+u^{2m-2})} sqrt(1-t^2) dt;
// it only ever enters through J01/I01 substitution at expansion time.
enum class Gen { Unit, J00, J01, J11, I01 };

const char* gen_name(Gen g);

struct Term {
  Rat coeff;
  int h_pow = 0;
  int u_pow = 0;
  Gen gen = Gen::Unit;
};

// Exact value of J_{i,j}(h) or I_{i,j}(h): rational combination of
// h-powers times base generators plus u-power boundary terms.
struct IntegralExpr {
  std::vector<Term> terms;

  void add(const Rat& c, int hp, int up, Gen g);
  void normalize();  // merge duplicate (h,u,gen), drop zeros, sort
  IntegralExpr operator+(const IntegralExpr& o) const;
  IntegralExpr operator-(const IntegralExpr& o) const;
  IntegralExpr scaled(const Rat& c) const;
  IntegralExpr times_h(int k = 1) const;
  // Substitutes h = u^2 + u^{2m} binomially; result has h_pow = 0 throughout.
  IntegralExpr expand_h(CurvePower m) const;
  bool is_zero() const { return terms.empty(); }
  bool operator==(const IntegralExpr& o) const;

  // Numeric value at u (> 0); substitutes h = u^2 + u^{2m} and the
  // parity-appropriate generator values.
  double eval(double u, CurvePower m) const;

  std::string to_json() const;
};

// Closed forms for (i,j) in {(0,0),(1,0),(0,1),(1,1)} on both sides.
struct BaseTable {
  IntegralExpr J00, J10, J01, J11;
  IntegralExpr I00, I10, I01, I11;
};
BaseTable base_integrals(CurvePower m);

// Closed form of J_{i,j} by the two-step recursion: lower j by 2 down to
// {0,1}, then i by 2 down to {0,1}.  Memoized per (i,j,m).
IntegralExpr reduce_J(int i, int j, CurvePower m);
// Same recursion over the lower arc (boundary signs flipped, I bases).
IntegralExpr reduce_I(int i, int j, CurvePower m);

// |J_{i+2,j} + J_{i,j+2} - h J_{i,j}| evaluated at h; the identity also
// cancels symbolically (see pythagoras_defect).
double verify_pythagoras(int i, int j, double h, CurvePower m);

// Symbolic residual J_{i+2,j} + J_{i,j+2} - h*J_{i,j}; empty when exact.
IntegralExpr pythagoras_defect(int i, int j, CurvePower m, bool lower_arc = false);

}  // namespace mlk::abelian
