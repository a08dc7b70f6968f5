// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "melnikov/abelian.hpp"
#include "melnikov/model.hpp"
#include "melnikov/pirat.hpp"

namespace mlk::melnikov {

using model::CurvePower;
using model::PerturbationSpec;

// rho/gamma/zeta families with the parity-dependent definitions:
//   odd m:  rho = rho^+ - rho^-, gamma = a^+ - a^-, zeta = rho^+ + rho^-
//   even m: rho as above, gamma as above, zeta = rho^- (minus-side only)
// where rho^±_{i,j} = b^±_{i,j} + ((i+1)/j) a^±_{i+1,j-1} (j>=1), rho^±_{i,0} = b^±_{i,0}.
struct ReducedCoefficients {
  CurvePower m{1};
  int n = 0;
  model::CoeffMap rho, gamma, zeta;

  Rat get(char which, int i, int j) const;
};

ReducedCoefficients reduce_coefficients(const PerturbationSpec& spec);

// Inverse of reduce_coefficients through the unimodular coefficient maps;
// minus-side a-coefficients are pinned to zero (odd m also pins b^-).
PerturbationSpec spec_from_reduced(const ReducedCoefficients& rc);

// Even-m arc function T(u); strictly decreasing, T(0) = pi/4.
struct ArcFunction {
  CurvePower m;
  explicit ArcFunction(CurvePower m_);
  double operator()(double u) const;       // closed form
  double derivative(double u) const;       // -(m-1) u^{3m} / h(u)^2 ... / u^4 form
  // Taylor coefficient of u^{(2k+1)(m-1)} (k>=1) is (-1)^k k/(2k+1); constant pi/4.
  static Rat series_coeff(int k);
  Interval enclose(const Rat& u, mpfr_prec_t prec) const;
};

// M(u) over the generating basis {u^e} ∪ {(u^2+u^{2m})^{l+1}} ∪
// {(u^2+u^{2m})^{l+1} T(u)}.  mono keys are exponents e (always odd);
// ring/arc keys are the indices l.  All coefficients exact in Q[pi]
// (ring coefficients are pure pi-multiples, arc coefficients rational).
struct MelnikovExpansion {
  CurvePower m{1};
  int n = 0;
  std::map<int, PiRat> mono;
  std::map<int, PiRat> ring;
  std::map<int, PiRat> arc;

  bool is_zero() const { return mono.empty() && ring.empty() && arc.empty(); }
  void prune();

  double eval(double u) const;
  Interval enclose(const Rat& u, mpfr_prec_t prec) const;

  std::string to_json() const;
};

enum class Region { D1, D2, D3, D4, D5, D6 };
Region classify_region(CurvePower m, int n);
const char* region_name(Region r);     // "D1".."D6"
const char* region_label(Region r);    // merged labels "D2uD3"/"D5uD6" for tables

// One reduced coordinate (rho/gamma/zeta at (i,j)); unit excitations of
// these are the columns of the independence Jacobian.
struct ReducedCoord {
  char which;  // 'r' | 'g' | 'z'
  int i, j;
};

// Descriptor of one generating-basis element.
struct BasisElem {
  enum class Kind { Mono, Ring, Arc } kind;
  int index;  // exponent for Mono, l for Ring/Arc
};

struct GeneratingBasis {
  CurvePower m{1};
  int n = 0;
  Region region;
  std::vector<BasisElem> elems;    // canonical order: monos asc, rings, arcs
  std::vector<ReducedCoord> coords;  // all participating reduced coordinates
  int dimension() const { return static_cast<int>(elems.size()); }
};

// Assembly from reduced coefficients (assemble == this after reduction).
MelnikovExpansion assemble_reduced(const ReducedCoefficients& rc);
MelnikovExpansion assemble(const PerturbationSpec& spec);

// The exact span of assemble over all specs for this (m,n), enumerated from
// the closed-form reductions.  Dimension matches the paper's counts on the
// supported regions (collisions between families are merged).
GeneratingBasis generating_basis(CurvePower m, int n);

struct IndependenceJacobian {
  GeneratingBasis basis;
  std::vector<ReducedCoord> selected;        // column coordinates, size = dimension
  std::vector<std::vector<PiRat>> matrix;    // rows follow basis.elems
  PiRat determinant;
  bool singular = false;                     // true is a FINDING (contradicts paper)
  std::string to_json() const;
};

// Jacobian of the basis-coefficient map w.r.t. a selected independent subset
// of reduced coordinates, with exact determinant.
IndependenceJacobian independence_jacobian(CurvePower m, int n);

// Taylor-type expansion of M at u = 0+ including the arc series, up to and
// including exponent max_exponent.  Exact Q[pi] coefficients.
std::vector<std::pair<int, PiRat>> expand_series(const MelnikovExpansion& e,
                                                 int max_exponent);

}  // namespace mlk::melnikov
