// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include "melnikov/model.hpp"

namespace mlk::oracle {

using model::CurvePower;
using model::PerturbationSpec;

struct QuadratureResult {
  double value = 0;
  double error_estimate = 0;
  long evaluations = 0;
  bool converged = true;
};

enum class Side { Plus, Minus };

// Adaptive quadrature of int x^i y^j dx over the upper (L_h^+) or lower
// (L_h^-) circular arc for the orbit through B(u, u^m), oriented clockwise.
QuadratureResult integral_quadrature(int i, int j, double u, CurvePower m, Side side);

// First-order Melnikov function via the general switching-curve formula:
// int_{L+} q+ dx - p+ dy + ratio * int_{L-} q- dx - p- dy, with the ratio
// computed from (H_x^+ + H_y^+ phi')/(H_x^- + H_y^- phi') at A.  For this
// system the ratio must equal 1; a violation throws (geometry bug).
QuadratureResult melnikov_quadrature(const PerturbationSpec& spec, double u);

// The Lemma 3.1 prefactor at A(h); exposed for the ratio self-check.
double switching_ratio_at_A(double u, CurvePower m);

}  // namespace mlk::oracle
