// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "melnikov/model.hpp"

namespace mlk::simulate {

using model::CurvePower;
using model::PerturbationSpec;

enum class Zone { Above, Below };  // sign of y - x^m

struct PiecewiseState {
  double x = 0, y = 0;
  Zone zone = Zone::Above;
  double t = 0;
};

struct TrajectoryPoint {
  double t, x, y;
  Zone zone;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  std::vector<PiecewiseState> events;  // curve crossings, in order
};

struct GrazingError : std::runtime_error {
  PiecewiseState state;
  GrazingError(const std::string& msg, PiecewiseState s)
      : std::runtime_error(msg), state(s) {}
};

struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FlowOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double event_tol = 1e-12;   // |y - x^m| at localized events
  double grazing_tol = 1e-8;  // |g_dot| below this at an event aborts
  bool record = false;        // keep dense trajectory samples
};

// Event-detecting integration of the piecewise system up to max_time.
// |epsilon| <= 0.05 guards the perturbative regime.
Trajectory flow(const PerturbationSpec& spec, double epsilon, PiecewiseState start,
                double max_time, const FlowOptions& opts = {});

// One full return from B(u0) = (u0, u0^m) to the positive branch of the
// switching curve; returns u_return - u0.  The return crossing has the same
// direction as the departure (above-zone into below-zone, g_dot < 0).
double displacement_map(const PerturbationSpec& spec, double epsilon, double u0,
                        const FlowOptions& opts = {});

struct CycleFinding {
  double u_star = 0;
  double h_star = 0;
  enum class Stability { Attracting, Repelling, Undetermined } stability =
      Stability::Undetermined;
  double residual = 0;
};

// Scans the displacement map for sign changes on a grid over [u_lo, u_hi]
// and refines each to |Delta| < residual_tol.
std::vector<CycleFinding> find_limit_cycles(const PerturbationSpec& spec,
                                            double epsilon, double u_lo, double u_hi,
                                            int samples,
                                            double residual_tol = 1e-10);

}  // namespace mlk::simulate
