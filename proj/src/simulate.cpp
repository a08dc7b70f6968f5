// SPDX-License-Identifier: Apache-2.0
#include "melnikov/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace mlk::simulate {

namespace {

struct Vec2 {
  double x = 0, y = 0;
  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
};

double eval_poly(const model::CoeffMap& c, double x, double y) {
  double acc = 0;
  for (const auto& [ij, v] : c)
    acc += v.get_d() * std::pow(x, ij.first) * std::pow(y, ij.second);
  return acc;
}

struct Field {
  const PerturbationSpec* spec;
  double eps;
  Vec2 operator()(Zone z, const Vec2& p) const {
    const bool up = (z == Zone::Above);
    const double px = eval_poly(up ? spec->a_plus : spec->a_minus, p.x, p.y);
    const double qx = eval_poly(up ? spec->b_plus : spec->b_minus, p.x, p.y);
    return {p.y + eps * px, -p.x + eps * qx};
  }
};

// Dormand-Prince 5(4) with the classic quartic continuous extension.
struct DP5Step {
  Vec2 y0, y1;
  std::array<Vec2, 7> k;
  double t0 = 0, h = 0;
  double err = 0;

  Vec2 dense(double theta) const {
    const Vec2 ydiff = y1 - y0;
    const Vec2 bspl = k[0] * h - ydiff;
    const Vec2 r4 = ydiff - k[6] * h - bspl;
    const double d1 = -12715105075.0 / 11282082432.0;
    const double d3 = 87487479700.0 / 32700410799.0;
    const double d4 = -10690763975.0 / 1880347072.0;
    const double d5 = 701980252875.0 / 199316789632.0;
    const double d6 = -1453857185.0 / 822651844.0;
    const double d7 = 69997945.0 / 29380423.0;
    const Vec2 r5 = (k[0] * d1 + k[2] * d3 + k[3] * d4 + k[4] * d5 + k[5] * d6 +
                     k[6] * d7) *
                    h;
    const double th1 = 1.0 - theta;
    // y0 + th*(ydiff + th1*(bspl + th*(r4 + th1*r5)))
    Vec2 inner = r4 + r5 * th1;
    inner = bspl + inner * theta;
    inner = ydiff + inner * th1;
    return y0 + inner * theta;
  }
};

template <typename F>
DP5Step dp5_attempt(F f, const Vec2& y0, double t0, double h, const Vec2& k1,
                    double rel_tol, double abs_tol) {
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  DP5Step s;
  s.y0 = y0;
  s.t0 = t0;
  s.h = h;
  s.k[0] = k1;
  s.k[1] = f(y0 + s.k[0] * (a21 * h));
  s.k[2] = f(y0 + s.k[0] * (a31 * h) + s.k[1] * (a32 * h));
  s.k[3] = f(y0 + s.k[0] * (a41 * h) + s.k[1] * (a42 * h) + s.k[2] * (a43 * h));
  s.k[4] = f(y0 + s.k[0] * (a51 * h) + s.k[1] * (a52 * h) + s.k[2] * (a53 * h) +
             s.k[3] * (a54 * h));
  s.k[5] = f(y0 + s.k[0] * (a61 * h) + s.k[1] * (a62 * h) + s.k[2] * (a63 * h) +
             s.k[3] * (a64 * h) + s.k[4] * (a65 * h));
  s.y1 = y0 + (s.k[0] * b1 + s.k[2] * b3 + s.k[3] * b4 + s.k[4] * b5 + s.k[5] * b6) * h;
  s.k[6] = f(s.y1);
  const Vec2 e = (s.k[0] * e1 + s.k[2] * e3 + s.k[3] * e4 + s.k[4] * e5 +
                  s.k[5] * e6 + s.k[6] * e7) *
                 h;
  auto sc = [&](double v0, double v1) {
    return abs_tol + rel_tol * std::max(std::abs(v0), std::abs(v1));
  };
  const double ex = e.x / sc(y0.x, s.y1.x);
  const double ey = e.y / sc(y0.y, s.y1.y);
  s.err = std::sqrt(0.5 * (ex * ex + ey * ey));
  return s;
}

double curve_g(const Vec2& p, int m) { return p.y - std::pow(p.x, m); }

double curve_gdot(const Vec2& p, const Vec2& v, int m) {
  return v.y - m * std::pow(p.x, m - 1) * v.x;
}

struct EventInfo {
  Vec2 point;
  double t;
  double gdot;  // with the pre-switch field
};

// Integrates with event detection; on_event returns false to stop.
template <typename OnEvent, typename OnStep>
void integrate(const PerturbationSpec& spec, double eps, PiecewiseState start,
               double max_time, const FlowOptions& opts, OnEvent on_event,
               OnStep on_step) {
  if (std::abs(eps) > 0.05)
    throw std::domain_error("flow: |epsilon| must be <= 0.05 (perturbative regime)");
  spec.validate();
  const int m = spec.m.m;
  Field field{&spec, eps};

  Vec2 y{start.x, start.y};
  double t = start.t;
  Zone zone = start.zone;
  {
    const double g0 = curve_g(y, m);
    if (std::abs(g0) > opts.event_tol * 100)
      zone = g0 > 0 ? Zone::Above : Zone::Below;
    else
      zone = (curve_gdot(y, field(Zone::Above, y), m) < 0) ? Zone::Below : Zone::Above;
  }
  bool armed = std::abs(curve_g(y, m)) > 100 * opts.event_tol;

  auto f = [&](const Vec2& p) { return field(zone, p); };
  Vec2 k1 = f(y);
  double h = 1e-3;
  const double h_min = 1e-14;
  int consecutive_rejects = 0;

  on_step(t, y, zone);
  while (t < max_time) {
    h = std::min(h, max_time - t);
    if (h < h_min)
      throw IntegrationError("flow: step size collapsed at t=" + std::to_string(t));
    DP5Step step = dp5_attempt(f, y, t, h, k1, opts.rel_tol, opts.abs_tol);
    if (step.err > 1.0) {
      h *= std::max(0.2, 0.9 * std::pow(step.err, -0.2));
      if (++consecutive_rejects > 60)
        throw IntegrationError("flow: repeated step rejections");
      continue;
    }
    consecutive_rejects = 0;

    // Scan the dense output for a switching-curve crossing.  Detection stays
    // disarmed until the trajectory has clearly left the curve after a
    // switch, and the arming sample itself never pairs with pre-arming signs.
    double theta_hit = -1;
    double prev_th = 0;
    double prev_g = curve_g(step.dense(0), m);
    for (int s = 1; s <= 8; ++s) {
      const double th = s / 8.0;
      const double g = curve_g(step.dense(th), m);
      if (!armed) {
        if (std::abs(g) > 100 * opts.event_tol) armed = true;
        prev_th = th;
        prev_g = g;
        continue;
      }
      if ((prev_g < 0 && g > 0) || (prev_g > 0 && g < 0) || g == 0) {
        // Bisect [prev_th, th] on the dense output.
        double lo = prev_th, hi = th, glo = prev_g;
        for (int it = 0; it < 80; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double gm = curve_g(step.dense(mid), m);
          if (std::abs(gm) <= opts.event_tol) {
            lo = hi = mid;
            break;
          }
          if ((glo < 0) == (gm < 0)) {
            lo = mid;
            glo = gm;
          } else {
            hi = mid;
          }
        }
        theta_hit = 0.5 * (lo + hi);
        break;
      }
      prev_th = th;
      prev_g = g;
    }

    if (theta_hit >= 0) {
      Vec2 pe = step.dense(theta_hit);
      const double te = t + theta_hit * h;
      const double gd = curve_gdot(pe, f(pe), m);
      if (std::abs(gd) < opts.grazing_tol)
        throw GrazingError("flow: tangential grazing at the switching curve",
                           PiecewiseState{pe.x, pe.y, zone, te});
      const Zone new_zone = gd < 0 ? Zone::Below : Zone::Above;
      y = pe;
      t = te;
      zone = new_zone;
      armed = false;
      k1 = f(y);
      on_step(t, y, zone);
      if (!on_event(EventInfo{pe, te, gd}, zone)) return;
      h = std::max(h * 0.25, 1e-6);
      continue;
    }

    y = step.y1;
    t += h;
    k1 = step.k[6];  // FSAL
    on_step(t, y, zone);
    h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(step.err, 1e-12), -0.2)));
  }
}

}  // namespace

Trajectory flow(const PerturbationSpec& spec, double epsilon, PiecewiseState start,
                double max_time, const FlowOptions& opts) {
  Trajectory traj;
  integrate(
      spec, epsilon, start, max_time, opts,
      [&](const EventInfo& ev, Zone new_zone) {
        traj.events.push_back(PiecewiseState{ev.point.x, ev.point.y, new_zone, ev.t});
        return true;
      },
      [&](double t, const Vec2& y, Zone z) {
        if (opts.record || traj.points.size() < 2)
          traj.points.push_back({t, y.x, y.y, z});
        else
          traj.points.back() = {t, y.x, y.y, z};  // keep first and latest only
      });
  return traj;
}

double displacement_map(const PerturbationSpec& spec, double epsilon, double u0,
                        const FlowOptions& opts) {
  if (!(u0 > 0)) throw std::domain_error("displacement_map: u0 must be positive");
  const int m = spec.m.m;
  PiecewiseState start{u0, std::pow(u0, m), Zone::Below, 0.0};
  double result = 0;
  bool found = false;
  // One revolution of the unperturbed center takes 2*pi.
  integrate(
      spec, epsilon, start, 8.0 * M_PI, opts,
      [&](const EventInfo& ev, Zone) {
        // Return section: positive branch, crossed in the departure direction
        // (above-zone into below-zone, g decreasing).
        if (ev.point.x > 0 && ev.gdot < 0 && ev.t > 0.5) {
          result = ev.point.x - u0;
          found = true;
          return false;
        }
        return true;
      },
      [](double, const Vec2&, Zone) {});
  if (!found)
    throw IntegrationError("displacement_map: no return to the section (escape)");
  return result;
}

std::vector<CycleFinding> find_limit_cycles(const PerturbationSpec& spec,
                                            double epsilon, double u_lo, double u_hi,
                                            int samples, double residual_tol) {
  if (epsilon == 0)
    throw std::domain_error("find_limit_cycles: epsilon must be nonzero");
  if (!(u_lo > 0 && u_hi > u_lo))
    throw std::domain_error("find_limit_cycles: need 0 < u_lo < u_hi");
  if (samples < 2) throw std::domain_error("find_limit_cycles: need >= 2 samples");

  FlowOptions tight;
  tight.rel_tol = 1e-12;
  tight.abs_tol = 1e-14;
  auto delta = [&](double u) { return displacement_map(spec, epsilon, u, tight); };

  std::vector<double> us(samples), ds(samples);
  for (int k = 0; k < samples; ++k) {
    us[k] = u_lo + (u_hi - u_lo) * k / (samples - 1);
    ds[k] = delta(us[k]);
  }
  std::vector<CycleFinding> out;
  for (int k = 1; k < samples; ++k) {
    if (ds[k - 1] == 0) continue;
    if ((ds[k - 1] < 0) == (ds[k] < 0) && ds[k] != 0) continue;
    double lo = us[k - 1], hi = us[k], dlo = ds[k - 1];
    double mid = lo, dmid = dlo;
    for (int it = 0; it < 200; ++it) {
      mid = 0.5 * (lo + hi);
      dmid = delta(mid);
      if (std::abs(dmid) < residual_tol || (hi - lo) < 1e-13) break;
      if ((dmid < 0) == (dlo < 0)) {
        lo = mid;
        dlo = dmid;
      } else {
        hi = mid;
      }
    }
    CycleFinding cf;
    cf.u_star = mid;
    cf.h_star = mid * mid + std::pow(mid, 2.0 * spec.m.m);
    cf.residual = std::abs(dmid);
    cf.stability = (ds[k - 1] > 0 && ds[k] < 0)   ? CycleFinding::Stability::Attracting
                   : (ds[k - 1] < 0 && ds[k] > 0) ? CycleFinding::Stability::Repelling
                                                  : CycleFinding::Stability::Undetermined;
    out.push_back(cf);
  }
  std::sort(out.begin(), out.end(),
            [](const CycleFinding& a, const CycleFinding& b) { return a.u_star < b.u_star; });
  return out;
}

}  // namespace mlk::simulate
