#pragma once

// Adaptive Dormand–Prince 5(4) integration over fixed-size states.
//
// Error control is absolute and per step: an accepted step satisfies
// max_i |y5_i - y4_i| <= tol, and the solution is propagated with the
// fifth-order result (local extrapolation).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "knotflow/errors.hpp"

namespace knotflow::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Options {
  double tol = 1e-10;
  double h_init = 1e-2;
  double h_min = 1e-14;
  double h_max = 0.5;
  std::size_t max_steps = 50'000'000;
};

template <std::size_t N>
struct StepResult {
  State<N> y;
  double err = 0.0;
};

namespace detail {
// Butcher tableau, Dormand & Prince (1980).
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b* (fifth minus fourth order weights)
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace detail

/// One Dormand–Prince step of size h (h may be negative).
template <std::size_t N, class Rhs>
StepResult<N> dopri5_step(const Rhs& f, double t, const State<N>& y, double h) {
  using namespace detail;
  State<N> k1, k2, k3, k4, k5, k6, k7, tmp;
  f(t, y, k1);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
  f(t + c2 * h, tmp, k2);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
  f(t + c3 * h, tmp, k3);
  for (std::size_t i = 0; i < N; ++i)
    tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
  f(t + c4 * h, tmp, k4);
  for (std::size_t i = 0; i < N; ++i)
    tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
  f(t + c5 * h, tmp, k5);
  for (std::size_t i = 0; i < N; ++i)
    tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
  f(t + h, tmp, k6);
  StepResult<N> out;
  for (std::size_t i = 0; i < N; ++i)
    out.y[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
  f(t + h, out.y, k7);
  double err = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double e =
        h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    err = std::max(err, std::fabs(e));
  }
  out.err = err;
  return out;
}

/// Integrate from t0 to t1 (either direction). After every accepted step
/// `observe(t_prev, y_prev, t, y)` is called; returning false stops the
/// integration early. Returns the final (t, y).
template <std::size_t N, class Rhs, class Observer>
std::pair<double, State<N>> integrate(const Rhs& f, State<N> y, double t0, double t1,
                                      const Options& opt, Observer&& observe) {
  const double span = t1 - t0;
  if (span == 0.0) return {t0, y};
  const double dir = span > 0 ? 1.0 : -1.0;
  double t = t0;
  double h = std::min({opt.h_init, opt.h_max, std::fabs(span)});
  std::size_t steps = 0;
  while (dir * (t1 - t) > 0.0) {
    if (++steps > opt.max_steps) throw StepUnderflow("step budget exhausted");
    const double remaining = std::fabs(t1 - t);
    bool last = false;
    if (h >= remaining) {
      h = remaining;
      last = true;
    }
    const StepResult<N> r = dopri5_step<N>(f, t, y, dir * h);
    if (!std::isfinite(r.err)) {
      h *= 0.2;
      if (h < opt.h_min) throw StepUnderflow("non-finite derivative");
      continue;
    }
    const double fac =
        r.err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(opt.tol / r.err, 0.2), 0.2, 5.0);
    if (r.err <= opt.tol) {
      const double t_prev = t;
      const State<N> y_prev = y;
      t = last ? t1 : t + dir * h;
      y = r.y;
      if (!observe(t_prev, y_prev, t, y)) return {t, y};
      h = std::min(h * fac, opt.h_max);
    } else {
      h *= fac;
      if (h < opt.h_min) throw StepUnderflow("step size collapsed below " + std::to_string(opt.h_min));
    }
  }
  return {t, y};
}

template <std::size_t N, class Rhs>
State<N> integrate(const Rhs& f, const State<N>& y, double t0, double t1, const Options& opt) {
  return integrate<N>(f, y, t0, t1, opt, [](double, const State<N>&, double, const State<N>&) {
           return true;
         }).second;
}

/// Given an accepted step from (t, y) of signed size h across which the
/// scalar event g changes sign (ga = g(y), gb = g(y(t+h))), locate the
/// crossing by an Illinois-modified regula falsi on substeps taken from
/// (t, y). Returns (s, y(t+s)) with s the signed substep.
template <std::size_t N, class Rhs, class Event>
std::pair<double, State<N>> locate_event(const Rhs& f, double t, const State<N>& y, double h,
                                         const Event& g, double ga, double gb,
                                         double g_tol = 1e-13) {
  double sa = 0.0, sb = h;
  State<N> yb = dopri5_step<N>(f, t, y, h).y;
  State<N> best = yb;
  double s_best = h;
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    double s = (sa * gb - sb * ga) / (gb - ga);
    if (!(std::fabs(s - sa) > 0.0 && std::fabs(sb - s) > 0.0) || !std::isfinite(s))
      s = 0.5 * (sa + sb);
    const State<N> ys = dopri5_step<N>(f, t, y, s).y;
    const double gs = g(ys);
    best = ys;
    s_best = s;
    if (std::fabs(gs) < g_tol || std::fabs(sb - sa) < 1e-15 * (1.0 + std::fabs(t))) break;
    if ((gs > 0) == (gb > 0)) {
      sb = s;
      gb = gs;
      if (side == -1) ga *= 0.5;
      side = -1;
    } else {
      sa = s;
      ga = gs;
      if (side == 1) gb *= 0.5;
      side = 1;
    }
  }
  return {s_best, best};
}

}  // namespace knotflow::ode
