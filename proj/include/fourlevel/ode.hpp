// ode.hpp - adaptive Dormand-Prince 5(4) integrator for real state vectors

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fourlevel::ode {

using State = Eigen::VectorXd;

struct Options {
  double rtol = 1e-10;
  double atol = 1e-10;
  double initial_step = 1e-3;
  double max_step = 0.0;        // 0 means unbounded
  double min_step_rel = 1e-13;  // relative to max(1, |t|)
  long max_steps = 50'000'000;
};

class StepUnderflow : public std::runtime_error {
 public:
  StepUnderflow(double t, const std::string& what) : std::runtime_error(what), time(t) {}
  double time;
};

namespace detail {
// Dormand-Prince tableau.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                        b6 = 11.0 / 84;
// fifth-order minus embedded fourth-order weights
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace detail

/// Integrates y' = rhs(t, y) from t0 across every time in `outputs` (ascending, >= t0).
/// Steps are clipped so each output time is hit exactly. After every accepted step
/// `observer(t, y, is_output)` is called; returning false stops the integration there.
/// Returns the time reached.
template <typename Rhs, typename Observer>
double integrate(Rhs&& rhs, double t0, State& y, std::span<const double> outputs,
                 const Options& opt, Observer&& observer) {
  using namespace detail;
  if (outputs.empty()) return t0;
  const double t_end = outputs.back();
  const Eigen::Index n = y.size();
  State k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y_new(n), err(n);

  double t = t0;
  double h = std::max(opt.initial_step, 1e-12);
  std::size_t next = 0;
  while (next < outputs.size() && outputs[next] <= t) {
    if (!observer(t, y, true)) return t;
    ++next;
  }
  rhs(t, y, k1);
  long steps = 0;
  while (next < outputs.size()) {
    if (++steps > opt.max_steps) throw StepUnderflow(t, "ode: step budget exhausted");
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
    const double h_unclipped = h;
    bool hits_output = false;
    if (t + h >= outputs[next]) {
      h = outputs[next] - t;
      hits_output = true;
    }
    const double h_min = opt.min_step_rel * std::max(1.0, std::abs(t));
    if (h < h_min && !hits_output) throw StepUnderflow(t, "ode: step size underflow");

    tmp = y + h * a21 * k1;
    rhs(t + c2 * h, tmp, k2);
    tmp = y + h * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h, tmp, k3);
    tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h, tmp, k4);
    tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h, tmp, k5);
    tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h, tmp, k6);
    y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(t + h, y_new, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err_norm = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double scale = opt.atol + opt.rtol * std::max(std::abs(y(i)), std::abs(y_new(i)));
      err_norm = std::max(err_norm, std::abs(err(i)) / scale);
    }
    if (!std::isfinite(err_norm)) err_norm = 1e10;

    if (err_norm <= 1.0) {
      t = hits_output ? outputs[next] : t + h;
      y = y_new;
      k1 = k7;
      const bool cont = observer(t, y, hits_output);
      if (hits_output) ++next;
      if (!cont) return t;
      const double grow = err_norm == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err_norm, -0.2));
      h *= std::max(1.0, grow);
      if (hits_output) h = std::max(h, h_unclipped);
    } else {
      h *= std::max(0.1, 0.9 * std::pow(err_norm, -0.2));
      if (h < h_min) throw StepUnderflow(t, "ode: step size underflow");
    }
  }
  return t_end;
}

}  // namespace fourlevel::ode
