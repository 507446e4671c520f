#pragma once

#include <utility>

namespace solvharm {

/// One classical fourth-order Runge-Kutta step for y' = f(t, y). State must
/// support +, and scalar *.
template <class State, class F>
State rk4_step(F&& f, double t, const State& y, double h) {
  const State k1 = f(t, y);
  const State k2 = f(t + 0.5 * h, State(y + (0.5 * h) * k1));
  const State k3 = f(t + 0.5 * h, State(y + (0.5 * h) * k2));
  const State k4 = f(t + h, State(y + h * k3));
  return State(y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

/// Fixed-step integration from t0 to t1; observe(t, y) is called at t0 and
/// after every step.
template <class State, class F, class Observe>
State rk4_integrate(F&& f, State y, double t0, double t1, int steps, Observe&& observe) {
  const double h = (t1 - t0) / steps;
  observe(t0, y);
  for (int i = 0; i < steps; ++i) {
    const double t = t0 + i * h;
    y = rk4_step(f, t, y, h);
    observe(t0 + (i + 1) * h, y);
  }
  return y;
}

template <class State, class F>
State rk4_integrate(F&& f, State y, double t0, double t1, int steps) {
  return rk4_integrate(std::forward<F>(f), std::move(y), t0, t1, steps, [](double, const State&) {});
}

}  // namespace solvharm
