#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "hyperpursuit/errors.hpp"
#include "hyperpursuit/time_grid.hpp"

namespace hyperpursuit {

// Classical fourth-order Runge-Kutta step for dx/dt = f(t, x). A negative dt
// steps backward in time. State can be any Eigen vector/matrix or a scalar.
template <typename F, typename State>
State rk4_step(F&& f, const State& x, double t, double dt) {
  const double half = 0.5 * dt;
  const State k1 = f(t, x);
  const State k2 = f(t + half, State(x + half * k1));
  const State k3 = f(t + half, State(x + half * k2));
  const State k4 = f(t + dt, State(x + dt * k3));
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

enum class InputHold {
  // Input sampled at the start of each step and held for all four stages.
  ZeroOrder,
  // Input sampled at every stage time.
  Interpolate,
};

// Integrates dx/dt = f(t, x, u) over grid with u = schedule(t). Domain errors
// raised by f are rethrown with the time of the failing step attached.
template <typename F, typename Schedule, typename State>
std::vector<State> propagate(F&& f, const State& x0, const TimeGrid& grid, Schedule&& schedule,
                             InputHold hold = InputHold::ZeroOrder) {
  std::vector<State> trajectory;
  trajectory.reserve(grid.size());
  trajectory.push_back(x0);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double t = grid.time(k);
    const double dt = grid.time(k + 1) - t;
    try {
      if (hold == InputHold::ZeroOrder) {
        const auto u = schedule(t);
        trajectory.push_back(rk4_step(
            [&](double tau, const State& x) { return State(f(tau, x, u)); }, trajectory.back(), t,
            dt));
      } else {
        trajectory.push_back(rk4_step(
            [&](double tau, const State& x) { return State(f(tau, x, schedule(tau))); },
            trajectory.back(), t, dt));
      }
    } catch (const DomainError& e) {
      throw DomainError(std::string(e.what()) + " (step starting at t=" + std::to_string(t) + ")",
                        t);
    }
  }
  return trajectory;
}

// Autonomous convenience overload without an input.
template <typename F, typename State>
std::vector<State> propagate(F&& f, const State& x0, const TimeGrid& grid) {
  return propagate([&](double t, const State& x, int) { return f(t, x); }, x0, grid,
                   [](double) { return 0; });
}

}  // namespace hyperpursuit
