#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "hyperpursuit/vehicle.hpp"

namespace hyperpursuit {

enum class EvasionKind {
  Optimal,   // E1: u_T = u_T*
  Opposite,  // E2: u_T = -u_T*
  Random,    // E3: uniform draw from {-1, 0, 1}, held for hold_period
};

struct EvasionStrategy {
  EvasionKind kind = EvasionKind::Optimal;
  double hold_period = 1.0;  // s, E3 only
  std::uint64_t seed = 0;    // E3 only

  void validate() const;
};

// "E1" / "E2" / "E3".
std::string to_string(EvasionKind kind);
EvasionKind parse_evasion_kind(std::string_view name);

// Saddle-point heading of the target: sgn(x_T - x_P). Throws
// UndefinedStrategyError when the horizontal positions coincide.
double oles(const Eigen::Vector2d& pursuer_pos, const TargetState& target);

struct ValueApprox {
  double v_bar_p;  // average pursuer speed, m/s
  double v_t;      // target speed, m/s

  // 1 / (v_bar_p - v_t); throws ContractViolation unless v_bar_p > v_t > 0.
  double c() const;
};

// Time-to-go estimate c * |x_T - p_P|.
double approx_value(const Eigen::Vector2d& pursuer_pos, const TargetState& target,
                    const ValueApprox& va);

// Stateful input source for one engagement. E3 draws are cached per hold
// interval, so queries may arrive in any order and stay reproducible.
class Evader {
 public:
  Evader(const EvasionStrategy& strategy, double u_t_star);

  double input(double t);

  const EvasionStrategy& strategy() const noexcept { return strategy_; }

 private:
  double draw_interval(std::size_t index);

  EvasionStrategy strategy_;
  double u_t_star_;
  std::mt19937_64 rng_;
  std::vector<double> drawn_;
};

// Free-function form over a caller-owned Evader.
inline double evader_input(Evader& evader, double t) { return evader.input(t); }

}  // namespace hyperpursuit
