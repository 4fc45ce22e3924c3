#include "hyperpursuit/evader.hpp"

#include <cmath>
#include <limits>

#include "hyperpursuit/errors.hpp"

namespace hyperpursuit {

void EvasionStrategy::validate() const {
  if (kind == EvasionKind::Random && !(hold_period > 0.0)) {
    throw ValidationError("hold_period must be positive for E3");
  }
}

std::string to_string(EvasionKind kind) {
  switch (kind) {
    case EvasionKind::Optimal:
      return "E1";
    case EvasionKind::Opposite:
      return "E2";
    case EvasionKind::Random:
      return "E3";
  }
  return "?";
}

EvasionKind parse_evasion_kind(std::string_view name) {
  if (name == "E1" || name == "optimal") return EvasionKind::Optimal;
  if (name == "E2" || name == "opposite") return EvasionKind::Opposite;
  if (name == "E3" || name == "random") return EvasionKind::Random;
  throw ValidationError("unknown evasion strategy '" + std::string(name) + "'");
}

double oles(const Eigen::Vector2d& pursuer_pos, const TargetState& target) {
  const double dx = target.x - pursuer_pos.x();
  if (dx == 0.0) {
    throw UndefinedStrategyError("evasion direction undefined when x_T == x_P");
  }
  return dx > 0.0 ? 1.0 : -1.0;
}

double ValueApprox::c() const {
  if (!(v_t > 0.0) || !(v_bar_p > v_t)) {
    throw ContractViolation("value approximation requires v_bar_p > v_t > 0");
  }
  return 1.0 / (v_bar_p - v_t);
}

double approx_value(const Eigen::Vector2d& pursuer_pos, const TargetState& target,
                    const ValueApprox& va) {
  return va.c() * (target.position() - pursuer_pos).norm();
}

Evader::Evader(const EvasionStrategy& strategy, double u_t_star)
    : strategy_(strategy), u_t_star_(u_t_star), rng_(strategy.seed) {
  strategy_.validate();
}

double Evader::input(double t) {
  switch (strategy_.kind) {
    case EvasionKind::Optimal:
      return u_t_star_;
    case EvasionKind::Opposite:
      return -u_t_star_;
    case EvasionKind::Random:
      break;
  }
  // The small offset keeps t = k * hold_period on the interval it starts.
  const double u = std::floor(t / strategy_.hold_period + 1e-9);
  const auto index = static_cast<std::size_t>(u < 0.0 ? 0.0 : u);
  while (drawn_.size() <= index) {
    drawn_.push_back(draw_interval(drawn_.size()));
  }
  return drawn_[index];
}

double Evader::draw_interval(std::size_t) {
  // Rejection sampling on the raw engine output; std::uniform_int_distribution
  // is implementation-defined and would break cross-platform reproducibility.
  constexpr std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % 3;
  std::uint64_t raw = rng_();
  while (raw >= limit) raw = rng_();
  return static_cast<double>(raw % 3) - 1.0;
}

}  // namespace hyperpursuit
