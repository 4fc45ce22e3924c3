#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "hyperpursuit/evader.hpp"
#include "hyperpursuit/integrate.hpp"
#include "hyperpursuit/linearize.hpp"
#include "hyperpursuit/lqdg.hpp"
#include "hyperpursuit/reference.hpp"
#include "hyperpursuit/time_grid.hpp"
#include "hyperpursuit/vehicle.hpp"

namespace hyperpursuit {

struct EngagementOptions {
  double dt = 0.005;     // s, integration step and guidance update period
  bool feedback = true;  // false replays the open-loop pursuit input
  // How the reference input enters each step. The feedback correction is
  // always held from the step's start node.
  InputHold feedforward = InputHold::ZeroOrder;
};

// Full history of one closed-loop engagement on the nonlinear dynamics.
// All per-node vectors share `grid`. Commands at node k are the values held
// over [t_k, t_k+1); the final node carries the commands evaluated at t_f*.
struct EngagementResult {
  TimeGrid grid{0.0, 1.0, 2};
  std::vector<PursuerVector> pursuer;
  std::vector<TargetVector> target;
  std::vector<double> alpha;  // commanded angle of attack after saturation, rad
  std::vector<double> u_t;    // target input
  std::vector<double> nu_p;   // pursuer feedback correction before saturation, rad
  std::vector<double> nu_t;   // u_t - u_t*
  std::vector<JointDeviation> deviation;
  double miss_distance = 0.0;
  double min_separation = 0.0;
  double min_separation_time = 0.0;
  EvasionStrategy strategy;
  bool feedback = true;
};

// Euclidean separation (capture radius zero).
double miss_distance(const Eigen::Vector2d& pursuer_pos, const Eigen::Vector2d& target_pos);

// Runs [0, t_f*] with a fixed step. Guidance and evader inputs are sampled at
// each node and held over the step. A stall (speed reaching zero) raises
// DomainError carrying the failure time.
EngagementResult run_engagement(const ReferenceSolution& sol, const LtvSchedule& ltv,
                                const RiccatiSchedule& ric, const EvasionStrategy& strategy,
                                const VehicleParams& params, const AtmosphereParams& atmos,
                                const GameConfig& game, const EngagementOptions& options = {});

// Terminal quadratic term plus trapezoidal quadrature of nu_P^2 - w3 nu_T^2.
double auxiliary_payoff(const EngagementResult& result, const Weights& w);

struct SweepEntry {
  std::uint64_t seed = 0;
  bool stalled = false;
  double failure_time = 0.0;  // s, only meaningful when stalled
  double miss_distance = 0.0;
  double min_separation = 0.0;
};

// Runs one engagement per seed with strategy.kind forced to Random. Work is
// spread over `threads` workers (hardware concurrency when 0); the schedules
// are shared read-only. Results are returned in seed order.
std::vector<SweepEntry> sweep_random_evasion(const ReferenceSolution& sol, const LtvSchedule& ltv,
                                             const RiccatiSchedule& ric,
                                             const EvasionStrategy& strategy,
                                             const std::vector<std::uint64_t>& seeds,
                                             const VehicleParams& params,
                                             const AtmosphereParams& atmos, const GameConfig& game,
                                             const EngagementOptions& options = {},
                                             unsigned threads = 0);

// Median of the non-stalled misses; NaN when every run stalled.
double median_miss(const std::vector<SweepEntry>& entries);

}  // namespace hyperpursuit
