#include "hyperpursuit/engagement.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "hyperpursuit/errors.hpp"
#include "hyperpursuit/integrate.hpp"

namespace hyperpursuit {

double miss_distance(const Eigen::Vector2d& pursuer_pos, const Eigen::Vector2d& target_pos) {
  return (target_pos - pursuer_pos).norm();
}

EngagementResult run_engagement(const ReferenceSolution& sol, const LtvSchedule& ltv,
                                const RiccatiSchedule& ric, const EvasionStrategy& strategy,
                                const VehicleParams& params, const AtmosphereParams& atmos,
                                const GameConfig& game, const EngagementOptions& options) {
  strategy.validate();
  if (ltv.grid.tf() != sol.t_f_star || ric.grid.tf() != sol.t_f_star) {
    throw ContractViolation("schedules must share the reference horizon");
  }

  EngagementResult r;
  r.grid = TimeGrid::with_max_step(0.0, sol.t_f_star, options.dt);
  r.strategy = strategy;
  r.feedback = options.feedback;
  const std::size_t n = r.grid.size();
  r.pursuer.reserve(n);
  r.target.reserve(n);
  r.alpha.reserve(n);
  r.u_t.reserve(n);
  r.nu_p.reserve(n);
  r.nu_t.reserve(n);
  r.deviation.reserve(n);

  Evader evader(strategy, sol.u_t_star);
  PursuerVector xp = sol.x_star.front();
  TargetVector xt = sol.target0.vec();
  r.min_separation = std::numeric_limits<double>::infinity();

  for (std::size_t k = 0; k < n; ++k) {
    const double t = r.grid.time(k);
    const ReferenceSample ref = resample(sol, t);

    JointDeviation dev;
    dev.head<2>() = xt - sol.target_at(t);
    dev.tail<4>() = xp - ref.state;

    const double nu = options.feedback ? feedback_pursuer(t, dev, ltv, ric) : 0.0;
    const double alpha = saturate(ref.alpha + nu, game.alpha_bounds);
    const double ut = evader.input(t);

    r.pursuer.push_back(xp);
    r.target.push_back(xt);
    r.alpha.push_back(alpha);
    r.u_t.push_back(ut);
    r.nu_p.push_back(nu);
    r.nu_t.push_back(ut - sol.u_t_star);
    r.deviation.push_back(dev);

    const double sep = miss_distance(xp.head<2>(), xt);
    if (sep < r.min_separation) {
      r.min_separation = sep;
      r.min_separation_time = t;
    }
    if (k + 1 == n) break;

    const double dt = r.grid.time(k + 1) - t;
    try {
      if (options.feedforward == InputHold::ZeroOrder) {
        xp = rk4_step(
            [&](double, const PursuerVector& s) { return pursuer_deriv(s, alpha, params, atmos); },
            xp, t, dt);
      } else {
        const double tf = sol.t_f_star;
        xp = rk4_step(
            [&](double tau, const PursuerVector& s) {
              const double a = resample(sol, std::min(tau, tf)).alpha;
              return pursuer_deriv(s, saturate(a + nu, game.alpha_bounds), params, atmos);
            },
            xp, t, dt);
      }
    } catch (const DomainError& e) {
      throw DomainError(std::string("pursuer stalled: ") + e.what() + " at t=" + std::to_string(t),
                        t);
    }
    if (!(xp(2) > 0.0)) {
      throw DomainError("pursuer stalled at t=" + std::to_string(r.grid.time(k + 1)),
                        r.grid.time(k + 1));
    }
    xt += dt * target_deriv(ut, game);
  }

  r.miss_distance = miss_distance(r.pursuer.back().head<2>(), r.target.back());
  return r;
}

double auxiliary_payoff(const EngagementResult& result, const Weights& w) {
  const JointDeviation& xf = result.deviation.back();
  double j = xf.dot(build_Q(w) * xf);
  const auto integrand = [&](std::size_t k) {
    return result.nu_p[k] * result.nu_p[k] - w.w3 * result.nu_t[k] * result.nu_t[k];
  };
  for (std::size_t k = 0; k + 1 < result.grid.size(); ++k) {
    const double dt = result.grid.time(k + 1) - result.grid.time(k);
    j += 0.5 * dt * (integrand(k) + integrand(k + 1));
  }
  return j;
}

std::vector<SweepEntry> sweep_random_evasion(const ReferenceSolution& sol, const LtvSchedule& ltv,
                                             const RiccatiSchedule& ric,
                                             const EvasionStrategy& strategy,
                                             const std::vector<std::uint64_t>& seeds,
                                             const VehicleParams& params,
                                             const AtmosphereParams& atmos, const GameConfig& game,
                                             const EngagementOptions& options, unsigned threads) {
  std::vector<SweepEntry> out(seeds.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      EvasionStrategy s = strategy;
      s.kind = EvasionKind::Random;
      s.seed = seeds[i];
      SweepEntry& e = out[i];
      e.seed = seeds[i];
      try {
        const EngagementResult r = run_engagement(sol, ltv, ric, s, params, atmos, game, options);
        e.miss_distance = r.miss_distance;
        e.min_separation = r.min_separation;
      } catch (const DomainError& err) {
        e.stalled = true;
        e.failure_time = err.time();
        e.miss_distance = std::numeric_limits<double>::quiet_NaN();
        e.min_separation = std::numeric_limits<double>::quiet_NaN();
      }
    }
  };

  unsigned count = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  count = static_cast<unsigned>(std::min<std::size_t>(count, std::max<std::size_t>(seeds.size(), 1)));
  std::vector<std::thread> pool;
  pool.reserve(count);
  for (unsigned i = 0; i < count; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return out;
}

double median_miss(const std::vector<SweepEntry>& entries) {
  std::vector<double> misses;
  for (const auto& e : entries) {
    if (!e.stalled) misses.push_back(e.miss_distance);
  }
  if (misses.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(misses.begin(), misses.end());
  const std::size_t m = misses.size() / 2;
  return misses.size() % 2 ? misses[m] : 0.5 * (misses[m - 1] + misses[m]);
}

}  // namespace hyperpursuit
