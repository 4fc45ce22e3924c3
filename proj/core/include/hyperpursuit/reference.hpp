#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hyperpursuit/time_grid.hpp"
#include "hyperpursuit/vehicle.hpp"

namespace hyperpursuit {

struct TranscriptionConfig {
  std::size_t n_nodes = 100;
  double defect_tol = 1e-8;   // max scaled Hermite-Simpson defect
  double capture_tol = 0.5;   // m, terminal position residual
  std::optional<double> tf_init;  // s; range / speed when absent
  int max_iter = 300;
  std::string backend = "interior-point";

  void validate() const;
  bool operator==(const TranscriptionConfig&) const = default;
};

struct SolverReport {
  std::string backend;
  std::string status;
  int iterations = 0;
  double kkt_error = 0.0;
  double max_defect = 0.0;         // scaled, dimensionless
  double terminal_residual = 0.0;  // m
};

// Minimum-time open-loop pursuit against a constant-heading target.
struct ReferenceSolution {
  TimeGrid grid{0.0, 1.0, 2};
  std::vector<PursuerVector> x_star;
  std::vector<PursuerVector> xdot_star;  // f_P(x_star, u_star) at each node
  std::vector<double> u_star;            // angle of attack, rad
  std::vector<TargetVector> xt_star;
  double t_f_star = 0.0;
  double u_t_star = 1.0;
  TargetState target0;
  double v_t = 0.0;
  SolverReport report;

  // Straight-line target reference x_T0 + v_T u_T* t; defined for any t.
  TargetVector target_at(double t) const {
    return {target0.x + v_t * u_t_star * t, target0.h};
  }
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, SolverReport report)
      : std::runtime_error(what), report_(std::move(report)) {}

  const SolverReport& report() const noexcept { return report_; }

 private:
  SolverReport report_;
};

// Characteristic magnitudes (L, L, V, 1) used to make defects dimensionless:
// L is the initial separation, V the initial speed.
PursuerVector defect_scales(const PursuerVector& x_p0, const TargetVector& x_t0);

// Hermite-Simpson defect of one interval of length h for dx/dt = f(x, u),
// with the midpoint input taken as the average of the node inputs.
template <typename F, typename Vec>
Vec hermite_simpson_defect(F&& f, const Vec& x0, double u0, const Vec& x1, double u1, double h) {
  const Vec f0 = f(x0, u0);
  const Vec f1 = f(x1, u1);
  const Vec xc = 0.5 * (x0 + x1) + (h / 8.0) * (f0 - f1);
  const Vec fc = f(xc, 0.5 * (u0 + u1));
  return x1 - x0 - (h / 6.0) * (f0 + 4.0 * fc + f1);
}

// Solves the one-sided minimum-time intercept by direct Hermite-Simpson
// collocation with free final time. Throws SolverError if the NLP fails or
// the accepted point violates the configured tolerances.
ReferenceSolution solve_min_time_intercept(const PursuerState& x_p0, const TargetState& x_t0,
                                           double u_t_star, const VehicleParams& params,
                                           const AtmosphereParams& atmos, const GameConfig& game,
                                           const TranscriptionConfig& config);

// Scaled infinity-norm of the Hermite-Simpson defect, one entry per interval.
std::vector<double> defect_residuals(const ReferenceSolution& sol, const VehicleParams& params,
                                     const AtmosphereParams& atmos);

struct ReferenceSample {
  PursuerVector state;
  double alpha;
};

// Cubic-Hermite state (from node values and stored derivatives) and linearly
// interpolated input. Throws RangeError outside [0, t_f*].
ReferenceSample resample(const ReferenceSolution& sol, double t);

// Fills xdot_star from the dynamics; used after loading or editing nodes.
void refresh_node_derivatives(ReferenceSolution& sol, const VehicleParams& params,
                              const AtmosphereParams& atmos);

}  // namespace hyperpursuit
