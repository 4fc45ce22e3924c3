#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hyperpursuit/linearize.hpp"
#include "hyperpursuit/lqdg.hpp"
#include "hyperpursuit/reference.hpp"
#include "hyperpursuit/time_grid.hpp"

namespace hyperpursuit {

// Independent oracles and self-checks for the linearization and game layers.

// Exact solution of the scalar Riccati equation -dp/dt = 2 a p - s p^2 with
// p(tf) = q, via the Bernoulli substitution y = 1/p.
double scalar_riccati_closed_form(double a, double s, double q, double t, double tf);

// Riccati sweep through the Hamiltonian system
//   dX/dt = A X - S Y,  dY/dt = -A^T Y,  X(tf) = I, Y(tf) = Q,
// with P = Y X^{-1}. Linear in (X, Y), so it shares no code path with the
// nonlinear sweep in solve_mrde. `substeps` RK4 steps per grid interval.
std::vector<Eigen::MatrixXd> hamiltonian_riccati_sweep(const LtvSchedule& ltv, const Matrix6d& q,
                                                       double w3, int substeps = 4);

// Max over nodes and entries of |analytic - fd| / max(|fd|, floor).
struct JacobianComparison {
  double max_rel_error = 0.0;
  std::size_t worst_node = 0;
  int worst_row = 0;
  int worst_col = 0;  // 4 denotes the B column
};

JacobianComparison compare_jacobians(const ReferenceSolution& sol, const VehicleParams& params,
                                     const AtmosphereParams& atmos,
                                     const FiniteDiffSteps& steps = {},
                                     double a_perturbation = 0.0);

// Saddle-point sampling on the linear game from a fixed x0.
struct SaddleCheck {
  double value = 0.0;           // x0^T P(0) x0
  double saddle_payoff = 0.0;   // J(nu_P*, nu_T*) by simulation
  double max_target_gain = 0.0;    // max_k (J(nu_P*, nu_T^k) - J*) / |J*|
  double max_pursuer_gain = 0.0;   // max_k (J* - J(nu_P^k, nu_T*)) / |J*|
  double value_rel_error = 0.0;
};

SaddleCheck check_saddle(const LtvSchedule& ltv, const RiccatiSchedule& ric, const Matrix6d& q,
                         const Weights& w, const JointDeviation& x0, std::size_t samples,
                         std::uint64_t seed);

// Default nonzero initial deviation used by the saddle checks.
JointDeviation default_saddle_x0();

struct CheckResult {
  std::string name;
  bool passed = false;
  bool expected_failure = false;  // a failure was the intended outcome and occurred
  std::string detail;
};

struct ValidationOptions {
  double a_perturbation = 0.0;  // test hook: added to A(3,2) before comparison
  std::size_t saddle_samples = 50;
  std::uint64_t seed = 7;
  double small_w3 = 1e-6;
  // Step of the grid the linear-game checks run on. The Riccati solution
  // varies on a ~10 ms scale near t_f*, so this is finer than the
  // simulation step.
  double linear_dt = 1.25e-3;
};

// Runs every check against an accepted reference and returns one row each.
std::vector<CheckResult> run_validation_suite(const ReferenceSolution& sol,
                                              const VehicleParams& params,
                                              const AtmosphereParams& atmos,
                                              const GameConfig& game, const Weights& w,
                                              const ValidationOptions& options = {});

}  // namespace hyperpursuit
