#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hyperpursuit/errors.hpp"
#include "hyperpursuit/integrate.hpp"
#include "hyperpursuit/linearize.hpp"
#include "hyperpursuit/reference.hpp"
#include "hyperpursuit/time_grid.hpp"

namespace hyperpursuit {

// Payoff weights: w1 scales the terminal miss, w2 the altitude share of it,
// w3 the target's input penalty.
struct Weights {
  double w1 = 3e-5;
  double w2 = 1e3;
  double w3 = 1e3;

  void validate() const;
  bool operator==(const Weights&) const = default;
};

using JointDeviation = Vector6d;

// Terminal weight with x^T Q x = w1 [(dx_T - dx_P)^2 + w2 (dh_T - dh_P)^2].
Matrix6d build_Q(const Weights& w);

// B B^T - D D^T / w3.
Matrix6d s_matrix(const Vector6d& b_joint, const Vector6d& d_joint, double w3);

struct RiccatiSchedule {
  TimeGrid grid{0.0, 1.0, 2};
  std::vector<Matrix6d> p_mats;

  // Linear interpolation in t; RangeError off-horizon.
  Matrix6d at(double t) const;
};

struct RiccatiOptions {
  double escape_threshold = 1e12;  // max |P_ij| before declaring finite escape
  double max_step = 5e-4;          // s, RK4 substep bound inside each grid interval
};

// Number of equal substeps that keeps each one no longer than max_step.
inline int substeps_for(double interval, double max_step) {
  if (!(max_step > 0.0)) throw ContractViolation("max_step must be positive");
  return std::max(1, static_cast<int>(std::ceil(std::abs(interval) / max_step - 1e-9)));
}

// Backward RK4 sweep of -dP/dt = A^T P + P A - P S P from P(tf) = terminal.
// Each grid interval is covered by substeps of at most max_step, and
// (P + P^T) / 2 is applied after every substep. A(t) and S(t) are callables
// returning N x N matrices; they are only queried inside [t0, tf]. Throws
// ConjugatePointError when an entry exceeds the threshold or goes non-finite.
template <int N, typename AFn, typename SFn>
std::vector<Eigen::Matrix<double, N, N>> integrate_riccati_backward(
    const TimeGrid& grid, AFn&& a_of, SFn&& s_of, const Eigen::Matrix<double, N, N>& terminal,
    double escape_threshold, double max_step = 5e-4) {
  using Mat = Eigen::Matrix<double, N, N>;
  const auto rhs = [&](double t, const Mat& p) -> Mat {
    const double tc = std::clamp(t, grid.t0(), grid.tf());
    const Mat a = a_of(tc);
    const Mat s = s_of(tc);
    return -(a.transpose() * p + p * a - p * s * p);
  };
  std::vector<Mat> p(grid.size());
  p.back() = terminal;
  for (std::size_t k = grid.size() - 1; k > 0; --k) {
    const double t1 = grid.time(k);
    const double span = grid.time(k - 1) - t1;
    const int m = substeps_for(span, max_step);
    const double h = span / m;
    Mat cur = p[k];
    for (int j = 0; j < m; ++j) {
      const double t = t1 + j * h;
      cur = rk4_step(rhs, cur, t, h);
      cur = 0.5 * (cur + cur.transpose()).eval();
      const double peak = cur.cwiseAbs().maxCoeff();
      if (!std::isfinite(peak) || peak > escape_threshold) {
        const double at = t + h;
        throw ConjugatePointError("Riccati solution escapes near t=" + std::to_string(at) +
                                      "; the target weight w3 is too small for this horizon",
                                  at);
      }
    }
    p[k - 1] = cur;
  }
  return p;
}

// Solves the game Riccati equation on the LTV schedule's grid.
RiccatiSchedule solve_mrde(const LtvSchedule& ltv, const Matrix6d& q, const Weights& w,
                           const RiccatiOptions& options = {});

// nu_P = -B^T(t) P(t) x.
double feedback_pursuer(double t, const JointDeviation& x, const LtvSchedule& ltv,
                        const RiccatiSchedule& ric);

// nu_T = D^T P(t) x / w3.
double feedback_target(double t, const JointDeviation& x, const Vector6d& d_joint, double w3,
                       const RiccatiSchedule& ric);

// Clamp onto a closed interval.
double saturate(double u, const Interval& bounds);

double aggregate_pursuer_input(double t, const JointDeviation& x, const ReferenceSolution& sol,
                               const LtvSchedule& ltv, const RiccatiSchedule& ric,
                               const Interval& bounds);

double aggregate_target_input(double t, const JointDeviation& x, double u_t_star,
                              const Vector6d& d_joint, double w3, const RiccatiSchedule& ric,
                              const Interval& bounds);

// Policies of the linearized game, evaluated at arbitrary (t, x).
using LinearPolicy = std::function<double(double, const JointDeviation&)>;

struct LinearGameOutcome {
  double payoff = 0.0;
  double terminal_cost = 0.0;
  double running_cost = 0.0;
  JointDeviation x_final = JointDeviation::Zero();
};

// Integrates dx/dt = A x + B nu_P + D nu_T over the LTV horizon (RK4 with
// substeps of at most max_step, policies sampled at stage times) together
// with the running cost, and returns x(tf)^T Q x(tf) + int (nu_P^2 - w3 nu_T^2) dt.
LinearGameOutcome simulate_linear_game(const LtvSchedule& ltv, const Matrix6d& q, const Weights& w,
                                       const JointDeviation& x0, const LinearPolicy& pursuer,
                                       const LinearPolicy& target, double max_step = 5e-4);

}  // namespace hyperpursuit
