#include "hyperpursuit/lqdg.hpp"

#include <algorithm>

namespace hyperpursuit {

void Weights::validate() const {
  if (!(w1 > 0.0) || !(w2 > 0.0) || !(w3 > 0.0)) {
    throw ValidationError("weights w1, w2, w3 must be positive");
  }
}

Matrix6d build_Q(const Weights& w) {
  Matrix6d q = Matrix6d::Zero();
  using namespace joint;
  q(kTargetX, kTargetX) = w.w1;
  q(kPursuerX, kPursuerX) = w.w1;
  q(kTargetX, kPursuerX) = -w.w1;
  q(kPursuerX, kTargetX) = -w.w1;
  const double wh = w.w1 * w.w2;
  q(kTargetH, kTargetH) = wh;
  q(kPursuerH, kPursuerH) = wh;
  q(kTargetH, kPursuerH) = -wh;
  q(kPursuerH, kTargetH) = -wh;
  return q;
}

Matrix6d s_matrix(const Vector6d& b_joint, const Vector6d& d_joint, double w3) {
  if (!(w3 > 0.0)) throw ContractViolation("w3 must be positive");
  return b_joint * b_joint.transpose() - (d_joint * d_joint.transpose()) / w3;
}

Matrix6d RiccatiSchedule::at(double t) const {
  const auto [k, s] = grid.locate(t);
  if (s == 0.0) return p_mats[k];
  if (s == 1.0) return p_mats[k + 1];
  return (1.0 - s) * p_mats[k] + s * p_mats[k + 1];
}

RiccatiSchedule solve_mrde(const LtvSchedule& ltv, const Matrix6d& q, const Weights& w,
                           const RiccatiOptions& options) {
  w.validate();
  RiccatiSchedule ric;
  ric.grid = ltv.grid;
  ric.p_mats = integrate_riccati_backward<6>(
      ltv.grid, [&](double t) { return ltv.a_joint_at(t); },
      [&](double t) { return s_matrix(ltv.b_joint_at(t), ltv.d_joint, w.w3); }, q,
      options.escape_threshold, options.max_step);
  return ric;
}

double feedback_pursuer(double t, const JointDeviation& x, const LtvSchedule& ltv,
                        const RiccatiSchedule& ric) {
  return -ltv.b_joint_at(t).dot(ric.at(t) * x);
}

double feedback_target(double t, const JointDeviation& x, const Vector6d& d_joint, double w3,
                       const RiccatiSchedule& ric) {
  return d_joint.dot(ric.at(t) * x) / w3;
}

double saturate(double u, const Interval& bounds) {
  if (!(bounds.lo <= bounds.hi)) throw ContractViolation("saturation bounds are empty");
  return std::clamp(u, bounds.lo, bounds.hi);
}

double aggregate_pursuer_input(double t, const JointDeviation& x, const ReferenceSolution& sol,
                               const LtvSchedule& ltv, const RiccatiSchedule& ric,
                               const Interval& bounds) {
  return saturate(resample(sol, t).alpha + feedback_pursuer(t, x, ltv, ric), bounds);
}

double aggregate_target_input(double t, const JointDeviation& x, double u_t_star,
                              const Vector6d& d_joint, double w3, const RiccatiSchedule& ric,
                              const Interval& bounds) {
  return saturate(u_t_star + feedback_target(t, x, d_joint, w3, ric), bounds);
}

LinearGameOutcome simulate_linear_game(const LtvSchedule& ltv, const Matrix6d& q, const Weights& w,
                                       const JointDeviation& x0, const LinearPolicy& pursuer,
                                       const LinearPolicy& target, double max_step) {
  // Augmented state: joint deviation plus accumulated running cost.
  using Augmented = Eigen::Matrix<double, 7, 1>;
  const TimeGrid& grid = ltv.grid;
  const auto rhs = [&](double tau, const Augmented& s) -> Augmented {
    const double t = std::clamp(tau, grid.t0(), grid.tf());
    const JointDeviation x = s.head<6>();
    const double nu_p = pursuer(t, x);
    const double nu_t = target(t, x);
    Augmented out;
    out.head<6>() = ltv.a_joint_at(t) * x + ltv.b_joint_at(t) * nu_p + ltv.d_joint * nu_t;
    out(6) = nu_p * nu_p - w.w3 * nu_t * nu_t;
    return out;
  };
  Augmented s;
  s.head<6>() = x0;
  s(6) = 0.0;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double t0 = grid.time(k);
    const double span = grid.time(k + 1) - t0;
    const int m = substeps_for(span, max_step);
    const double h = span / m;
    for (int j = 0; j < m; ++j) s = rk4_step(rhs, s, t0 + j * h, h);
  }
  LinearGameOutcome out;
  out.x_final = s.head<6>();
  out.terminal_cost = out.x_final.dot(q * out.x_final);
  out.running_cost = s(6);
  out.payoff = out.terminal_cost + out.running_cost;
  return out;
}

}  // namespace hyperpursuit
