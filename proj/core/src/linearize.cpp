#include "hyperpursuit/linearize.hpp"

#include <cmath>
#include <string>

#include "hyperpursuit/errors.hpp"

namespace hyperpursuit {
namespace {

void require_positive_speed(const PursuerVector& state) {
  if (!(state(2) > 0.0)) {
    throw DomainError("Jacobian requires positive speed, got " + std::to_string(state(2)));
  }
}

template <typename M>
M lerp(const std::vector<M>& nodes, const TimeGrid::Locator& at) {
  if (at.fraction == 0.0) return nodes[at.interval];
  if (at.fraction == 1.0) return nodes[at.interval + 1];
  return (1.0 - at.fraction) * nodes[at.interval] + at.fraction * nodes[at.interval + 1];
}

}  // namespace

Matrix4d jacobian_A(const PursuerVector& state, double alpha, const VehicleParams& params,
                    const AtmosphereParams& atmos) {
  require_positive_speed(state);
  const double v = state(2);
  const double gamma = state(3);
  const double k = kappa(state(1), params, atmos);
  const double inv_h = 1.0 / atmos.scale_height;
  const auto [c_l, c_d] = aero_coeffs(alpha, params);
  const double cg = std::cos(gamma);
  const double sg = std::sin(gamma);
  const double g = params.g;

  Matrix4d a = Matrix4d::Zero();
  a(0, 2) = cg;
  a(0, 3) = -v * sg;
  a(1, 2) = sg;
  a(1, 3) = v * cg;
  a(2, 1) = k * v * v * c_d * inv_h;
  a(2, 2) = -2.0 * k * v * c_d;
  a(2, 3) = -g * cg;
  a(3, 1) = -k * v * c_l * inv_h;
  a(3, 2) = k * c_l + g * cg / (v * v);
  a(3, 3) = g * sg / v;
  return a;
}

Vector4d jacobian_B(const PursuerVector& state, double alpha, const VehicleParams& params,
                    const AtmosphereParams& atmos) {
  require_positive_speed(state);
  const double v = state(2);
  const double k = kappa(state(1), params, atmos);
  return {0.0, 0.0, -2.0 * k * params.c_d2 * v * v * alpha, k * params.c_l1 * v};
}

std::pair<Matrix4d, Vector4d> finite_diff_jacobian(const PursuerVector& state, double alpha,
                                                   const VehicleParams& params,
                                                   const AtmosphereParams& atmos,
                                                   const FiniteDiffSteps& steps) {
  const double step[4] = {steps.x, steps.h, steps.v, steps.gamma};
  for (double s : step) {
    if (!(s > 0.0)) throw ContractViolation("finite-difference steps must be positive");
  }
  if (!(steps.alpha > 0.0)) throw ContractViolation("finite-difference steps must be positive");

  Matrix4d a;
  for (int j = 0; j < 4; ++j) {
    PursuerVector plus = state;
    PursuerVector minus = state;
    plus(j) += step[j];
    minus(j) -= step[j];
    a.col(j) = (pursuer_deriv(plus, alpha, params, atmos) - pursuer_deriv(minus, alpha, params, atmos)) /
               (2.0 * step[j]);
  }
  const Vector4d b = (pursuer_deriv(state, alpha + steps.alpha, params, atmos) -
                      pursuer_deriv(state, alpha - steps.alpha, params, atmos)) /
                     (2.0 * steps.alpha);
  return {a, b};
}

Matrix6d LtvSchedule::a_joint_at(double t) const { return lerp(a_joint, grid.locate(t)); }

Vector6d LtvSchedule::b_joint_at(double t) const { return lerp(b_joint, grid.locate(t)); }

Matrix6d assemble_a_joint(const Matrix4d& a) {
  Matrix6d out = Matrix6d::Zero();
  out.bottomRightCorner<4, 4>() = a;
  return out;
}

Vector6d assemble_b_joint(const Vector4d& b) {
  Vector6d out = Vector6d::Zero();
  out.tail<4>() = b;
  return out;
}

Vector6d assemble_d_joint(const GameConfig& game) {
  Vector6d out = Vector6d::Zero();
  out(joint::kTargetX) = game.v_t;
  return out;
}

LtvSchedule build_ltv(const ReferenceSolution& sol, const VehicleParams& params,
                      const AtmosphereParams& atmos, const GameConfig& game,
                      std::optional<TimeGrid> grid) {
  const TimeGrid g = grid.value_or(sol.grid);
  if (std::abs(g.t0() - sol.grid.t0()) > 1e-12 || std::abs(g.tf() - sol.grid.tf()) > 1e-9 * sol.t_f_star) {
    throw ContractViolation("LTV grid must span the reference horizon [0, t_f*]");
  }
  LtvSchedule ltv;
  ltv.grid = g;
  ltv.d_joint = assemble_d_joint(game);
  ltv.a_mats.reserve(g.size());
  ltv.b_mats.reserve(g.size());
  ltv.a_joint.reserve(g.size());
  ltv.b_joint.reserve(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const ReferenceSample ref = resample(sol, g.time(k));
    ltv.a_mats.push_back(jacobian_A(ref.state, ref.alpha, params, atmos));
    ltv.b_mats.push_back(jacobian_B(ref.state, ref.alpha, params, atmos));
    ltv.a_joint.push_back(assemble_a_joint(ltv.a_mats.back()));
    ltv.b_joint.push_back(assemble_b_joint(ltv.b_mats.back()));
  }
  return ltv;
}

}  // namespace hyperpursuit
