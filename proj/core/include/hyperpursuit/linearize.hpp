#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hyperpursuit/reference.hpp"
#include "hyperpursuit/time_grid.hpp"
#include "hyperpursuit/vehicle.hpp"

namespace hyperpursuit {

using Matrix4d = Eigen::Matrix4d;
using Vector4d = Eigen::Vector4d;
using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Vector6d = Eigen::Matrix<double, 6, 1>;

// Joint deviation ordering: (dx_T, dh_T, dx_P, dh_P, dv_P, dgamma_P).
namespace joint {
inline constexpr int kTargetX = 0;
inline constexpr int kTargetH = 1;
inline constexpr int kPursuerX = 2;
inline constexpr int kPursuerH = 3;
inline constexpr int kPursuerV = 4;
inline constexpr int kPursuerGamma = 5;
}  // namespace joint

// d f_P / d (x, h, v, gamma). The x column is identically zero.
Matrix4d jacobian_A(const PursuerVector& state, double alpha, const VehicleParams& params,
                    const AtmosphereParams& atmos);

// d f_P / d alpha = (0, 0, -2 kappa C_D2 v^2 alpha, kappa C_L1 v).
Vector4d jacobian_B(const PursuerVector& state, double alpha, const VehicleParams& params,
                    const AtmosphereParams& atmos);

struct FiniteDiffSteps {
  double x = 1.0;
  double h = 1.0;
  double v = 1e-3;
  double gamma = 1e-6;
  double alpha = 1e-6;
};

// Central differences of pursuer_deriv; the oracle for jacobian_A / jacobian_B.
std::pair<Matrix4d, Vector4d> finite_diff_jacobian(const PursuerVector& state, double alpha,
                                                   const VehicleParams& params,
                                                   const AtmosphereParams& atmos,
                                                   const FiniteDiffSteps& steps = {});

// Linearized joint game along the reference, tabulated on a time grid.
struct LtvSchedule {
  TimeGrid grid{0.0, 1.0, 2};
  std::vector<Matrix4d> a_mats;
  std::vector<Vector4d> b_mats;
  std::vector<Matrix6d> a_joint;
  std::vector<Vector6d> b_joint;
  Vector6d d_joint = Vector6d::Zero();

  // Entrywise linear interpolation between nodes; RangeError off-horizon.
  Matrix6d a_joint_at(double t) const;
  Vector6d b_joint_at(double t) const;
};

// Joint blocks: A_joint = diag(0_2x2, A), B_joint = (0, 0, B), D = (v_T, 0, ...).
Matrix6d assemble_a_joint(const Matrix4d& a);
Vector6d assemble_b_joint(const Vector4d& b);
Vector6d assemble_d_joint(const GameConfig& game);

// Evaluates A, B at (x_star(t), u_star(t)) on `grid` (the reference's own
// collocation grid when omitted). Grid must span [0, t_f*].
LtvSchedule build_ltv(const ReferenceSolution& sol, const VehicleParams& params,
                      const AtmosphereParams& atmos, const GameConfig& game,
                      std::optional<TimeGrid> grid = std::nullopt);

}  // namespace hyperpursuit
