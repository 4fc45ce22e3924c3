#include "hyperpursuit/reference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "hyperpursuit/errors.hpp"
#include "hyperpursuit/linearize.hpp"
#include "hyperpursuit/nlp.hpp"

namespace hyperpursuit {
namespace {

using nlp::MatrixXd;
using nlp::VectorXd;

constexpr int kNx = 4;
constexpr int kLocal = 2 * kNx + 3;  // x_k, x_k+1, u_k, u_k+1, t_f

// Defect of one interval and its partials with respect to the physical
// interval variables.
struct IntervalEval {
  Vector4d defect;
  Matrix4d d_x0;
  Matrix4d d_x1;
  Vector4d d_u0;
  Vector4d d_u1;
  Vector4d d_tf;
};

IntervalEval evaluate_interval(const Vector4d& x0, double u0, const Vector4d& x1, double u1,
                               double tf, double dtau, const VehicleParams& params,
                               const AtmosphereParams& atmos) {
  const double h = tf * dtau;
  const double uc = 0.5 * (u0 + u1);
  const Vector4d f0 = pursuer_deriv(x0, u0, params, atmos);
  const Vector4d f1 = pursuer_deriv(x1, u1, params, atmos);
  const Matrix4d a0 = jacobian_A(x0, u0, params, atmos);
  const Matrix4d a1 = jacobian_A(x1, u1, params, atmos);
  const Vector4d b0 = jacobian_B(x0, u0, params, atmos);
  const Vector4d b1 = jacobian_B(x1, u1, params, atmos);

  const Vector4d xc = 0.5 * (x0 + x1) + (h / 8.0) * (f0 - f1);
  const Vector4d fc = pursuer_deriv(xc, uc, params, atmos);
  const Matrix4d ac = jacobian_A(xc, uc, params, atmos);
  const Vector4d bc = jacobian_B(xc, uc, params, atmos);

  const Matrix4d eye = Matrix4d::Identity();
  const Matrix4d xc_x0 = 0.5 * eye + (h / 8.0) * a0;
  const Matrix4d xc_x1 = 0.5 * eye - (h / 8.0) * a1;
  const Vector4d xc_u0 = (h / 8.0) * b0;
  const Vector4d xc_u1 = -(h / 8.0) * b1;
  const Vector4d xc_tf = (dtau / 8.0) * (f0 - f1);

  const Matrix4d fc_x0 = ac * xc_x0;
  const Matrix4d fc_x1 = ac * xc_x1;
  const Vector4d fc_u0 = ac * xc_u0 + 0.5 * bc;
  const Vector4d fc_u1 = ac * xc_u1 + 0.5 * bc;
  const Vector4d fc_tf = ac * xc_tf;

  IntervalEval out;
  out.defect = x1 - x0 - (h / 6.0) * (f0 + 4.0 * fc + f1);
  out.d_x0 = -eye - (h / 6.0) * (a0 + 4.0 * fc_x0);
  out.d_x1 = eye - (h / 6.0) * (4.0 * fc_x1 + a1);
  out.d_u0 = -(h / 6.0) * (b0 + 4.0 * fc_u0);
  out.d_u1 = -(h / 6.0) * (4.0 * fc_u1 + b1);
  out.d_tf = -(dtau / 6.0) * (f0 + 4.0 * fc + f1) - (h / 6.0) * 4.0 * fc_tf;
  return out;
}

// Decision vector (all scaled): [x_0 .. x_{N-1} | u_0 .. u_{N-1} | t_f].
// Constraints (scaled): [initial state (4) | defects (4(N-1)) | terminal (2)].
class InterceptProblem final : public nlp::Problem {
 public:
  InterceptProblem(const PursuerState& x_p0, const TargetState& x_t0, double u_t_star,
                   const VehicleParams& params, const AtmosphereParams& atmos,
                   const GameConfig& game, std::size_t nodes, double tf_scale)
      : x_p0_(x_p0.vec()),
        x_t0_(x_t0.vec()),
        target_rate_(game.v_t * u_t_star),
        params_(params),
        atmos_(atmos),
        game_(game),
        nodes_(static_cast<Eigen::Index>(nodes)),
        dtau_(1.0 / static_cast<double>(nodes - 1)),
        state_scale_(defect_scales(x_p0_, x_t0_)),
        alpha_scale_(std::max(std::abs(game.alpha_bounds.lo), std::abs(game.alpha_bounds.hi))),
        tf_scale_(tf_scale) {}

  Eigen::Index num_variables() const override { return kNx * nodes_ + nodes_ + 1; }
  Eigen::Index num_constraints() const override { return kNx + kNx * (nodes_ - 1) + 2; }

  VectorXd lower_bounds() const override {
    VectorXd lo = VectorXd::Constant(num_variables(), -std::numeric_limits<double>::infinity());
    lo.segment(u_index(0), nodes_).setConstant(game_.alpha_bounds.lo / alpha_scale_);
    lo(tf_index()) = 1e-3;
    return lo;
  }

  VectorXd upper_bounds() const override {
    VectorXd hi = VectorXd::Constant(num_variables(), std::numeric_limits<double>::infinity());
    hi.segment(u_index(0), nodes_).setConstant(game_.alpha_bounds.hi / alpha_scale_);
    hi(tf_index()) = 1e2;
    return hi;
  }

  double objective(const VectorXd& z) const override { return tf_scale_ * z(tf_index()); }

  VectorXd objective_gradient(const VectorXd& z) const override {
    VectorXd g = VectorXd::Zero(z.size());
    g(tf_index()) = tf_scale_;
    return g;
  }

  VectorXd constraints(const VectorXd& z) const override {
    VectorXd c(num_constraints());
    try {
      c.head<kNx>() = (state(z, 0) - x_p0_).cwiseQuotient(state_scale_);
      const double tf = final_time(z);
      for (Eigen::Index k = 0; k + 1 < nodes_; ++k) {
        const auto f = [&](const Vector4d& x, double u) { return Vector4d(pursuer_deriv(x, u, params_, atmos_)); };
        const Vector4d d = hermite_simpson_defect(f, state(z, k), input(z, k), state(z, k + 1),
                                                  input(z, k + 1), tf * dtau_);
        c.segment<kNx>(defect_row(k)) = d.cwiseQuotient(state_scale_);
      }
      const Vector4d last = state(z, nodes_ - 1);
      c(terminal_row()) = (last(0) - (x_t0_(0) + target_rate_ * tf)) / state_scale_(0);
      c(terminal_row() + 1) = (last(1) - x_t0_(1)) / state_scale_(1);
    } catch (const DomainError&) {
      c.setConstant(std::numeric_limits<double>::quiet_NaN());
    }
    return c;
  }

  MatrixXd constraint_jacobian(const VectorXd& z) const override {
    MatrixXd jac = MatrixXd::Zero(num_constraints(), num_variables());
    for (int i = 0; i < kNx; ++i) jac(i, state_index(0) + i) = 1.0;
    const double tf = final_time(z);
    for (Eigen::Index k = 0; k + 1 < nodes_; ++k) {
      const Eigen::Matrix<double, kNx, kLocal> local = local_jacobian(z, k, tf);
      scatter_interval(jac, k, local);
    }
    jac(terminal_row(), state_index(nodes_ - 1)) = 1.0;
    jac(terminal_row(), tf_index()) = -target_rate_ * tf_scale_ / state_scale_(0);
    jac(terminal_row() + 1, state_index(nodes_ - 1) + 1) = 1.0;
    return jac;
  }

  // The objective and the initial/terminal rows are linear, so only defect
  // rows contribute. Each interval's term lambda_k . d_k depends on 11 local
  // variables; its Hessian is central-differenced from the analytic gradient.
  MatrixXd lagrangian_hessian(const VectorXd& z, double, const VectorXd& lambda) const override {
    MatrixXd hess = MatrixXd::Zero(num_variables(), num_variables());
    for (Eigen::Index k = 0; k + 1 < nodes_; ++k) {
      const Vector4d lam = lambda.segment<kNx>(defect_row(k));
      const auto cols = local_columns(k);
      Eigen::Matrix<double, kLocal, kLocal> local;
      VectorXd probe = z;
      for (int j = 0; j < kLocal; ++j) {
        const Eigen::Index col = cols[j];
        const double step = 1e-6 * std::max(1.0, std::abs(z(col)));
        probe(col) = z(col) + step;
        const Eigen::Matrix<double, kLocal, 1> gp = local_jacobian(probe, k, final_time(probe)).transpose() * lam;
        probe(col) = z(col) - step;
        const Eigen::Matrix<double, kLocal, 1> gm = local_jacobian(probe, k, final_time(probe)).transpose() * lam;
        probe(col) = z(col);
        local.col(j) = (gp - gm) / (2.0 * step);
      }
      local = 0.5 * (local + local.transpose()).eval();
      for (int i = 0; i < kLocal; ++i) {
        for (int j = 0; j < kLocal; ++j) hess(cols[i], cols[j]) += local(i, j);
      }
    }
    return hess;
  }

  VectorXd initial_guess(double tf_init) const {
    VectorXd z(num_variables());
    const double x_end = x_t0_(0) + target_rate_ * tf_init;
    double gamma_los = std::atan2(x_t0_(1) - x_p0_(1), x_end - x_p0_(0));
    // Same branch as the initial flight-path angle, so the guess does not sweep through 2 pi.
    gamma_los += 2.0 * std::numbers::pi * std::round((x_p0_(3) - gamma_los) / (2.0 * std::numbers::pi));
    const Vector4d end(x_end, x_t0_(1), x_p0_(2), gamma_los);
    for (Eigen::Index k = 0; k < nodes_; ++k) {
      const double s = static_cast<double>(k) * dtau_;
      z.segment<kNx>(state_index(k)) = ((1.0 - s) * x_p0_ + s * end).cwiseQuotient(state_scale_);
    }
    z.segment(u_index(0), nodes_).setZero();
    z(tf_index()) = tf_init / tf_scale_;
    return z;
  }

  Vector4d state(const VectorXd& z, Eigen::Index k) const {
    return z.segment<kNx>(state_index(k)).cwiseProduct(state_scale_);
  }
  double input(const VectorXd& z, Eigen::Index k) const { return z(u_index(k)) * alpha_scale_; }
  double final_time(const VectorXd& z) const { return z(tf_index()) * tf_scale_; }
  Eigen::Index nodes() const { return nodes_; }
  const Vector4d& state_scale() const { return state_scale_; }

 private:
  Eigen::Index state_index(Eigen::Index k) const { return kNx * k; }
  Eigen::Index u_index(Eigen::Index k) const { return kNx * nodes_ + k; }
  Eigen::Index tf_index() const { return kNx * nodes_ + nodes_; }
  Eigen::Index defect_row(Eigen::Index k) const { return kNx + kNx * k; }
  Eigen::Index terminal_row() const { return kNx + kNx * (nodes_ - 1); }

  std::array<Eigen::Index, kLocal> local_columns(Eigen::Index k) const {
    std::array<Eigen::Index, kLocal> cols{};
    for (int i = 0; i < kNx; ++i) {
      cols[i] = state_index(k) + i;
      cols[kNx + i] = state_index(k + 1) + i;
    }
    cols[2 * kNx] = u_index(k);
    cols[2 * kNx + 1] = u_index(k + 1);
    cols[2 * kNx + 2] = tf_index();
    return cols;
  }

  // Jacobian of the scaled defect of interval k with respect to the scaled
  // local variables, ordered as local_columns(k).
  Eigen::Matrix<double, kNx, kLocal> local_jacobian(const VectorXd& z, Eigen::Index k, double tf) const {
    const IntervalEval e = evaluate_interval(state(z, k), input(z, k), state(z, k + 1), input(z, k + 1),
                                             tf, dtau_, params_, atmos_);
    const Eigen::DiagonalMatrix<double, kNx> row_scale(state_scale_.cwiseInverse());
    const Eigen::DiagonalMatrix<double, kNx> col_scale(state_scale_);
    Eigen::Matrix<double, kNx, kLocal> local;
    local.leftCols<kNx>() = row_scale * e.d_x0 * col_scale;
    local.middleCols<kNx>(kNx) = row_scale * e.d_x1 * col_scale;
    local.col(2 * kNx) = row_scale * e.d_u0 * alpha_scale_;
    local.col(2 * kNx + 1) = row_scale * e.d_u1 * alpha_scale_;
    local.col(2 * kNx + 2) = row_scale * e.d_tf * tf_scale_;
    return local;
  }

  void scatter_interval(MatrixXd& jac, Eigen::Index k, const Eigen::Matrix<double, kNx, kLocal>& local) const {
    const auto cols = local_columns(k);
    for (int j = 0; j < kLocal; ++j) jac.block<kNx, 1>(defect_row(k), cols[j]) += local.col(j);
  }

  Vector4d x_p0_;
  Eigen::Vector2d x_t0_;
  double target_rate_;
  VehicleParams params_;
  AtmosphereParams atmos_;
  GameConfig game_;
  Eigen::Index nodes_;
  double dtau_;
  Vector4d state_scale_;
  double alpha_scale_;
  double tf_scale_;
};

double max_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

}  // namespace

void TranscriptionConfig::validate() const {
  if (n_nodes < 20) throw ValidationError("n_nodes must be at least 20");
  if (!(defect_tol > 0.0)) throw ValidationError("defect_tol must be positive");
  if (!(capture_tol > 0.0)) throw ValidationError("capture_tol must be positive");
  if (tf_init && !(*tf_init > 0.0)) throw ValidationError("tf_init must be positive");
  if (max_iter < 1) throw ValidationError("max_iter must be positive");
  if (backend != "interior-point" && backend != "ipm") {
    throw ValidationError("unknown NLP backend '" + backend + "'");
  }
}

PursuerVector defect_scales(const PursuerVector& x_p0, const TargetVector& x_t0) {
  const double range = std::max(1.0, (x_t0 - x_p0.head<2>()).norm());
  const double speed = std::max(1.0, std::abs(x_p0(2)));
  return {range, range, speed, 1.0};
}

ReferenceSolution solve_min_time_intercept(const PursuerState& x_p0, const TargetState& x_t0,
                                           double u_t_star, const VehicleParams& params,
                                           const AtmosphereParams& atmos, const GameConfig& game,
                                           const TranscriptionConfig& config) {
  config.validate();
  if (u_t_star != 1.0 && u_t_star != -1.0) {
    throw ContractViolation("u_t_star must be +1 or -1");
  }
  if (!(x_p0.v > 0.0)) throw ContractViolation("initial pursuer speed must be positive");

  const double range = (x_t0.position() - x_p0.position()).norm();
  const double tf_init = config.tf_init.value_or(range / x_p0.v);
  InterceptProblem problem(x_p0, x_t0, u_t_star, params, atmos, game, config.n_nodes, tf_init);

  nlp::Options options;
  options.max_iterations = config.max_iter;
  options.constraint_tol = std::min(1e-9, 0.1 * config.defect_tol);
  const auto solver = nlp::make_solver(config.backend, options);
  const nlp::Result result = solver->solve(problem, problem.initial_guess(tf_init));

  ReferenceSolution sol;
  sol.t_f_star = problem.final_time(result.z);
  sol.grid = TimeGrid(0.0, sol.t_f_star, config.n_nodes);
  sol.u_t_star = u_t_star;
  sol.target0 = x_t0;
  sol.v_t = game.v_t;
  for (Eigen::Index k = 0; k < problem.nodes(); ++k) {
    sol.x_star.push_back(problem.state(result.z, k));
    sol.u_star.push_back(std::clamp(problem.input(result.z, k), game.alpha_bounds.lo, game.alpha_bounds.hi));
    sol.xt_star.push_back(sol.target_at(sol.grid.time(static_cast<std::size_t>(k))));
  }
  // Pin the initial node to the given state; the solver satisfies it to tolerance only.
  sol.x_star.front() = x_p0.vec();

  SolverReport& report = sol.report;
  report.backend = solver->name();
  report.status = nlp::to_string(result.status);
  report.iterations = result.iterations;
  report.kkt_error = result.kkt_error;

  if (!result.ok()) {
    throw SolverError("minimum-time intercept NLP did not converge (" + report.status + ")", report);
  }
  refresh_node_derivatives(sol, params, atmos);
  report.max_defect = max_of(defect_residuals(sol, params, atmos));
  const PursuerVector& last = sol.x_star.back();
  report.terminal_residual = (sol.xt_star.back() - last.head<2>()).norm();

  if (report.max_defect > config.defect_tol) {
    throw SolverError("collocation defect " + std::to_string(report.max_defect) + " exceeds tolerance", report);
  }
  if (report.terminal_residual > config.capture_tol) {
    throw SolverError("terminal residual " + std::to_string(report.terminal_residual) + " m exceeds capture tolerance",
                      report);
  }
  return sol;
}

std::vector<double> defect_residuals(const ReferenceSolution& sol, const VehicleParams& params,
                                     const AtmosphereParams& atmos) {
  const PursuerVector scale = defect_scales(sol.x_star.front(), sol.xt_star.front());
  const double h = sol.grid.dt();
  const auto f = [&](const Vector4d& x, double u) { return Vector4d(pursuer_deriv(x, u, params, atmos)); };
  std::vector<double> out;
  out.reserve(sol.grid.intervals());
  for (std::size_t k = 0; k + 1 < sol.x_star.size(); ++k) {
    const Vector4d d = hermite_simpson_defect(f, Vector4d(sol.x_star[k]), sol.u_star[k], Vector4d(sol.x_star[k + 1]),
                                              sol.u_star[k + 1], h);
    out.push_back(d.cwiseQuotient(scale).cwiseAbs().maxCoeff());
  }
  return out;
}

ReferenceSample resample(const ReferenceSolution& sol, double t) {
  const auto [k, s] = sol.grid.locate(t);
  if (s == 0.0) return {sol.x_star[k], sol.u_star[k]};
  if (s == 1.0) return {sol.x_star[k + 1], sol.u_star[k + 1]};
  const double h = sol.grid.dt();
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  PursuerVector x = h00 * sol.x_star[k] + (h10 * h) * sol.xdot_star[k] + h01 * sol.x_star[k + 1] +
                    (h11 * h) * sol.xdot_star[k + 1];
  return {x, (1.0 - s) * sol.u_star[k] + s * sol.u_star[k + 1]};
}

void refresh_node_derivatives(ReferenceSolution& sol, const VehicleParams& params,
                              const AtmosphereParams& atmos) {
  sol.xdot_star.clear();
  sol.xdot_star.reserve(sol.x_star.size());
  for (std::size_t k = 0; k < sol.x_star.size(); ++k) {
    sol.xdot_star.push_back(pursuer_deriv(sol.x_star[k], sol.u_star[k], params, atmos));
  }
}

}  // namespace hyperpursuit
