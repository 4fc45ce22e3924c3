#pragma once

#include <memory>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace hyperpursuit::nlp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Smooth NLP
//
//   minimize f(z)  subject to  c(z) = 0,  lower <= z <= upper.
//
// Infinite bound entries mark free sides. Derivative hooks default to central
// finite differences of the next-lower level, so a problem only has to supply
// f and c; overriding them with analytic forms speeds up and sharpens solves.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual Eigen::Index num_variables() const = 0;
  virtual Eigen::Index num_constraints() const = 0;

  virtual VectorXd lower_bounds() const;
  virtual VectorXd upper_bounds() const;

  virtual double objective(const VectorXd& z) const = 0;
  virtual VectorXd constraints(const VectorXd& z) const = 0;

  virtual VectorXd objective_gradient(const VectorXd& z) const;
  virtual MatrixXd constraint_jacobian(const VectorXd& z) const;

  // Hessian of obj_factor * f(z) + lambda^T c(z).
  virtual MatrixXd lagrangian_hessian(const VectorXd& z, double obj_factor,
                                      const VectorXd& lambda) const;

 protected:
  // Relative step for the default finite-difference hooks.
  double fd_step_ = 1e-6;
};

struct Options {
  double tol = 1e-9;              // scaled KKT error
  double constraint_tol = 1e-9;  // max |c_i| at termination
  double acceptable_tol = 1e-6;  // accepted when progress stalls below this error
  int max_iterations = 300;
  double mu_init = 0.1;
};

enum class Status {
  Converged,
  Acceptable,
  MaxIterations,
  LineSearchFailed,
  NumericalFailure,
};

std::string to_string(Status status);

struct Result {
  VectorXd z;
  VectorXd lambda;
  Status status = Status::NumericalFailure;
  int iterations = 0;
  double objective = 0.0;
  double constraint_violation = 0.0;  // max |c_i|
  double kkt_error = 0.0;

  bool ok() const { return status == Status::Converged || status == Status::Acceptable; }
};

class Solver {
 public:
  virtual ~Solver() = default;
  virtual std::string name() const = 0;
  virtual Result solve(const Problem& problem, const VectorXd& z0) const = 0;
};

// Primal-dual interior-point method with a log barrier on the simple bounds.
// Steps come from the null-space form of the KKT system, which also exposes
// the reduced Hessian for inertia correction; globalization is an l1-merit
// backtracking line search with one second-order correction per iteration.
// Requires the constraint Jacobian to have full row rank.
class InteriorPointSolver final : public Solver {
 public:
  explicit InteriorPointSolver(Options options = {}) : options_(options) {}

  std::string name() const override { return "interior-point"; }
  Result solve(const Problem& problem, const VectorXd& z0) const override;

  const Options& options() const noexcept { return options_; }

 private:
  Options options_;
};

// Backend lookup by name; currently "interior-point".
std::unique_ptr<Solver> make_solver(std::string_view name, Options options = {});

}  // namespace hyperpursuit::nlp
