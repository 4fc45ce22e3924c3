#include "hyperpursuit/nlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "hyperpursuit/errors.hpp"

namespace hyperpursuit::nlp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Interior-point constants, named after their usual symbols in the literature.
constexpr double kPushFraction = 1e-2;  // initial distance from the bounds
constexpr double kKappaEps = 10.0;      // barrier subproblem tolerance factor
constexpr double kKappaMu = 0.2;        // linear barrier decrease
constexpr double kThetaMu = 1.5;        // superlinear barrier decrease
constexpr double kKappaSigma = 1e10;    // bound-multiplier safeguard
constexpr double kArmijo = 1e-4;
constexpr double kScaleMax = 100.0;
constexpr double kHessianStep = 1e-5;

double max_abs(const VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

struct Bounds {
  VectorXd lo;
  VectorXd hi;

  bool has_lo(Eigen::Index i) const { return std::isfinite(lo(i)); }
  bool has_hi(Eigen::Index i) const { return std::isfinite(hi(i)); }
};

// Log-barrier objective; +inf outside the open box.
double barrier_value(const Problem& p, const Bounds& b, const VectorXd& z, double mu) {
  double value = p.objective(z);
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (b.has_lo(i)) {
      const double s = z(i) - b.lo(i);
      if (!(s > 0.0)) return kInf;
      value -= mu * std::log(s);
    }
    if (b.has_hi(i)) {
      const double s = b.hi(i) - z(i);
      if (!(s > 0.0)) return kInf;
      value -= mu * std::log(s);
    }
  }
  return value;
}

VectorXd push_inside(const VectorXd& z0, const Bounds& b) {
  VectorXd z = z0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const bool lo = b.has_lo(i);
    const bool hi = b.has_hi(i);
    if (lo && hi) {
      const double range = b.hi(i) - b.lo(i);
      const double pl = std::min(kPushFraction * std::max(1.0, std::abs(b.lo(i))), 0.5 * kPushFraction * range);
      const double pu = std::min(kPushFraction * std::max(1.0, std::abs(b.hi(i))), 0.5 * kPushFraction * range);
      z(i) = std::clamp(z(i), b.lo(i) + pl, b.hi(i) - pu);
    } else if (lo) {
      z(i) = std::max(z(i), b.lo(i) + kPushFraction * std::max(1.0, std::abs(b.lo(i))));
    } else if (hi) {
      z(i) = std::min(z(i), b.hi(i) - kPushFraction * std::max(1.0, std::abs(b.hi(i))));
    }
  }
  return z;
}

// Null-space factorization of the constraint Jacobian: J^T = [Y Z] [R; 0].
struct NullSpace {
  MatrixXd range;  // Y, n x m
  MatrixXd null;   // Z, n x (n - m)
  MatrixXd r;      // m x m upper triangular

  static std::optional<NullSpace> of(const MatrixXd& jac, Eigen::Index n) {
    const Eigen::Index m = jac.rows();
    NullSpace ns;
    if (m == 0) {
      ns.range = MatrixXd::Zero(n, 0);
      ns.null = MatrixXd::Identity(n, n);
      ns.r = MatrixXd::Zero(0, 0);
      return ns;
    }
    if (m > n) return std::nullopt;
    Eigen::HouseholderQR<MatrixXd> qr(jac.transpose());
    const MatrixXd q = qr.householderQ();
    ns.range = q.leftCols(m);
    ns.null = q.rightCols(n - m);
    ns.r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
    const VectorXd diag = ns.r.diagonal().cwiseAbs();
    if (!(diag.minCoeff() > 1e-13 * std::max(1.0, diag.maxCoeff()))) return std::nullopt;
    return ns;
  }

  // Minimum-norm y with J y = rhs.
  VectorXd min_norm(const VectorXd& rhs) const {
    if (rhs.size() == 0) return VectorXd::Zero(range.rows());
    const VectorXd w = r.transpose().triangularView<Eigen::Lower>().solve(rhs);
    return range * w;
  }

  // Least-squares multipliers: J^T lambda = rhs.
  VectorXd multipliers(const VectorXd& rhs) const {
    if (r.rows() == 0) return VectorXd::Zero(0);
    return r.triangularView<Eigen::Upper>().solve(range.transpose() * rhs);
  }
};

}  // namespace

VectorXd Problem::lower_bounds() const { return VectorXd::Constant(num_variables(), -kInf); }

VectorXd Problem::upper_bounds() const { return VectorXd::Constant(num_variables(), kInf); }

VectorXd Problem::objective_gradient(const VectorXd& z) const {
  VectorXd grad(z.size());
  VectorXd probe = z;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double h = fd_step_ * std::max(1.0, std::abs(z(i)));
    probe(i) = z(i) + h;
    const double fp = objective(probe);
    probe(i) = z(i) - h;
    const double fm = objective(probe);
    probe(i) = z(i);
    grad(i) = (fp - fm) / (2.0 * h);
  }
  return grad;
}

MatrixXd Problem::constraint_jacobian(const VectorXd& z) const {
  MatrixXd jac(num_constraints(), z.size());
  VectorXd probe = z;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double h = fd_step_ * std::max(1.0, std::abs(z(i)));
    probe(i) = z(i) + h;
    const VectorXd cp = constraints(probe);
    probe(i) = z(i) - h;
    const VectorXd cm = constraints(probe);
    probe(i) = z(i);
    jac.col(i) = (cp - cm) / (2.0 * h);
  }
  return jac;
}

MatrixXd Problem::lagrangian_hessian(const VectorXd& z, double obj_factor,
                                     const VectorXd& lambda) const {
  const auto gradient = [&](const VectorXd& x) {
    VectorXd g = obj_factor * objective_gradient(x);
    if (lambda.size() > 0) g += constraint_jacobian(x).transpose() * lambda;
    return g;
  };
  MatrixXd hess(z.size(), z.size());
  VectorXd probe = z;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double h = kHessianStep * std::max(1.0, std::abs(z(i)));
    probe(i) = z(i) + h;
    const VectorXd gp = gradient(probe);
    probe(i) = z(i) - h;
    const VectorXd gm = gradient(probe);
    probe(i) = z(i);
    hess.col(i) = (gp - gm) / (2.0 * h);
  }
  return 0.5 * (hess + hess.transpose());
}

std::string to_string(Status status) {
  switch (status) {
    case Status::Converged:
      return "converged";
    case Status::Acceptable:
      return "acceptable";
    case Status::MaxIterations:
      return "max-iterations";
    case Status::LineSearchFailed:
      return "line-search-failed";
    case Status::NumericalFailure:
      return "numerical-failure";
  }
  return "unknown";
}

Result InteriorPointSolver::solve(const Problem& problem, const VectorXd& z0) const {
  const Eigen::Index n = problem.num_variables();
  const Eigen::Index m = problem.num_constraints();
  if (z0.size() != n) throw ContractViolation("initial point has wrong dimension");

  const Bounds bounds{problem.lower_bounds(), problem.upper_bounds()};
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(bounds.lo(i) < bounds.hi(i))) {
      throw ContractViolation("NLP bounds require lower < upper for every variable");
    }
  }

  double mu = options_.mu_init;
  VectorXd z = push_inside(z0, bounds);
  VectorXd zl = VectorXd::Zero(n);
  VectorXd zu = VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (bounds.has_lo(i)) zl(i) = mu / (z(i) - bounds.lo(i));
    if (bounds.has_hi(i)) zu(i) = mu / (bounds.hi(i) - z(i));
  }

  VectorXd grad = problem.objective_gradient(z);
  VectorXd cons = problem.constraints(z);
  MatrixXd jac = problem.constraint_jacobian(z);

  VectorXd lambda = VectorXd::Zero(m);
  if (auto ns = NullSpace::of(jac, n); ns && m > 0) {
    lambda = -ns->multipliers(grad - zl + zu);
    if (max_abs(lambda) > 1e3) lambda.setZero();
  }

  Result result;
  double merit_penalty = 1.0;
  double last_regularization = 0.0;

  const auto kkt_error = [&](double target_mu) {
    const VectorXd dual = grad + jac.transpose() * lambda - zl + zu;
    double compl_err = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (bounds.has_lo(i)) compl_err = std::max(compl_err, std::abs((z(i) - bounds.lo(i)) * zl(i) - target_mu));
      if (bounds.has_hi(i)) compl_err = std::max(compl_err, std::abs((bounds.hi(i) - z(i)) * zu(i) - target_mu));
    }
    const double mult_sum = lambda.lpNorm<1>() + zl.lpNorm<1>() + zu.lpNorm<1>();
    const double sd = std::max(kScaleMax, mult_sum / static_cast<double>(std::max<Eigen::Index>(1, m + n))) / kScaleMax;
    const double sc = std::max(kScaleMax, (zl.lpNorm<1>() + zu.lpNorm<1>()) / static_cast<double>(n)) / kScaleMax;
    return std::max({max_abs(dual) / sd, max_abs(cons), compl_err / sc});
  };

  const auto finish = [&](Status status, int iterations) {
    result.z = z;
    result.lambda = lambda;
    result.status = status;
    result.iterations = iterations;
    result.objective = problem.objective(z);
    result.constraint_violation = max_abs(cons);
    result.kkt_error = kkt_error(0.0);
    return result;
  };

  for (int iter = 0; iter < options_.max_iterations; ++iter) {
    const double error = kkt_error(0.0);
    if (error <= options_.tol && max_abs(cons) <= options_.constraint_tol) {
      return finish(Status::Converged, iter);
    }
    while (mu > options_.tol / 10.0 && kkt_error(mu) <= kKappaEps * mu) {
      mu = std::max(options_.tol / 10.0, std::min(kKappaMu * mu, std::pow(mu, kThetaMu)));
    }

    const auto ns = NullSpace::of(jac, n);
    if (!ns) return finish(Status::NumericalFailure, iter);

    VectorXd sigma = VectorXd::Zero(n);
    VectorXd grad_barrier = grad;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (bounds.has_lo(i)) {
        const double s = z(i) - bounds.lo(i);
        sigma(i) += zl(i) / s;
        grad_barrier(i) -= mu / s;
      }
      if (bounds.has_hi(i)) {
        const double s = bounds.hi(i) - z(i);
        sigma(i) += zu(i) / s;
        grad_barrier(i) += mu / s;
      }
    }

    MatrixXd hess = problem.lagrangian_hessian(z, 1.0, lambda);
    hess.diagonal() += sigma;

    // Range-space component restores linearized feasibility.
    const VectorXd step_range = ns->min_norm(-cons);

    // Null-space component: reduced Hessian must be positive definite, so
    // regularize until its Cholesky factorization succeeds.
    const MatrixXd reduced = ns->null.transpose() * hess * ns->null;
    double regularization = 0.0;
    Eigen::LLT<MatrixXd> llt;
    const Eigen::Index dof = ns->null.cols();
    for (int attempt = 0;; ++attempt) {
      if (dof == 0) break;
      llt.compute(reduced + regularization * MatrixXd::Identity(dof, dof));
      if (llt.info() == Eigen::Success) break;
      if (attempt == 0) {
        regularization = last_regularization == 0.0 ? 1e-4 : std::max(1e-20, last_regularization / 3.0);
      } else {
        regularization *= (last_regularization == 0.0 ? 100.0 : 8.0);
      }
      if (regularization > 1e40) return finish(Status::NumericalFailure, iter);
    }
    if (regularization > 0.0) last_regularization = regularization;
    hess.diagonal().array() += regularization;

    VectorXd dz = step_range;
    if (dof > 0) {
      const VectorXd rhs = -ns->null.transpose() * (grad_barrier + hess * step_range);
      dz += ns->null * llt.solve(rhs);
    }
    const VectorXd lambda_plus = -ns->multipliers(hess * dz + grad_barrier);

    VectorXd dzl = VectorXd::Zero(n);
    VectorXd dzu = VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (bounds.has_lo(i)) {
        const double s = z(i) - bounds.lo(i);
        dzl(i) = mu / s - zl(i) - zl(i) / s * dz(i);
      }
      if (bounds.has_hi(i)) {
        const double s = bounds.hi(i) - z(i);
        dzu(i) = mu / s - zu(i) + zu(i) / s * dz(i);
      }
    }

    const double tau = std::max(0.99, 1.0 - mu);
    double alpha_primal = 1.0;
    double alpha_dual = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (bounds.has_lo(i) && dz(i) < 0.0) alpha_primal = std::min(alpha_primal, -tau * (z(i) - bounds.lo(i)) / dz(i));
      if (bounds.has_hi(i) && dz(i) > 0.0) alpha_primal = std::min(alpha_primal, tau * (bounds.hi(i) - z(i)) / dz(i));
      if (dzl(i) < 0.0) alpha_dual = std::min(alpha_dual, -tau * zl(i) / dzl(i));
      if (dzu(i) < 0.0) alpha_dual = std::min(alpha_dual, -tau * zu(i) / dzu(i));
    }

    // l1 merit with a penalty large enough for dz to be a descent direction.
    const double infeas = cons.lpNorm<1>();
    const double slope_obj = grad_barrier.dot(dz);
    if (infeas > 0.0) {
      const double curvature = std::max(0.0, dz.dot(hess * dz));
      merit_penalty = std::max(merit_penalty, (slope_obj + 0.5 * curvature) / (0.9 * infeas));
    }
    const double slope = slope_obj - merit_penalty * infeas;
    const auto merit = [&](const VectorXd& x, VectorXd* c_out) {
      const double b = barrier_value(problem, bounds, x, mu);
      if (!std::isfinite(b)) return kInf;
      VectorXd c = problem.constraints(x);
      const double value = b + merit_penalty * c.lpNorm<1>();
      if (c_out) *c_out = std::move(c);
      return value;
    };
    const double merit0 = merit(z, nullptr);

    const auto inside = [&](const VectorXd& x) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (bounds.has_lo(i) && x(i) - bounds.lo(i) < (1.0 - tau) * (z(i) - bounds.lo(i))) return false;
        if (bounds.has_hi(i) && bounds.hi(i) - x(i) < (1.0 - tau) * (bounds.hi(i) - z(i))) return false;
      }
      return true;
    };

    double alpha = alpha_primal;
    bool accepted = false;
    VectorXd z_next;
    for (int trial = 0; trial < 60; ++trial) {
      const VectorXd z_trial = z + alpha * dz;
      VectorXd c_trial;
      const double merit_trial = merit(z_trial, &c_trial);
      if (merit_trial <= merit0 + kArmijo * alpha * slope) {
        z_next = z_trial;
        accepted = true;
        break;
      }
      if (trial == 0 && std::isfinite(merit_trial) && m > 0) {
        // Second-order correction against the Maratos effect.
        const VectorXd z_soc = z_trial + ns->min_norm(-c_trial);
        if (inside(z_soc) && merit(z_soc, nullptr) <= merit0 + kArmijo * alpha * slope) {
          z_next = z_soc;
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
      if (alpha < 1e-14) break;
    }
    if (!accepted) {
      return finish(error <= options_.acceptable_tol ? Status::Acceptable : Status::LineSearchFailed, iter);
    }

    z = z_next;
    lambda += alpha * (lambda_plus - lambda);
    zl += alpha_dual * dzl;
    zu += alpha_dual * dzu;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (bounds.has_lo(i)) {
        const double s = z(i) - bounds.lo(i);
        zl(i) = std::clamp(zl(i), mu / (kKappaSigma * s), kKappaSigma * mu / s);
      }
      if (bounds.has_hi(i)) {
        const double s = bounds.hi(i) - z(i);
        zu(i) = std::clamp(zu(i), mu / (kKappaSigma * s), kKappaSigma * mu / s);
      }
    }

    grad = problem.objective_gradient(z);
    cons = problem.constraints(z);
    jac = problem.constraint_jacobian(z);
  }

  const bool acceptable = kkt_error(0.0) <= options_.acceptable_tol &&
                          max_abs(cons) <= std::sqrt(options_.constraint_tol);
  return finish(acceptable ? Status::Acceptable : Status::MaxIterations, options_.max_iterations);
}

std::unique_ptr<Solver> make_solver(std::string_view name, Options options) {
  if (name == "interior-point" || name == "ipm") {
    return std::make_unique<InteriorPointSolver>(options);
  }
  throw ContractViolation("unknown NLP backend '" + std::string(name) + "'");
}

}  // namespace hyperpursuit::nlp
