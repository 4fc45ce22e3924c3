#include "hyperpursuit/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/LU>

#include "hyperpursuit/errors.hpp"
#include "hyperpursuit/integrate.hpp"

namespace hyperpursuit {
namespace {

std::string format(double v) {
  std::ostringstream out;
  out.precision(3);
  out << std::scientific << v;
  return out.str();
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

// A random smooth square-integrable signal: constant plus three sinusoids.
struct RandomSignal {
  double offset = 0.0;
  double amp[3]{};
  double omega[3]{};
  double phase[3]{};

  RandomSignal(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> freq(0.1, 3.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    offset = scale * unit(rng);
    for (int j = 0; j < 3; ++j) {
      amp[j] = scale * unit(rng);
      omega[j] = freq(rng);
      phase[j] = angle(rng);
    }
  }

  double operator()(double t) const {
    double s = offset;
    for (int j = 0; j < 3; ++j) s += amp[j] * std::sin(omega[j] * t + phase[j]);
    return s;
  }
};

}  // namespace

double scalar_riccati_closed_form(double a, double s, double q, double t, double tf) {
  if (q == 0.0) return 0.0;
  const double tau = tf - t;
  double y;
  if (a == 0.0) {
    y = 1.0 / q + s * tau;
  } else {
    const double ratio = s / (2.0 * a);
    y = ratio + (1.0 / q - ratio) * std::exp(-2.0 * a * tau);
  }
  return 1.0 / y;
}

std::vector<Eigen::MatrixXd> hamiltonian_riccati_sweep(const LtvSchedule& ltv, const Matrix6d& q,
                                                       double w3, int substeps) {
  if (substeps < 1) throw ContractViolation("substeps must be at least 1");
  using Stack = Eigen::Matrix<double, 12, 6>;
  const Eigen::Matrix<double, 6, 6> dd = ltv.d_joint * ltv.d_joint.transpose();
  const auto rhs = [&](double t, const Stack& z) -> Stack {
    const Matrix6d a = ltv.a_joint_at(t);
    const Vector6d b = ltv.b_joint_at(t);
    const Matrix6d s = b * b.transpose() - dd / w3;
    Stack out;
    out.topRows<6>() = a * z.topRows<6>() - s * z.bottomRows<6>();
    out.bottomRows<6>() = -a.transpose() * z.bottomRows<6>();
    return out;
  };

  const auto to_p = [](const Stack& z) -> Eigen::MatrixXd {
    const Matrix6d x = z.topRows<6>();
    const Matrix6d y = z.bottomRows<6>();
    return x.transpose().partialPivLu().solve(y.transpose()).transpose();
  };

  const TimeGrid& grid = ltv.grid;
  std::vector<Eigen::MatrixXd> out(grid.size());
  Stack z;
  z.topRows<6>().setIdentity();
  z.bottomRows<6>() = q;
  out.back() = to_p(z);
  for (std::size_t k = grid.size() - 1; k > 0; --k) {
    const double t1 = grid.time(k);
    const double h = (grid.time(k - 1) - t1) / substeps;
    for (int j = 0; j < substeps; ++j) {
      // Clamp stage times so roundoff never leaves the tabulated horizon.
      const double t = std::clamp(t1 + j * h, grid.t0(), grid.tf());
      z = rk4_step(
          [&](double tau, const Stack& s) {
            return rhs(std::clamp(tau, grid.t0(), grid.tf()), s);
          },
          z, t, h);
    }
    out[k - 1] = to_p(z);
  }
  return out;
}

JacobianComparison compare_jacobians(const ReferenceSolution& sol, const VehicleParams& params,
                                     const AtmosphereParams& atmos, const FiniteDiffSteps& steps,
                                     double a_perturbation) {
  JacobianComparison report;
  const auto consider = [&](double analytic, double fd, std::size_t node, int row, int col) {
    const double denom = std::max(std::abs(fd), 1e-12);
    const double err = std::abs(analytic - fd) / denom;
    if (err > report.max_rel_error) {
      report = {err, node, row, col};
    }
  };
  for (std::size_t k = 0; k < sol.x_star.size(); ++k) {
    const PursuerVector& x = sol.x_star[k];
    const double alpha = sol.u_star[k];
    Matrix4d a = jacobian_A(x, alpha, params, atmos);
    a(2, 1) += a_perturbation;
    const Vector4d b = jacobian_B(x, alpha, params, atmos);
    const auto [a_fd, b_fd] = finite_diff_jacobian(x, alpha, params, atmos, steps);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) consider(a(i, j), a_fd(i, j), k, i, j);
      consider(b(i), b_fd(i), k, i, 4);
    }
  }
  return report;
}

JointDeviation default_saddle_x0() {
  JointDeviation x0;
  x0 << 50.0, 0.0, -100.0, 80.0, 5.0, 0.005;
  return x0;
}

SaddleCheck check_saddle(const LtvSchedule& ltv, const RiccatiSchedule& ric, const Matrix6d& q,
                         const Weights& w, const JointDeviation& x0, std::size_t samples,
                         std::uint64_t seed) {
  const LinearPolicy pursuer_star = [&](double t, const JointDeviation& x) {
    return feedback_pursuer(t, x, ltv, ric);
  };
  const LinearPolicy target_star = [&](double t, const JointDeviation& x) {
    return feedback_target(t, x, ltv.d_joint, w.w3, ric);
  };

  SaddleCheck out;
  out.value = x0.dot(ric.at(ric.grid.t0()) * x0);
  out.saddle_payoff = simulate_linear_game(ltv, q, w, x0, pursuer_star, target_star).payoff;
  const double scale = std::abs(out.saddle_payoff);
  out.value_rel_error = std::abs(out.value - out.saddle_payoff) / scale;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> decade(0.0, 1.0);
  out.max_target_gain = -std::numeric_limits<double>::infinity();
  out.max_pursuer_gain = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < samples; ++k) {
    // Perturbation sizes spread over several decades around the optimal inputs.
    const RandomSignal target_noise(rng, std::pow(10.0, -4.0 + 4.0 * decade(rng)));
    const RandomSignal pursuer_noise(rng, std::pow(10.0, -5.0 + 4.0 * decade(rng)));

    const LinearPolicy target_k = [&](double t, const JointDeviation& x) {
      return target_star(t, x) + target_noise(t);
    };
    const LinearPolicy pursuer_k = [&](double t, const JointDeviation& x) {
      return pursuer_star(t, x) + pursuer_noise(t);
    };
    const double j_t = simulate_linear_game(ltv, q, w, x0, pursuer_star, target_k).payoff;
    const double j_p = simulate_linear_game(ltv, q, w, x0, pursuer_k, target_star).payoff;
    out.max_target_gain = std::max(out.max_target_gain, (j_t - out.saddle_payoff) / scale);
    out.max_pursuer_gain = std::max(out.max_pursuer_gain, (out.saddle_payoff - j_p) / scale);
  }
  return out;
}

std::vector<CheckResult> run_validation_suite(const ReferenceSolution& sol,
                                              const VehicleParams& params,
                                              const AtmosphereParams& atmos,
                                              const GameConfig& game, const Weights& w,
                                              const ValidationOptions& options) {
  std::vector<CheckResult> checks;

  {
    const JacobianComparison jc =
        compare_jacobians(sol, params, atmos, FiniteDiffSteps{}, options.a_perturbation);
    checks.push_back({"jacobian_fd", jc.max_rel_error <= 1e-6, false,
                      "max rel error " + format(jc.max_rel_error) + " at node " +
                          std::to_string(jc.worst_node) + " entry (" +
                          std::to_string(jc.worst_row + 1) + "," +
                          std::to_string(jc.worst_col + 1) + ")"});
  }

  {
    const double q = 1.0, s = 0.5, tf = 1.0;
    const TimeGrid grid(0.0, tf, 101);
    using Mat1 = Eigen::Matrix<double, 1, 1>;
    const auto p = integrate_riccati_backward<1>(
        grid, [](double) { return Mat1::Zero().eval(); },
        [&](double) { return Mat1::Constant(s).eval(); }, Mat1::Constant(q), 1e12);
    const double e0 = std::abs(p[0](0, 0) - scalar_riccati_closed_form(0.0, s, q, 0.0, tf));
    const double e5 = std::abs(p[50](0, 0) - scalar_riccati_closed_form(0.0, s, q, 0.5, tf));
    const double err = std::max(e0, e5);
    checks.push_back({"scalar_riccati", err <= 1e-8, false, "abs error " + format(err)});
  }

  const TimeGrid grid = TimeGrid::with_max_step(0.0, sol.t_f_star, options.linear_dt);
  const LtvSchedule ltv = build_ltv(sol, params, atmos, game, grid);
  const Matrix6d q = build_Q(w);

  {
    Weights lqr = w;
    lqr.w3 = 1e12;
    const RiccatiSchedule ric = solve_mrde(ltv, q, lqr);
    const auto oracle =
        hamiltonian_riccati_sweep(ltv, q, std::numeric_limits<double>::infinity());
    const double err = max_abs(ric.p_mats.front() - oracle.front()) / max_abs(oracle.front());
    checks.push_back({"lqr_degeneracy", err <= 1e-6, false, "rel error " + format(err)});
  }

  RiccatiSchedule ric;
  try {
    ric = solve_mrde(ltv, q, w);
  } catch (const ConjugatePointError& e) {
    // The configured w3 admits no saddle point on this horizon. That is the
    // correct outcome for such weights, but nothing below can run without P.
    checks.push_back({"riccati_solution", true, true,
                      std::string("expected failure for w3=") + format(w.w3) + ": " + e.what() +
                          "; gain checks skipped"});
    return checks;
  }

  {
    const bool exact_terminal = (ric.p_mats.back().array() == q.array()).all();
    double drift = 0.0;
    for (const Matrix6d& p : ric.p_mats) drift = std::max(drift, max_abs(p - p.transpose()));
    checks.push_back({"riccati_terminal_symmetry", exact_terminal && drift <= 1e-10, false,
                      std::string("terminal ") + (exact_terminal ? "exact" : "mismatch") +
                          ", symmetry drift " + format(drift)});
  }

  {
    const auto oracle = hamiltonian_riccati_sweep(ltv, q, w.w3);
    const double err = max_abs(ric.p_mats.front() - oracle.front()) / max_abs(oracle.front());
    checks.push_back({"game_riccati_crosscheck", err <= 1e-6, false, "rel error " + format(err)});
  }

  {
    const SaddleCheck sc = check_saddle(ltv, ric, q, w, default_saddle_x0(),
                                        options.saddle_samples, options.seed);
    const bool ok = sc.max_target_gain <= 1e-6 && sc.max_pursuer_gain <= 1e-6;
    checks.push_back({"saddle_property", ok, false,
                      "worst target gain " + format(sc.max_target_gain) +
                          ", worst pursuer gain " + format(sc.max_pursuer_gain)});
    checks.push_back({"value_consistency", sc.value_rel_error <= 1e-4, false,
                      "rel error " + format(sc.value_rel_error)});
  }

  {
    Weights small = w;
    small.w3 = options.small_w3;
    CheckResult r{"conjugate_point_small_w3", false, false, ""};
    try {
      solve_mrde(ltv, q, small);
      r.detail = "no finite escape detected for w3=" + format(small.w3);
    } catch (const ConjugatePointError& e) {
      r.passed = true;
      r.expected_failure = true;
      r.detail = std::string("expected failure: ") + e.what();
    }
    checks.push_back(r);
  }

  return checks;
}

}  // namespace hyperpursuit
