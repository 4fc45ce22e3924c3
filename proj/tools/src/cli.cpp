#include "hyperpursuit/app/cli.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <numeric>
#include <system_error>

#include <CLI11.hpp>

#include "hyperpursuit/artifacts.hpp"
#include "hyperpursuit/engagement.hpp"
#include "hyperpursuit/errors.hpp"
#include "hyperpursuit/evader.hpp"
#include "hyperpursuit/linearize.hpp"
#include "hyperpursuit/lqdg.hpp"
#include "hyperpursuit/reference.hpp"

namespace hyperpursuit::app {
namespace fs = std::filesystem;

namespace {

std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

fs::path out_dir(const ScenarioConfig& c) { return fs::path(c.output_dir); }

ReferenceSolution solve_reference(const ScenarioConfig& c) {
  const double u_t_star = oles(c.initial.pursuer.position(), c.initial.target);
  return solve_min_time_intercept(c.initial.pursuer, c.initial.target, u_t_star, c.vehicle,
                                  c.atmosphere, c.game, c.transcription);
}

void print_report(const ReferenceSolution& sol, std::ostream& out) {
  const SolverReport& r = sol.report;
  out << "t_f* = " << fixed(sol.t_f_star, 4) << " s\n"
      << "u_T* = " << fixed(sol.u_t_star, 0) << "\n"
      << "solver: " << r.backend << ", " << r.status << ", " << r.iterations << " iterations\n"
      << "  kkt error " << format_number(r.kkt_error) << ", max defect "
      << format_number(r.max_defect) << ", terminal residual "
      << format_number(r.terminal_residual) << " m\n";
}

void persist_reference(const ScenarioConfig& c, const ReferenceSolution& sol, bool overwrite,
                       std::ostream& out) {
  const fs::path dir = out_dir(c);
  // Check both targets before writing either so a refusal leaves no partial output.
  for (const char* name : {"reference.json", "reference.csv"}) {
    if (!overwrite && fs::exists(dir / name)) {
      throw ValidationError("refusing to overwrite existing '" + (dir / name).string() +
                            "' (pass --overwrite to replace it)");
    }
  }
  write_text_file(dir / "reference.json", reference_to_json(sol, reference_hash(c)), overwrite);
  write_text_file(dir / "reference.csv", reference_to_csv(sol), overwrite);
  out << "wrote " << (dir / "reference.json").string() << "\n";
}

// Loads or solves the reference, enforcing that it matches the config.
ReferenceSolution obtain_reference(const ScenarioConfig& c,
                                   const std::optional<fs::path>& path, bool solve, bool force,
                                   bool overwrite, std::ostream& out) {
  if (solve) {
    ReferenceSolution sol = solve_reference(c);
    print_report(sol, out);
    persist_reference(c, sol, overwrite, out);
    return sol;
  }
  const fs::path file = path ? *path : out_dir(c) / "reference.json";
  if (!fs::exists(file)) {
    throw ValidationError("no reference solution at '" + file.string() +
                          "'; run 'solve' first or pass --solve");
  }
  LoadedReference loaded = reference_from_json(read_text_file(file));
  const std::string expected = reference_hash(c);
  if (loaded.reference_hash != expected) {
    if (!force) {
      throw StaleArtifactError("reference '" + file.string() + "' was produced by config " +
                               loaded.reference_hash + " but the current config hashes to " +
                               expected + "; re-run 'solve' or pass --force");
    }
    out << "warning: using stale reference (hash " << loaded.reference_hash << ")\n";
  }
  if (loaded.solution.v_t != c.game.v_t && !force) {
    throw StaleArtifactError("reference target speed differs from the config");
  }
  return std::move(loaded.solution);
}

struct Schedules {
  LtvSchedule ltv;
  RiccatiSchedule ric;
};

Schedules synthesize(const ScenarioConfig& c, const ReferenceSolution& sol) {
  const TimeGrid grid = TimeGrid::with_max_step(0.0, sol.t_f_star, c.sim.dt);
  Schedules s{build_ltv(sol, c.vehicle, c.atmosphere, c.game, grid), {}};
  s.ric = solve_mrde(s.ltv, build_Q(c.weights), c.weights);
  return s;
}

SummaryContext context_for(const ScenarioConfig& c, const ReferenceSolution& sol) {
  return {config_hash(c), reference_hash(c), sol.t_f_star, c.sim.dt};
}

std::vector<std::uint64_t> seed_range(std::uint64_t start, std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  std::iota(seeds.begin(), seeds.end(), start);
  return seeds;
}

}  // namespace

int report_current_exception(std::ostream& err) {
  try {
    throw;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n"
        << "  status " << e.report().status << " after " << e.report().iterations
        << " iterations\n";
    return kSolver;
  } catch (const ConjugatePointError& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeDomain;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeDomain;
  } catch (const UndefinedStrategyError& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeDomain;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeDomain;
  } catch (const std::system_error& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kFailure;
  }
}

int cmd_solve(const ScenarioConfig& config, const SolveOptions& options, std::ostream& out) {
  const ReferenceSolution sol = solve_reference(config);
  print_report(sol, out);
  persist_reference(config, sol, options.overwrite, out);
  return kSuccess;
}

int cmd_run(const ScenarioConfig& config, const RunOptions& options, std::ostream& out) {
  const ReferenceSolution sol =
      obtain_reference(config, options.reference, options.solve, options.force, options.overwrite, out);
  const Schedules sched = synthesize(config, sol);
  const SummaryContext ctx = context_for(config, sol);
  const fs::path dir = out_dir(config);

  if (options.dump_schedules) {
    write_text_file(dir / "ltv.json", ltv_to_json(sched.ltv), options.overwrite);
    write_text_file(dir / "riccati.csv", riccati_to_csv(sched.ric, sched.ltv, config.weights.w3),
                    options.overwrite);
  }

  EngagementOptions eo;
  eo.dt = config.sim.dt;
  eo.feedback = !options.open_loop;

  std::vector<EngagementResult> results;
  for (EvasionKind kind : config.sim.strategies) {
    const std::vector<std::uint64_t> seeds =
        kind == EvasionKind::Random ? config.sim.seeds : std::vector<std::uint64_t>{0};
    for (std::uint64_t seed : seeds) {
      const EvasionStrategy strategy{kind, config.sim.hold_period, seed};
      results.push_back(
          run_engagement(sol, sched.ltv, sched.ric, strategy, config.vehicle, config.atmosphere,
                         config.game, eo));
    }
  }

  out << "strategy  seed  miss_distance_m  min_separation_m\n";
  for (const EngagementResult& r : results) {
    const bool random = r.strategy.kind == EvasionKind::Random;
    std::string stem = "engagement_" + to_string(r.strategy.kind);
    if (random) stem += "_seed" + std::to_string(r.strategy.seed);
    write_text_file(dir / (stem + ".csv"), engagement_to_csv(r), options.overwrite);
    write_text_file(dir / (stem + ".json"), engagement_summary_json(r, config.weights, ctx),
                    options.overwrite);
    char line[128];
    std::snprintf(line, sizeof line, "%-8s  %4s  %15s  %16s\n", to_string(r.strategy.kind).c_str(),
                  random ? std::to_string(r.strategy.seed).c_str() : "-",
                  fixed(r.miss_distance, 4).c_str(), fixed(r.min_separation, 4).c_str());
    out << line;
  }
  write_text_file(dir / "summary.json", run_summary_json(results, config.weights, ctx),
                  options.overwrite);
  out << "wrote " << (dir / "summary.json").string() << "\n";
  return kSuccess;
}

int cmd_sweep(const ScenarioConfig& config, const SweepOptions& options, std::ostream& out) {
  if (options.count == 0) throw ValidationError("sweep count must be positive");
  const ReferenceSolution sol =
      obtain_reference(config, options.reference, options.solve, options.force, options.overwrite, out);
  const Schedules sched = synthesize(config, sol);
  const std::vector<std::uint64_t> seeds = seed_range(options.seed_start, options.count);

  EngagementOptions eo;
  eo.dt = config.sim.dt;
  const EvasionStrategy base{EvasionKind::Random, config.sim.hold_period, 0};
  const auto entries = sweep_random_evasion(sol, sched.ltv, sched.ric, base, seeds, config.vehicle,
                                            config.atmosphere, config.game, eo, options.threads);

  const fs::path dir = out_dir(config);
  const SummaryContext ctx = context_for(config, sol);
  write_text_file(dir / "sweep.csv", sweep_to_csv(entries), options.overwrite);
  write_text_file(dir / "sweep.json", sweep_to_json(entries, ctx), options.overwrite);

  std::size_t stalls = 0;
  for (const auto& e : entries) stalls += e.stalled;
  out << "E3 sweep: " << entries.size() << " seeds from " << options.seed_start << "\n"
      << "median miss distance " << fixed(median_miss(entries), 4) << " m\n"
      << "stalls " << stalls << "\n"
      << "wrote " << (dir / "sweep.json").string() << "\n";
  return kSuccess;
}

int cmd_validate(const ScenarioConfig& config, const ValidateOptions& options, std::ostream& out) {
  const ReferenceSolution sol = options.reference
                                    ? obtain_reference(config, options.reference, false, false,
                                                       false, out)
                                    : solve_reference(config);
  const auto checks = run_validation_suite(sol, config.vehicle, config.atmosphere, config.game,
                                           config.weights, options.checks);
  bool ok = true;
  for (const CheckResult& c : checks) {
    const char* tag = !c.passed ? "FAIL " : (c.expected_failure ? "XFAIL" : "PASS ");
    out << tag << " " << c.name << ": " << c.detail << "\n";
    ok = ok && c.passed;
  }
  out << (ok ? "all checks passed" : "some checks failed") << "\n";
  return ok ? kSuccess : kValidation;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pursuit-evasion guidance: reference solve, LQDG synthesis, engagement runs"};
  app.require_subcommand(1);

  struct Common {
    std::optional<std::string> scenario;
    std::optional<std::string> out;
    std::optional<double> w1, w2, w3, dt, hold_period;
    std::optional<std::vector<std::string>> strategies;
    std::optional<std::vector<std::uint64_t>> seeds;
  } common;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("-s,--scenario", common.scenario, "Scenario JSON file (defaults if omitted)");
    sub->add_option("-o,--out", common.out, "Output directory (overrides the scenario)");
    sub->add_option("--w1", common.w1, "Terminal miss weight");
    sub->add_option("--w2", common.w2, "Altitude share of the terminal weight");
    sub->add_option("--w3", common.w3, "Target input penalty");
    sub->add_option("--dt", common.dt, "Simulation and guidance step [s]");
    sub->add_option("--hold-period", common.hold_period, "E3 decision period [s]");
  };

  SolveOptions solve_opts;
  RunOptions run_opts;
  SweepOptions sweep_opts;
  ValidateOptions validate_opts;
  std::optional<std::string> run_ref, sweep_ref, validate_ref;

  CLI::App* solve = app.add_subcommand("solve", "Solve the open-loop minimum-time reference");
  add_common(solve);
  solve->add_flag("--overwrite", solve_opts.overwrite, "Replace existing output files");

  CLI::App* run = app.add_subcommand("run", "Run closed-loop engagements");
  add_common(run);
  run->add_option("--strategies", common.strategies, "Evasion strategies (E1,E2,E3)")->delimiter(',');
  run->add_option("--seed,--seeds", common.seeds, "Seeds for E3")->delimiter(',');
  run->add_option("--reference", run_ref, "Reference solution JSON");
  run->add_flag("--solve", run_opts.solve, "Solve the reference first");
  run->add_flag("--force", run_opts.force, "Accept a reference from a different config");
  run->add_flag("--overwrite", run_opts.overwrite, "Replace existing output files");
  run->add_flag("--open-loop", run_opts.open_loop, "Disable the feedback layer");
  run->add_flag("--dump-schedules", run_opts.dump_schedules, "Also write ltv.json and riccati.csv");

  CLI::App* sweep = app.add_subcommand("sweep", "E3 robustness sweep over many seeds");
  add_common(sweep);
  sweep->add_option("--seed-start", sweep_opts.seed_start, "First seed");
  sweep->add_option("--count", sweep_opts.count, "Number of seeds");
  sweep->add_option("--threads", sweep_opts.threads, "Worker threads (0 = all cores)");
  sweep->add_option("--reference", sweep_ref, "Reference solution JSON");
  sweep->add_flag("--solve", sweep_opts.solve, "Solve the reference first");
  sweep->add_flag("--force", sweep_opts.force, "Accept a reference from a different config");
  sweep->add_flag("--overwrite", sweep_opts.overwrite, "Replace existing output files");

  CLI::App* validate = app.add_subcommand("validate", "Run the numerical self-checks");
  add_common(validate);
  validate->add_option("--reference", validate_ref, "Reference solution JSON (solved if omitted)");
  validate->add_option("--perturb-jacobian", validate_opts.checks.a_perturbation,
                       "Test hook: offset added to one analytic A entry");
  validate->add_option("--samples", validate_opts.checks.saddle_samples, "Saddle-check samples");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kValidation;
  }

  try {
    ScenarioConfig config = common.scenario ? load_config(*common.scenario) : ScenarioConfig{};
    if (common.out) config.output_dir = *common.out;
    if (common.w1) config.weights.w1 = *common.w1;
    if (common.w2) config.weights.w2 = *common.w2;
    if (common.w3) config.weights.w3 = *common.w3;
    if (common.dt) config.sim.dt = *common.dt;
    if (common.hold_period) config.sim.hold_period = *common.hold_period;
    if (common.strategies) {
      config.sim.strategies.clear();
      for (const auto& s : *common.strategies) config.sim.strategies.push_back(parse_evasion_kind(s));
    }
    if (common.seeds) config.sim.seeds = *common.seeds;
    config.validate();

    if (*solve) return cmd_solve(config, solve_opts, out);
    if (*run) {
      if (run_ref) run_opts.reference = *run_ref;
      return cmd_run(config, run_opts, out);
    }
    if (*sweep) {
      if (sweep_ref) sweep_opts.reference = *sweep_ref;
      return cmd_sweep(config, sweep_opts, out);
    }
    if (validate_ref) validate_opts.reference = *validate_ref;
    return cmd_validate(config, validate_opts, out);
  } catch (...) {
    return report_current_exception(err);
  }
}

}  // namespace hyperpursuit::app
