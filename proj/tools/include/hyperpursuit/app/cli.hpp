#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hyperpursuit/scenario.hpp"
#include "hyperpursuit/verification.hpp"

namespace hyperpursuit::app {

enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,  // unexpected internal error
  kValidation = 2,
  kSolver = 3,
  kRuntimeDomain = 4,
};

// Maps the exception currently being handled to an exit code and prints its
// message to err. Call from inside a catch block only.
int report_current_exception(std::ostream& err);

struct SolveOptions {
  bool overwrite = false;
};

struct RunOptions {
  std::optional<std::filesystem::path> reference;  // default: <out>/reference.json
  bool solve = false;      // solve the reference first instead of loading it
  bool force = false;      // accept a reference produced by another config
  bool overwrite = false;
  bool open_loop = false;  // replay the open-loop input without feedback
  bool dump_schedules = false;
};

struct SweepOptions {
  std::optional<std::filesystem::path> reference;
  bool solve = false;
  bool force = false;
  bool overwrite = false;
  std::uint64_t seed_start = 0;
  std::size_t count = 100;
  unsigned threads = 0;
};

struct ValidateOptions {
  std::optional<std::filesystem::path> reference;
  ValidationOptions checks;
};

// Each command writes human-readable progress to out and returns an exit
// code. Library errors propagate as exceptions.
int cmd_solve(const ScenarioConfig& config, const SolveOptions& options, std::ostream& out);
int cmd_run(const ScenarioConfig& config, const RunOptions& options, std::ostream& out);
int cmd_sweep(const ScenarioConfig& config, const SweepOptions& options, std::ostream& out);
int cmd_validate(const ScenarioConfig& config, const ValidateOptions& options, std::ostream& out);

// Full command-line entry point: parses argv, dispatches, maps errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyperpursuit::app
