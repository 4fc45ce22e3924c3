#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hyperpursuit/evader.hpp"
#include "hyperpursuit/lqdg.hpp"
#include "hyperpursuit/reference.hpp"
#include "hyperpursuit/vehicle.hpp"

namespace hyperpursuit {

struct InitialConditions {
  PursuerState pursuer{-50000.0, 20000.0, 4000.0, -0.4};
  TargetState target{0.0, 0.0};

  bool operator==(const InitialConditions& o) const {
    return pursuer.vec() == o.pursuer.vec() && target.vec() == o.target.vec();
  }
};

struct SimConfig {
  double dt = 0.005;  // s
  std::vector<EvasionKind> strategies{EvasionKind::Optimal, EvasionKind::Opposite,
                                      EvasionKind::Random};
  std::vector<std::uint64_t> seeds{0};
  double hold_period = 1.0;  // s, E3 decision period

  bool operator==(const SimConfig&) const = default;
};

// One complete experiment description. Every section and key is optional in
// the file; omitted values take the defaults below.
struct ScenarioConfig {
  VehicleParams vehicle;
  AtmosphereParams atmosphere;
  GameConfig game;
  InitialConditions initial;
  Weights weights;
  TranscriptionConfig transcription;
  SimConfig sim;
  std::string output_dir = "out";

  void validate() const;
  bool operator==(const ScenarioConfig&) const = default;
};

inline constexpr int kConfigSchemaVersion = 1;

// Parses and validates JSON text. Unknown keys and malformed values raise
// ValidationError; syntax errors raise ParseError with 1-based line/column.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

// Canonical JSON rendering; parse_config(write_config(c)) == c.
std::string write_config(const ScenarioConfig& config);

// 16-hex-digit FNV-1a digests of the canonical rendering. reference_hash
// covers only what the reference solve depends on (vehicle, atmosphere,
// game, initial, transcription); config_hash covers everything.
std::string reference_hash(const ScenarioConfig& config);
std::string config_hash(const ScenarioConfig& config);

}  // namespace hyperpursuit
