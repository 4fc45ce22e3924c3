#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "hyperpursuit/evader.hpp"
#include "hyperpursuit/reference.hpp"
#include "hyperpursuit/vehicle.hpp"

namespace hyperpursuit::testing {

inline PursuerState table2_pursuer() { return {-50000.0, 20000.0, 4000.0, -0.4}; }
inline TargetState table2_target() { return {0.0, 0.0}; }

// Reference for the default scenario, solved once per test binary.
inline const ReferenceSolution& default_reference() {
  static const ReferenceSolution sol = [] {
    const PursuerState p = table2_pursuer();
    const TargetState t = table2_target();
    return solve_min_time_intercept(p, t, oles(p.position(), t), VehicleParams{},
                                    AtmosphereParams{}, GameConfig{}, TranscriptionConfig{});
  }();
  return sol;
}

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("hyperpursuit_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace hyperpursuit::testing
