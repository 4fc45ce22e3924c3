#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hyperpursuit/engagement.hpp"
#include "hyperpursuit/linearize.hpp"
#include "hyperpursuit/lqdg.hpp"
#include "hyperpursuit/reference.hpp"

namespace hyperpursuit {

inline constexpr int kArtifactSchemaVersion = 1;

// Shortest decimal text that parses back to the same double ("nan"/"inf"
// for non-finite values). Locale independent.
std::string format_number(double v);

// Reference solution as a versioned JSON document. The hash identifies the
// configuration that produced it.
std::string reference_to_json(const ReferenceSolution& sol, const std::string& reference_hash);

struct LoadedReference {
  ReferenceSolution solution;
  std::string reference_hash;
};

// Inverse of reference_to_json; bit-exact on every stored double.
LoadedReference reference_from_json(std::string_view text);

// One row per collocation node: pursuer and target states plus alpha.
std::string reference_to_csv(const ReferenceSolution& sol);

// One row per simulation node: t, pursuer state, target state, alpha, u_T, nu_P.
std::string engagement_to_csv(const EngagementResult& result);

struct SummaryContext {
  std::string config_hash;
  std::string reference_hash;
  double t_f_star = 0.0;
  double dt = 0.0;
};

std::string engagement_summary_json(const EngagementResult& result, const Weights& w,
                                    const SummaryContext& ctx);

// Run-level table over several engagements (one row each).
std::string run_summary_json(const std::vector<EngagementResult>& results, const Weights& w,
                             const SummaryContext& ctx);

// Node-wise A, B, a_joint diagonal blocks and d_joint for offline inspection.
std::string ltv_to_json(const LtvSchedule& ltv);

// t, diag(P), pursuer gain -B^T P, target gain D^T P / w3, one row per node.
std::string riccati_to_csv(const RiccatiSchedule& ric, const LtvSchedule& ltv, double w3);

std::string sweep_to_csv(const std::vector<SweepEntry>& entries);
std::string sweep_to_json(const std::vector<SweepEntry>& entries, const SummaryContext& ctx);

// Writes bytes verbatim. Refuses to replace an existing file unless
// overwrite is set (ValidationError). Parent directories are created.
void write_text_file(const std::filesystem::path& path, std::string_view content, bool overwrite);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace hyperpursuit
