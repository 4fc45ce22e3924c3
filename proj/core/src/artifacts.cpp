#include "hyperpursuit/artifacts.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "hyperpursuit/errors.hpp"

namespace hyperpursuit {
namespace {

using nlohmann::json;

json header(const std::string& kind) {
  return {{"schema_version", kArtifactSchemaVersion}, {"kind", kind}};
}

template <typename Vec>
json column(const std::vector<Vec>& rows, int i) {
  json out = json::array();
  for (const auto& r : rows) out.push_back(r(i));
  return out;
}

const json& require(const json& node, const char* key) {
  if (!node.is_object() || !node.contains(key)) {
    throw ValidationError(std::string("reference artifact is missing '") + key + "'");
  }
  return node.at(key);
}

std::vector<double> doubles(const json& node, const char* key, std::size_t n) {
  const json& arr = require(node, key);
  if (!arr.is_array() || arr.size() != n) {
    throw ValidationError(std::string("reference artifact field '") + key + "' has the wrong length");
  }
  std::vector<double> out;
  out.reserve(n);
  for (const json& v : arr) {
    if (!v.is_number()) throw ValidationError(std::string("non-numeric entry in '") + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::initializer_list<const char*> columns) {
    bool first = true;
    for (const char* c : columns) {
      if (!first) out_ += ',';
      out_ += c;
      first = false;
    }
    out_ += '\n';
  }

  CsvWriter& cell(double v) {
    sep();
    out_ += format_number(v);
    return *this;
  }

  CsvWriter& cell(std::string_view s) {
    sep();
    out_ += s;
    return *this;
  }

  void end_row() {
    out_ += '\n';
    fresh_ = true;
  }

  std::string str() && { return std::move(out_); }

 private:
  void sep() {
    if (!fresh_) out_ += ',';
    fresh_ = false;
  }

  std::string out_;
  bool fresh_ = true;
};

json context_json(const SummaryContext& ctx) {
  return {{"config_hash", ctx.config_hash},
          {"reference_hash", ctx.reference_hash},
          {"t_f_star_s", ctx.t_f_star},
          {"dt_s", ctx.dt}};
}

json engagement_row(const EngagementResult& r, const Weights& w) {
  json row = {{"strategy", to_string(r.strategy.kind)},
              {"feedback", r.feedback},
              {"miss_distance_m", r.miss_distance},
              {"min_separation_m", r.min_separation},
              {"min_separation_time_s", r.min_separation_time},
              {"payoff", auxiliary_payoff(r, w)},
              {"nodes", r.grid.size()}};
  if (r.strategy.kind == EvasionKind::Random) {
    row["seed"] = r.strategy.seed;
    row["hold_period_s"] = r.strategy.hold_period;
  }
  return row;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string reference_to_json(const ReferenceSolution& sol, const std::string& reference_hash) {
  json j = header("reference_solution");
  j["reference_hash"] = reference_hash;
  j["t_f_star_s"] = sol.t_f_star;
  j["u_t_star"] = sol.u_t_star;
  j["v_t_mps"] = sol.v_t;
  j["target0"] = {{"x", sol.target0.x}, {"h", sol.target0.h}};
  j["n_nodes"] = sol.grid.size();
  j["nodes"] = {
      {"x", column(sol.x_star, 0)},          {"h", column(sol.x_star, 1)},
      {"v", column(sol.x_star, 2)},          {"gamma", column(sol.x_star, 3)},
      {"alpha", sol.u_star},                 {"xdot", column(sol.xdot_star, 0)},
      {"hdot", column(sol.xdot_star, 1)},    {"vdot", column(sol.xdot_star, 2)},
      {"gammadot", column(sol.xdot_star, 3)}, {"target_x", column(sol.xt_star, 0)},
      {"target_h", column(sol.xt_star, 1)}};
  j["report"] = {{"backend", sol.report.backend},
                 {"status", sol.report.status},
                 {"iterations", sol.report.iterations},
                 {"kkt_error", sol.report.kkt_error},
                 {"max_defect", sol.report.max_defect},
                 {"terminal_residual_m", sol.report.terminal_residual}};
  return j.dump(1) + "\n";
}

LoadedReference reference_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("reference artifact is not valid JSON: ") + e.what());
  }
  if (require(j, "kind") != "reference_solution") {
    throw ValidationError("artifact is not a reference solution");
  }
  if (require(j, "schema_version") != kArtifactSchemaVersion) {
    throw ValidationError("unsupported reference artifact schema_version");
  }

  LoadedReference out;
  out.reference_hash = require(j, "reference_hash").get<std::string>();
  ReferenceSolution& sol = out.solution;
  sol.t_f_star = require(j, "t_f_star_s").get<double>();
  sol.u_t_star = require(j, "u_t_star").get<double>();
  sol.v_t = require(j, "v_t_mps").get<double>();
  const json& t0 = require(j, "target0");
  sol.target0 = {require(t0, "x").get<double>(), require(t0, "h").get<double>()};
  const auto n = require(j, "n_nodes").get<std::size_t>();
  sol.grid = TimeGrid(0.0, sol.t_f_star, n);

  const json& nodes = require(j, "nodes");
  const auto x = doubles(nodes, "x", n), h = doubles(nodes, "h", n), v = doubles(nodes, "v", n),
             g = doubles(nodes, "gamma", n);
  const auto xd = doubles(nodes, "xdot", n), hd = doubles(nodes, "hdot", n),
             vd = doubles(nodes, "vdot", n), gd = doubles(nodes, "gammadot", n);
  const auto tx = doubles(nodes, "target_x", n), th = doubles(nodes, "target_h", n);
  sol.u_star = doubles(nodes, "alpha", n);
  for (std::size_t k = 0; k < n; ++k) {
    sol.x_star.emplace_back(x[k], h[k], v[k], g[k]);
    sol.xdot_star.emplace_back(xd[k], hd[k], vd[k], gd[k]);
    sol.xt_star.emplace_back(tx[k], th[k]);
  }

  const json& rep = require(j, "report");
  sol.report.backend = require(rep, "backend").get<std::string>();
  sol.report.status = require(rep, "status").get<std::string>();
  sol.report.iterations = require(rep, "iterations").get<int>();
  sol.report.kkt_error = require(rep, "kkt_error").get<double>();
  sol.report.max_defect = require(rep, "max_defect").get<double>();
  sol.report.terminal_residual = require(rep, "terminal_residual_m").get<double>();
  return out;
}

std::string reference_to_csv(const ReferenceSolution& sol) {
  CsvWriter csv{"t_s", "x_p_m", "h_p_m", "v_p_mps", "gamma_p_rad", "alpha_rad", "x_t_m", "h_t_m"};
  for (std::size_t k = 0; k < sol.grid.size(); ++k) {
    const auto& s = sol.x_star[k];
    csv.cell(sol.grid.time(k)).cell(s(0)).cell(s(1)).cell(s(2)).cell(s(3)).cell(sol.u_star[k]);
    csv.cell(sol.xt_star[k](0)).cell(sol.xt_star[k](1));
    csv.end_row();
  }
  return std::move(csv).str();
}

std::string engagement_to_csv(const EngagementResult& r) {
  CsvWriter csv{"t_s",   "x_p_m",     "h_p_m", "v_p_mps",  "gamma_p_rad",
                "x_t_m", "h_t_m",     "alpha_rad", "u_t", "nu_p_rad"};
  for (std::size_t k = 0; k < r.grid.size(); ++k) {
    const auto& p = r.pursuer[k];
    csv.cell(r.grid.time(k)).cell(p(0)).cell(p(1)).cell(p(2)).cell(p(3));
    csv.cell(r.target[k](0)).cell(r.target[k](1));
    csv.cell(r.alpha[k]).cell(r.u_t[k]).cell(r.nu_p[k]);
    csv.end_row();
  }
  return std::move(csv).str();
}

std::string engagement_summary_json(const EngagementResult& result, const Weights& w,
                                    const SummaryContext& ctx) {
  json j = header("engagement_summary");
  j.update(context_json(ctx));
  j.update(engagement_row(result, w));
  return j.dump(2) + "\n";
}

std::string run_summary_json(const std::vector<EngagementResult>& results, const Weights& w,
                             const SummaryContext& ctx) {
  json j = header("run_summary");
  j.update(context_json(ctx));
  j["weights"] = {{"w1", w.w1}, {"w2", w.w2}, {"w3", w.w3}};
  json rows = json::array();
  for (const auto& r : results) rows.push_back(engagement_row(r, w));
  j["engagements"] = rows;
  return j.dump(2) + "\n";
}

std::string ltv_to_json(const LtvSchedule& ltv) {
  json j = header("ltv_schedule");
  j["t_f_s"] = ltv.grid.tf();
  j["n_nodes"] = ltv.grid.size();
  j["d_joint"] = std::vector<double>(ltv.d_joint.data(), ltv.d_joint.data() + 6);
  json a = json::array();
  json b = json::array();
  for (std::size_t k = 0; k < ltv.grid.size(); ++k) {
    json rows = json::array();
    for (int i = 0; i < 4; ++i) {
      rows.push_back({ltv.a_mats[k](i, 0), ltv.a_mats[k](i, 1), ltv.a_mats[k](i, 2), ltv.a_mats[k](i, 3)});
    }
    a.push_back(rows);
    b.push_back({ltv.b_mats[k](0), ltv.b_mats[k](1), ltv.b_mats[k](2), ltv.b_mats[k](3)});
  }
  j["a"] = a;
  j["b"] = b;
  return j.dump() + "\n";
}

std::string riccati_to_csv(const RiccatiSchedule& ric, const LtvSchedule& ltv, double w3) {
  CsvWriter csv{"t_s",    "p11",    "p22",    "p33",    "p44",    "p55",    "p66",
                "kp1",    "kp2",    "kp3",    "kp4",    "kp5",    "kp6",
                "kt1",    "kt2",    "kt3",    "kt4",    "kt5",    "kt6"};
  for (std::size_t k = 0; k < ric.grid.size(); ++k) {
    const double t = ric.grid.time(k);
    const Matrix6d& p = ric.p_mats[k];
    const Vector6d kp = -(ltv.b_joint_at(t).transpose() * p).transpose();
    const Vector6d kt = (ltv.d_joint.transpose() * p).transpose() / w3;
    csv.cell(t);
    for (int i = 0; i < 6; ++i) csv.cell(p(i, i));
    for (int i = 0; i < 6; ++i) csv.cell(kp(i));
    for (int i = 0; i < 6; ++i) csv.cell(kt(i));
    csv.end_row();
  }
  return std::move(csv).str();
}

std::string sweep_to_csv(const std::vector<SweepEntry>& entries) {
  CsvWriter csv{"seed", "stalled", "failure_time_s", "miss_distance_m", "min_separation_m"};
  for (const auto& e : entries) {
    csv.cell(std::to_string(e.seed)).cell(e.stalled ? "1" : "0");
    csv.cell(e.failure_time).cell(e.miss_distance).cell(e.min_separation);
    csv.end_row();
  }
  return std::move(csv).str();
}

std::string sweep_to_json(const std::vector<SweepEntry>& entries, const SummaryContext& ctx) {
  json j = header("sweep_summary");
  j.update(context_json(ctx));
  std::size_t stalls = 0;
  json rows = json::array();
  for (const auto& e : entries) {
    stalls += e.stalled;
    json row = {{"seed", e.seed}, {"stalled", e.stalled}};
    if (e.stalled) {
      row["failure_time_s"] = e.failure_time;
    } else {
      row["miss_distance_m"] = e.miss_distance;
      row["min_separation_m"] = e.min_separation;
    }
    rows.push_back(row);
  }
  j["runs"] = entries.size();
  j["stalls"] = stalls;
  const double median = median_miss(entries);
  j["median_miss_distance_m"] = std::isnan(median) ? json(nullptr) : json(median);
  j["entries"] = rows;
  return j.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, std::string_view content, bool overwrite) {
  namespace fs = std::filesystem;
  if (fs::exists(path) && !overwrite) {
    throw ValidationError("refusing to overwrite existing '" + path.string() +
                          "' (pass --overwrite to replace it)");
  }
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::system_error(errno, std::generic_category(), "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::system_error(errno, std::generic_category(), "cannot write " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace hyperpursuit
