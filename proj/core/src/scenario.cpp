#include "hyperpursuit/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hyperpursuit/errors.hpp"

namespace hyperpursuit {
namespace {

using nlohmann::json;

// Reads the keys of one JSON object, rejecting anything it was not asked for.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail("", "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_.contains(key);
  }

  void number(const std::string& key, double& out) {
    if (!has(key)) return;
    const json& v = node_.at(key);
    if (!v.is_number()) fail(key, "expected a number");
    out = v.get<double>();
  }

  template <typename Int>
  void integer(const std::string& key, Int& out) {
    if (!has(key)) return;
    const json& v = node_.at(key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    if (v.is_number_unsigned()) {
      out = static_cast<Int>(v.get<std::uint64_t>());
    } else {
      const auto s = v.get<std::int64_t>();
      if constexpr (std::is_unsigned_v<Int>) {
        if (s < 0) fail(key, "must be nonnegative");
      }
      out = static_cast<Int>(s);
    }
  }

  void string(const std::string& key, std::string& out) {
    if (!has(key)) return;
    const json& v = node_.at(key);
    if (!v.is_string()) fail(key, "expected a string");
    out = v.get<std::string>();
  }

  void interval(const std::string& key, Interval& out) {
    if (!has(key)) return;
    const json& v = node_.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      fail(key, "expected [lo, hi]");
    }
    out = {v[0].get<double>(), v[1].get<double>()};
  }

  const json* child(const std::string& key) {
    if (!has(key)) return nullptr;
    return &node_.at(key);
  }

  std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.count(key)) throw ValidationError("unknown key '" + path(key) + "'");
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ValidationError((key.empty() ? (path_.empty() ? "<root>" : path_) : path(key)) + ": " + what);
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1;
  int column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  // nlohmann reports the position just past the offending character.
  return {line, std::max(1, column - 1)};
}

json to_json(const Interval& i) { return json::array({i.lo, i.hi}); }

json vehicle_json(const VehicleParams& v) {
  return {{"s_ref", v.s_ref}, {"mass", v.mass}, {"c_l1", v.c_l1},
          {"c_d0", v.c_d0},   {"c_d2", v.c_d2}, {"g", v.g}};
}

json atmosphere_json(const AtmosphereParams& a) {
  return {{"rho0", a.rho0}, {"scale_height", a.scale_height}};
}

json game_json(const GameConfig& g) {
  return {{"v_t", g.v_t},
          {"capture_radius", g.eps},
          {"alpha_bounds", to_json(g.alpha_bounds)},
          {"ut_bounds", to_json(g.ut_bounds)}};
}

json initial_json(const InitialConditions& ic) {
  return {{"pursuer",
           {{"x", ic.pursuer.x}, {"h", ic.pursuer.h}, {"v", ic.pursuer.v}, {"gamma", ic.pursuer.gamma}}},
          {"target", {{"x", ic.target.x}, {"h", ic.target.h}}}};
}

json transcription_json(const TranscriptionConfig& t) {
  return {{"n_nodes", t.n_nodes},
          {"defect_tol", t.defect_tol},
          {"capture_tol", t.capture_tol},
          {"tf_init", t.tf_init ? json(*t.tf_init) : json(nullptr)},
          {"max_iter", t.max_iter},
          {"backend", t.backend}};
}

json sim_json(const SimConfig& s) {
  json strategies = json::array();
  for (EvasionKind k : s.strategies) strategies.push_back(to_string(k));
  return {{"dt", s.dt}, {"strategies", strategies}, {"seeds", s.seeds}, {"hold_period", s.hold_period}};
}

json reference_part(const ScenarioConfig& c) {
  return {{"vehicle", vehicle_json(c.vehicle)},
          {"atmosphere", atmosphere_json(c.atmosphere)},
          {"game", game_json(c.game)},
          {"initial", initial_json(c.initial)},
          {"transcription", transcription_json(c.transcription)}};
}

json full_json(const ScenarioConfig& c) {
  json j = reference_part(c);
  j["schema_version"] = kConfigSchemaVersion;
  j["weights"] = {{"w1", c.weights.w1}, {"w2", c.weights.w2}, {"w3", c.weights.w3}};
  j["sim"] = sim_json(c.sim);
  j["output"] = {{"directory", c.output_dir}};
  return j;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

}  // namespace

void ScenarioConfig::validate() const {
  vehicle.validate();
  atmosphere.validate();
  game.validate();
  weights.validate();
  transcription.validate();
  if (!(initial.pursuer.v > 0.0)) throw ValidationError("initial pursuer speed must be positive");
  if (initial.target.h != 0.0) throw ValidationError("target altitude must be zero");
  if (initial.target.x == initial.pursuer.x) {
    throw ValidationError("initial target and pursuer share the same downrange position");
  }
  if (!(sim.dt > 0.0)) throw ValidationError("dt must be positive");
  if (!(sim.hold_period > 0.0)) throw ValidationError("hold_period must be positive");
  if (sim.strategies.empty()) throw ValidationError("at least one strategy must be selected");
  if (sim.seeds.empty()) throw ValidationError("at least one seed must be given");
  if (output_dir.empty()) throw ValidationError("output directory must be nonempty");
}

ScenarioConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    throw ParseError("syntax error at line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + e.what(),
                     line, column);
  }

  ScenarioConfig c;
  Section top(root, "");
  if (top.has("schema_version")) {
    int version = 0;
    top.integer("schema_version", version);
    if (version != kConfigSchemaVersion) {
      throw ValidationError("unsupported schema_version " + std::to_string(version));
    }
  }
  if (const json* j = top.child("vehicle")) {
    Section s(*j, "vehicle");
    s.number("s_ref", c.vehicle.s_ref);
    s.number("mass", c.vehicle.mass);
    s.number("c_l1", c.vehicle.c_l1);
    s.number("c_d0", c.vehicle.c_d0);
    s.number("c_d2", c.vehicle.c_d2);
    s.number("g", c.vehicle.g);
    s.finish();
  }
  if (const json* j = top.child("atmosphere")) {
    Section s(*j, "atmosphere");
    s.number("rho0", c.atmosphere.rho0);
    s.number("scale_height", c.atmosphere.scale_height);
    s.finish();
  }
  if (const json* j = top.child("game")) {
    Section s(*j, "game");
    s.number("v_t", c.game.v_t);
    s.number("capture_radius", c.game.eps);
    s.interval("alpha_bounds", c.game.alpha_bounds);
    s.interval("ut_bounds", c.game.ut_bounds);
    s.finish();
  }
  if (const json* j = top.child("initial")) {
    Section s(*j, "initial");
    if (const json* p = s.child("pursuer")) {
      Section ps(*p, "initial.pursuer");
      ps.number("x", c.initial.pursuer.x);
      ps.number("h", c.initial.pursuer.h);
      ps.number("v", c.initial.pursuer.v);
      ps.number("gamma", c.initial.pursuer.gamma);
      ps.finish();
    }
    if (const json* t = s.child("target")) {
      Section ts(*t, "initial.target");
      ts.number("x", c.initial.target.x);
      ts.number("h", c.initial.target.h);
      ts.finish();
    }
    s.finish();
  }
  if (const json* j = top.child("weights")) {
    Section s(*j, "weights");
    s.number("w1", c.weights.w1);
    s.number("w2", c.weights.w2);
    s.number("w3", c.weights.w3);
    s.finish();
  }
  if (const json* j = top.child("transcription")) {
    Section s(*j, "transcription");
    s.integer("n_nodes", c.transcription.n_nodes);
    s.number("defect_tol", c.transcription.defect_tol);
    s.number("capture_tol", c.transcription.capture_tol);
    if (s.has("tf_init") && !j->at("tf_init").is_null()) {
      double tf = 0.0;
      s.number("tf_init", tf);
      c.transcription.tf_init = tf;
    }
    s.integer("max_iter", c.transcription.max_iter);
    s.string("backend", c.transcription.backend);
    s.finish();
  }
  if (const json* j = top.child("sim")) {
    Section s(*j, "sim");
    s.number("dt", c.sim.dt);
    s.number("hold_period", c.sim.hold_period);
    if (const json* list = s.child("strategies")) {
      if (!list->is_array()) s.fail("strategies", "expected an array of strategy names");
      c.sim.strategies.clear();
      for (const json& item : *list) {
        if (!item.is_string()) s.fail("strategies", "expected an array of strategy names");
        c.sim.strategies.push_back(parse_evasion_kind(item.get<std::string>()));
      }
    }
    if (const json* list = s.child("seeds")) {
      if (!list->is_array()) s.fail("seeds", "expected an array of nonnegative integers");
      c.sim.seeds.clear();
      for (const json& item : *list) {
        if (!item.is_number_unsigned()) s.fail("seeds", "expected an array of nonnegative integers");
        c.sim.seeds.push_back(item.get<std::uint64_t>());
      }
    }
    s.finish();
  }
  if (const json* j = top.child("output")) {
    Section s(*j, "output");
    s.string("directory", c.output_dir);
    s.finish();
  }
  top.finish();

  c.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open scenario file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string write_config(const ScenarioConfig& config) { return full_json(config).dump(2) + "\n"; }

std::string reference_hash(const ScenarioConfig& config) {
  return fnv1a_hex(reference_part(config).dump());
}

std::string config_hash(const ScenarioConfig& config) {
  json j = full_json(config);
  j.erase("output");  // where results go does not change what they are
  return fnv1a_hex(j.dump());
}

}  // namespace hyperpursuit
