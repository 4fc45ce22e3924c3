#include <string>

#include <gtest/gtest.h>

#include "hyperpursuit/errors.hpp"
#include "hyperpursuit/scenario.hpp"
#include "support.hpp"

namespace hp = hyperpursuit;

namespace {

std::string validation_message(const std::string& text) {
  try {
    hp::parse_config(text);
  } catch (const hp::ValidationError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(LoadConfig, ShippedDefaultMatchesBuiltInDefaults) {
  const auto c = hp::load_config(std::string(HYPERPURSUIT_SCENARIO_DIR) + "/default.json");
  EXPECT_EQ(c, hp::ScenarioConfig{});
  EXPECT_EQ(c.vehicle.mass, 340.1943);
  EXPECT_EQ(c.initial.pursuer.gamma, -0.4);
  EXPECT_EQ(c.weights, (hp::Weights{3e-5, 1e3, 1e3}));
}

TEST(ParseConfig, EmptyDocumentTakesDefaults) {
  EXPECT_EQ(hp::parse_config("{}"), hp::ScenarioConfig{});
}

TEST(ParseConfig, OmittedWeightsTakeDefaults) {
  const auto c = hp::parse_config(R"({"game": {"v_t": 25.0}})");
  EXPECT_EQ(c.weights, hp::Weights{});
  EXPECT_EQ(c.game.v_t, 25.0);
}

TEST(ParseConfig, NegativeTargetSpeedRejected) {
  EXPECT_EQ(validation_message(R"({"game": {"v_t": -5}})"), "v_t must be positive");
}

TEST(ParseConfig, UnknownKeysRejected) {
  EXPECT_NE(validation_message(R"({"weights": {"w4": 1.0}})").find("weights.w4"), std::string::npos);
  EXPECT_NE(validation_message(R"({"colour": "red"})").find("colour"), std::string::npos);
}

TEST(ParseConfig, WrongTypesRejected) {
  EXPECT_FALSE(validation_message(R"({"sim": {"dt": "fast"}})").empty());
  EXPECT_FALSE(validation_message(R"({"sim": {"strategies": ["E7"]}})").empty());
  EXPECT_FALSE(validation_message(R"({"schema_version": 9})").empty());
  EXPECT_FALSE(validation_message(R"({"game": {"alpha_bounds": [0.1]}})").empty());
}

TEST(ParseConfig, GeometryChecks) {
  EXPECT_FALSE(validation_message(R"({"initial": {"target": {"h": 5.0}}})").empty());
  EXPECT_FALSE(validation_message(R"({"initial": {"target": {"x": -50000.0}}})").empty());
  EXPECT_FALSE(validation_message(R"({"transcription": {"backend": "snopt"}})").empty());
}

TEST(ParseConfig, SyntaxErrorCarriesPosition) {
  try {
    hp::parse_config("{\n  \"sim\": {\n    \"dt\": 0.005,,\n  }\n}");
    FAIL() << "expected a parse error";
  } catch (const hp::ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_GE(e.column(), 16);
    EXPECT_LE(e.column(), 18);
  }
}

TEST(WriteConfig, RoundTrip) {
  hp::ScenarioConfig c;
  c.weights.w3 = 250.0;
  c.sim.seeds = {4, 8, 15};
  c.sim.strategies = {hp::EvasionKind::Random};
  c.transcription.tf_init = 18.5;
  c.output_dir = "elsewhere";
  const std::string text = hp::write_config(c);
  EXPECT_EQ(hp::parse_config(text), c);
  EXPECT_EQ(hp::write_config(hp::parse_config(text)), text);
}

TEST(Hashes, StableAndSelective) {
  hp::ScenarioConfig a;
  const std::string ra = hp::reference_hash(a);
  EXPECT_EQ(ra.size(), 16u);
  EXPECT_EQ(ra, hp::reference_hash(hp::ScenarioConfig{}));

  hp::ScenarioConfig b = a;
  b.weights.w1 = 1e-4;
  b.sim.dt = 0.001;
  EXPECT_EQ(hp::reference_hash(b), ra);
  EXPECT_NE(hp::config_hash(b), hp::config_hash(a));

  hp::ScenarioConfig c = a;
  c.initial.pursuer.v = 3900.0;
  EXPECT_NE(hp::reference_hash(c), ra);

  hp::ScenarioConfig d = a;
  d.output_dir = "other";
  EXPECT_EQ(hp::config_hash(d), hp::config_hash(a));
}

TEST(LoadConfig, MissingFileIsValidationError) {
  EXPECT_THROW(hp::load_config("/nonexistent/scenario.json"), hp::ValidationError);
}
