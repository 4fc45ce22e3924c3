#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "hyperpursuit/artifacts.hpp"
#include "hyperpursuit/errors.hpp"
#include "support.hpp"

namespace hp = hyperpursuit;
using hp::testing::default_reference;

namespace {

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::size_t line_count(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(hp::format_number(0.1), "0.1");
  EXPECT_EQ(hp::format_number(-2.0), "-2");
  EXPECT_EQ(hp::format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(hp::format_number(-std::numeric_limits<double>::infinity()), "-inf");
  const double awkward = 16.133900490012345;
  EXPECT_EQ(std::stod(hp::format_number(awkward)), awkward);
}

TEST(ReferenceArtifact, BitExactRoundTrip) {
  const auto& sol = default_reference();
  const std::string text = hp::reference_to_json(sol, "0123456789abcdef");
  const auto loaded = hp::reference_from_json(text);
  EXPECT_EQ(loaded.reference_hash, "0123456789abcdef");
  const auto& r = loaded.solution;
  EXPECT_EQ(r.t_f_star, sol.t_f_star);
  EXPECT_EQ(r.u_t_star, sol.u_t_star);
  EXPECT_EQ(r.v_t, sol.v_t);
  ASSERT_EQ(r.grid.size(), sol.grid.size());
  for (std::size_t k = 0; k < sol.grid.size(); ++k) {
    EXPECT_EQ(r.grid.time(k), sol.grid.time(k));
    EXPECT_EQ(r.x_star[k], sol.x_star[k]);
    EXPECT_EQ(r.xdot_star[k], sol.xdot_star[k]);
    EXPECT_EQ(r.u_star[k], sol.u_star[k]);
    EXPECT_EQ(r.xt_star[k], sol.xt_star[k]);
  }
  EXPECT_EQ(r.report.iterations, sol.report.iterations);
  EXPECT_EQ(hp::reference_to_json(r, loaded.reference_hash), text);
}

TEST(ReferenceArtifact, RejectsForeignOrDamagedDocuments) {
  EXPECT_THROW(hp::reference_from_json("{ not json"), hp::ValidationError);
  EXPECT_THROW(hp::reference_from_json(R"({"kind": "summary", "schema_version": 1})"),
               hp::ValidationError);
  std::string text = hp::reference_to_json(default_reference(), "h");
  const auto pos = text.find("\"schema_version\": 1");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 19, "\"schema_version\": 2");
  EXPECT_THROW(hp::reference_from_json(text), hp::ValidationError);
}

TEST(Csv, ReferenceHeaderAndRows) {
  const auto& sol = default_reference();
  const std::string csv = hp::reference_to_csv(sol);
  EXPECT_EQ(first_line(csv).substr(0, 4), "t_s,");
  EXPECT_EQ(line_count(csv), sol.grid.size() + 1);
}

TEST(Csv, EngagementHeader) {
  hp::EngagementResult r;
  r.grid = hp::TimeGrid(0.0, 1.0, 3);
  r.pursuer.assign(3, hp::PursuerVector(1, 2, 3, 4));
  r.target.assign(3, hp::TargetVector(5, 0));
  r.alpha.assign(3, 0.01);
  r.u_t.assign(3, 1.0);
  r.nu_p.assign(3, 0.0);
  r.nu_t.assign(3, 0.0);
  r.deviation.assign(3, hp::JointDeviation::Zero());
  const std::string csv = hp::engagement_to_csv(r);
  EXPECT_EQ(first_line(csv), "t_s,x_p_m,h_p_m,v_p_mps,gamma_p_rad,x_t_m,h_t_m,alpha_rad,u_t,nu_p_rad");
  EXPECT_EQ(line_count(csv), 4u);
  std::istringstream in(csv);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(row, "0,1,2,3,4,5,0,0.01,1,0");
}

TEST(Csv, SweepRows) {
  std::vector<hp::SweepEntry> e(2);
  e[0] = {3, false, 0.0, 12.5, 10.0};
  e[1] = {4, true, 7.25, std::nan(""), std::nan("")};
  const std::string csv = hp::sweep_to_csv(e);
  EXPECT_EQ(line_count(csv), 3u);
  EXPECT_NE(csv.find("3,"), std::string::npos);
  EXPECT_NE(csv.find("nan"), std::string::npos);
}

TEST(Files, OverwriteRefusedUnlessRequested) {
  const hp::testing::TempDir dir("artifacts");
  const auto path = dir.path() / "nested" / "out.json";
  hp::write_text_file(path, "first\n", false);
  EXPECT_EQ(hp::read_text_file(path), "first\n");
  EXPECT_THROW(hp::write_text_file(path, "second\n", false), hp::ValidationError);
  EXPECT_EQ(hp::read_text_file(path), "first\n");
  hp::write_text_file(path, "second\n", true);
  EXPECT_EQ(hp::read_text_file(path), "second\n");
  EXPECT_THROW(hp::read_text_file(dir.path() / "missing"), hp::ValidationError);
}
