#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "hyperpursuit/errors.hpp"
#include "hyperpursuit/evader.hpp"

namespace hp = hyperpursuit;

TEST(Oles, SignOfRelativeDownrange) {
  EXPECT_EQ(hp::oles({-50000.0, 20000.0}, {0.0, 0.0}), 1.0);
  EXPECT_EQ(hp::oles({100.0, 3000.0}, {-5.0, 0.0}), -1.0);
}

TEST(Oles, UndefinedWhenAligned) {
  EXPECT_THROW(hp::oles({0.0, 1000.0}, {0.0, 0.0}), hp::UndefinedStrategyError);
}

TEST(Oles, TranslationInvariant) {
  for (double shift : {-1e5, -3.0, 0.0, 42.0, 7e4}) {
    EXPECT_EQ(hp::oles({-50000.0 + shift, 20000.0}, {shift, 0.0}), 1.0);
    EXPECT_EQ(hp::oles({10.0 + shift, 500.0}, {shift, 0.0}), -1.0);
  }
}

TEST(ApproxValue, ZeroAtCoincidence) {
  const hp::ValueApprox va{3000.0, 20.0};
  EXPECT_EQ(hp::approx_value({5.0, 0.0}, {5.0, 0.0}, va), 0.0);
}

TEST(ApproxValue, Table2Geometry) {
  const hp::ValueApprox va{3352.15, 20.0};
  EXPECT_NEAR(hp::approx_value({-50000.0, 20000.0}, {0.0, 0.0}, va), 16.1612316586423, 1e-10);
}

TEST(ApproxValue, LinearInRange) {
  const hp::ValueApprox va{3000.0, 20.0};
  const double v1 = hp::approx_value({-400.0, 300.0}, {0.0, 0.0}, va);
  const double v2 = hp::approx_value({-800.0, 600.0}, {0.0, 0.0}, va);
  EXPECT_NEAR(v2, 2.0 * v1, 1e-15);
}

TEST(ApproxValue, RejectsSlowPursuer) {
  EXPECT_THROW((hp::ValueApprox{10.0, 20.0}.c()), hp::ContractViolation);
}

TEST(EvaderInput, OptimalAndOpposite) {
  hp::Evader e1({hp::EvasionKind::Optimal}, 1.0);
  hp::Evader e2({hp::EvasionKind::Opposite}, 1.0);
  for (double t : {0.0, 3.7, 16.0}) {
    EXPECT_EQ(hp::evader_input(e1, t), 1.0);
    EXPECT_EQ(hp::evader_input(e2, t), -1.0);
  }
}

TEST(EvaderInput, RandomHeldWithinInterval) {
  hp::Evader e({hp::EvasionKind::Random, 1.0, 99}, 1.0);
  for (int k = 0; k < 16; ++k) {
    const double a = e.input(k + 0.0);
    EXPECT_EQ(e.input(k + 0.4), a);
    EXPECT_EQ(e.input(k + 0.999), a);
  }
}

TEST(EvaderInput, RandomReproducibleAndOrderIndependent) {
  hp::Evader a({hp::EvasionKind::Random, 0.5, 1234}, 1.0);
  hp::Evader b({hp::EvasionKind::Random, 0.5, 1234}, 1.0);
  std::vector<double> forward;
  for (int k = 0; k < 40; ++k) forward.push_back(a.input(0.5 * k + 0.1));
  // Query b out of order; cached draws must not depend on query order.
  const double late = b.input(0.5 * 39 + 0.2);
  EXPECT_EQ(late, forward.back());
  for (int k = 0; k < 40; ++k) EXPECT_EQ(b.input(0.5 * k + 0.3), forward[k]);
}

TEST(EvaderInput, DifferentSeedsDiffer) {
  hp::Evader a({hp::EvasionKind::Random, 1.0, 1}, 1.0);
  hp::Evader b({hp::EvasionKind::Random, 1.0, 2}, 1.0);
  int differ = 0;
  for (int k = 0; k < 50; ++k) differ += a.input(k) != b.input(k);
  EXPECT_GT(differ, 10);
}

TEST(EvaderInput, RandomMarginalIsUniformWithinThreeSigma) {
  hp::Evader e({hp::EvasionKind::Random, 1.0, 2024}, 1.0);
  std::map<double, int> counts;
  constexpr int kIntervals = 10000;
  for (int k = 0; k < kIntervals; ++k) counts[e.input(k + 0.5)]++;
  ASSERT_EQ(counts.size(), 3u);
  const double p = 1.0 / 3.0;
  const double sigma = std::sqrt(kIntervals * p * (1.0 - p));
  for (double u : {-1.0, 0.0, 1.0}) {
    EXPECT_NEAR(counts[u], kIntervals * p, 3.0 * sigma) << "u=" << u;
  }
}

TEST(EvasionStrategy, ValidationAndNames) {
  EXPECT_THROW((hp::EvasionStrategy{hp::EvasionKind::Random, 0.0, 0}.validate()),
               hp::ValidationError);
  EXPECT_NO_THROW((hp::EvasionStrategy{hp::EvasionKind::Optimal, 0.0, 0}.validate()));
  EXPECT_EQ(hp::parse_evasion_kind("E2"), hp::EvasionKind::Opposite);
  EXPECT_EQ(hp::parse_evasion_kind("random"), hp::EvasionKind::Random);
  EXPECT_EQ(hp::to_string(hp::EvasionKind::Optimal), "E1");
  EXPECT_THROW(hp::parse_evasion_kind("E4"), hp::ValidationError);
}
