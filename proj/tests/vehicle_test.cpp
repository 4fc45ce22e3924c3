#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "hyperpursuit/errors.hpp"
#include "hyperpursuit/vehicle.hpp"

namespace hp = hyperpursuit;

namespace {

const hp::VehicleParams kParams;
const hp::AtmosphereParams kAtmos;
constexpr double kPi18 = std::numbers::pi / 18.0;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(AtmosphereDensity, SurfaceValueIsRho0) {
  EXPECT_DOUBLE_EQ(hp::atmosphere_density(0.0, kAtmos), 1.2);
}

TEST(AtmosphereDensity, MatchesHighPrecisionValues) {
  EXPECT_LT(rel(hp::atmosphere_density(7500.0, kAtmos), 0.441455329405731), 1e-14);
  EXPECT_LT(rel(hp::atmosphere_density(20000.0, kAtmos), 0.0833801414673618), 1e-14);
}

TEST(AtmosphereDensity, PositiveAndDecreasingIncludingBelowGround) {
  double prev = hp::atmosphere_density(-2000.0, kAtmos);
  EXPECT_GT(prev, 1.2);
  for (double h = -1500.0; h <= 60000.0; h += 500.0) {
    const double rho = hp::atmosphere_density(h, kAtmos);
    EXPECT_GT(rho, 0.0);
    EXPECT_LT(rho, prev);
    prev = rho;
  }
}

TEST(AeroCoeffs, ZeroLiftCase) {
  const auto [cl, cd] = hp::aero_coeffs(0.0, kParams);
  EXPECT_EQ(cl, 0.0);
  EXPECT_EQ(cd, 0.0612);
}

TEST(AeroCoeffs, BoundaryAngleOfAttack) {
  const auto up = hp::aero_coeffs(kPi18, kParams);
  EXPECT_LT(rel(up.c_l, 0.273283654277272), 1e-13);
  EXPECT_LT(rel(up.c_d, 0.111574582710128), 1e-13);
  const auto down = hp::aero_coeffs(-kPi18, kParams);
  EXPECT_EQ(down.c_l, -up.c_l);
  EXPECT_EQ(down.c_d, up.c_d);
}

TEST(AeroCoeffs, ParityOnRandomAngles) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = dist(rng);
    const auto p = hp::aero_coeffs(a, kParams);
    const auto m = hp::aero_coeffs(-a, kParams);
    EXPECT_EQ(m.c_l, -p.c_l);
    EXPECT_EQ(m.c_d, p.c_d);
    EXPECT_GE(p.c_d, kParams.c_d0);
  }
}

TEST(AeroForces, VanishAtTinySpeed) {
  const auto f = hp::aero_forces({0.0, 0.0, 1e-6, 0.0}, kPi18, kParams, kAtmos);
  EXPECT_LE(std::abs(f.lift), 1e-9);
  EXPECT_LE(std::abs(f.drag), 1e-9);
}

TEST(AeroForces, DragAtTable2Condition) {
  const auto f = hp::aero_forces({0.0, 20000.0, 4000.0, 0.0}, 0.0, kParams, kAtmos);
  EXPECT_EQ(f.lift, 0.0);
  EXPECT_LT(rel(f.drag, 11916.2095489005), 1e-13);
}

TEST(AeroForces, LinearInSurfaceDensity) {
  hp::AtmosphereParams dense = kAtmos;
  dense.rho0 *= 2.0;
  const hp::PursuerState s{0.0, 12000.0, 2500.0, -0.1};
  const auto a = hp::aero_forces(s, 0.07, kParams, kAtmos);
  const auto b = hp::aero_forces(s, 0.07, kParams, dense);
  EXPECT_NEAR(b.lift, 2.0 * a.lift, 1e-12 * std::abs(a.lift));
  EXPECT_NEAR(b.drag, 2.0 * a.drag, 1e-12 * a.drag);
}

TEST(AeroForces, LiftFollowsSignOfAlpha) {
  const hp::PursuerState s{0.0, 5000.0, 1000.0, 0.0};
  EXPECT_GT(hp::aero_forces(s, 0.05, kParams, kAtmos).lift, 0.0);
  EXPECT_LT(hp::aero_forces(s, -0.05, kParams, kAtmos).lift, 0.0);
  EXPECT_GT(hp::aero_forces(s, -0.05, kParams, kAtmos).drag, 0.0);
}

TEST(PursuerDeriv, LevelZeroLiftFlight) {
  const auto d = hp::pursuer_deriv(hp::PursuerState{0.0, 0.0, 100.0, 0.0}, 0.0, kParams, kAtmos);
  EXPECT_DOUBLE_EQ(d(0), 100.0);
  EXPECT_EQ(d(1), 0.0);
  EXPECT_LT(rel(-d(2), 0.315071945649883), 1e-13);
  EXPECT_DOUBLE_EQ(d(3), -9.81 / 100.0);
}

TEST(PursuerDeriv, Table2InitialState) {
  const auto d =
      hp::pursuer_deriv(hp::PursuerState{-50000.0, 20000.0, 4000.0, -0.4}, 0.0, kParams, kAtmos);
  EXPECT_LT(rel(d(0), 3684.24397601154), 1e-13);
  EXPECT_LT(rel(d(1), -1557.67336923460), 1e-13);
  EXPECT_LT(rel(d(2), -31.2074639295311), 1e-12);
  EXPECT_LT(rel(d(3), -0.00225890208779208), 1e-12);
}

TEST(PursuerDeriv, VerticalFlight) {
  const auto d = hp::pursuer_deriv(hp::PursuerState{0.0, 1000.0, 300.0, std::numbers::pi / 2},
                                   0.0, kParams, kAtmos);
  EXPECT_NEAR(d(0), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(d(1), 300.0);
}

TEST(PursuerDeriv, NonpositiveSpeedIsDomainError) {
  EXPECT_THROW(hp::pursuer_deriv(hp::PursuerState{0.0, 0.0, 0.0, 0.0}, 0.0, kParams, kAtmos),
               hp::DomainError);
  EXPECT_THROW(hp::pursuer_deriv(hp::PursuerState{0.0, 0.0, -5.0, 0.0}, 0.0, kParams, kAtmos),
               hp::DomainError);
}

TEST(PursuerDeriv, KinematicsAndEnergyIdentityOnRandomStates) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> h(-500.0, 40000.0), v(50.0, 5000.0), g(-1.5, 1.5),
      a(-kPi18, kPi18);
  for (int i = 0; i < 500; ++i) {
    const hp::PursuerState s{0.0, h(rng), v(rng), g(rng)};
    const double alpha = a(rng);
    const auto d = hp::pursuer_deriv(s, alpha, kParams, kAtmos);
    EXPECT_DOUBLE_EQ(d(0), s.v * std::cos(s.gamma));
    EXPECT_DOUBLE_EQ(d(1), s.v * std::sin(s.gamma));
    const double drag = hp::aero_forces(s, alpha, kParams, kAtmos).drag;
    ASSERT_GT(drag, 0.0);
    const double lhs = kParams.mass * s.v * d(2) + kParams.mass * kParams.g * d(1);
    EXPECT_LE(std::abs(lhs + drag * s.v), 1e-12 * drag * s.v);
  }
}

TEST(TargetDeriv, SimpleMotion) {
  const hp::GameConfig game;
  EXPECT_EQ(hp::target_deriv(0.0, game), hp::TargetVector(0.0, 0.0));
  EXPECT_EQ(hp::target_deriv(1.0, game), hp::TargetVector(20.0, 0.0));
  EXPECT_EQ(hp::target_deriv(-1.0, game), hp::TargetVector(-20.0, 0.0));
  for (double u = -1.0; u <= 1.0; u += 0.125) EXPECT_EQ(hp::target_deriv(u, game)(1), 0.0);
}

TEST(TargetDeriv, OutOfBoundsInputIsContractViolation) {
  EXPECT_THROW(hp::target_deriv(1.5, hp::GameConfig{}), hp::ContractViolation);
  EXPECT_THROW(hp::target_deriv(-1.0001, hp::GameConfig{}), hp::ContractViolation);
}

TEST(ParamValidation, RejectsNonPositiveValues) {
  hp::VehicleParams p;
  p.mass = 0.0;
  EXPECT_THROW(p.validate(), hp::ValidationError);
  hp::AtmosphereParams a;
  a.scale_height = -1.0;
  EXPECT_THROW(a.validate(), hp::ValidationError);
  hp::GameConfig g;
  g.v_t = -5.0;
  try {
    g.validate();
    FAIL() << "expected a validation error";
  } catch (const hp::ValidationError& e) {
    EXPECT_STREQ(e.what(), "v_t must be positive");
  }
  EXPECT_NO_THROW(hp::VehicleParams{}.validate());
  EXPECT_NO_THROW(hp::GameConfig{}.validate());
}
