#pragma once

#include <numbers>
#include <utility>

#include <Eigen/Core>

namespace hyperpursuit {

using PursuerVector = Eigen::Vector4d;  // (x, h, v, gamma)
using TargetVector = Eigen::Vector2d;   // (x, h)

// Planar point-mass state of the glide vehicle.
struct PursuerState {
  double x = 0.0;      // downrange, m
  double h = 0.0;      // altitude, m
  double v = 0.0;      // speed, m/s
  double gamma = 0.0;  // flight-path angle, rad

  PursuerVector vec() const { return {x, h, v, gamma}; }
  static PursuerState from(const PursuerVector& s) { return {s(0), s(1), s(2), s(3)}; }
  Eigen::Vector2d position() const { return {x, h}; }
};

// Ground target; h stays at zero.
struct TargetState {
  double x = 0.0;
  double h = 0.0;

  TargetVector vec() const { return {x, h}; }
  static TargetState from(const TargetVector& s) { return {s(0), s(1)}; }
  Eigen::Vector2d position() const { return {x, h}; }
};

struct VehicleParams {
  double s_ref = 0.2919;   // m^2
  double mass = 340.1943;  // kg
  double c_l1 = 1.5658;
  double c_d0 = 0.0612;
  double c_d2 = 1.6537;
  double g = 9.81;  // m/s^2

  void validate() const;
  bool operator==(const VehicleParams&) const = default;
};

struct AtmosphereParams {
  double rho0 = 1.2;            // kg/m^3
  double scale_height = 7500.0;  // m

  void validate() const;
  bool operator==(const AtmosphereParams&) const = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double u) const { return u >= lo && u <= hi; }
  bool operator==(const Interval&) const = default;
};

struct GameConfig {
  double v_t = 20.0;  // target max speed, m/s
  double eps = 0.0;   // capture radius, m
  Interval alpha_bounds{-std::numbers::pi / 18.0, std::numbers::pi / 18.0};
  Interval ut_bounds{-1.0, 1.0};

  void validate() const;
  bool operator==(const GameConfig&) const = default;
};

struct AeroCoefficients {
  double c_l;
  double c_d;
};

struct AeroForces {
  double lift;  // N
  double drag;  // N
};

// rho0 * exp(-h / H). Negative altitudes extrapolate.
double atmosphere_density(double h, const AtmosphereParams& atmos);

AeroCoefficients aero_coeffs(double alpha, const VehicleParams& params);

AeroForces aero_forces(const PursuerState& state, double alpha, const VehicleParams& params,
                       const AtmosphereParams& atmos);

// S * rho(h) / (2 m), the common factor of lift and drag accelerations.
double kappa(double h, const VehicleParams& params, const AtmosphereParams& atmos);

// Time derivative of (x, h, v, gamma). Throws DomainError when v <= 0.
PursuerVector pursuer_deriv(const PursuerVector& state, double alpha, const VehicleParams& params,
                            const AtmosphereParams& atmos);

inline PursuerVector pursuer_deriv(const PursuerState& state, double alpha,
                                   const VehicleParams& params, const AtmosphereParams& atmos) {
  return pursuer_deriv(state.vec(), alpha, params, atmos);
}

// (v_t * u_t, 0). Throws ContractViolation when u_t is outside ut_bounds.
TargetVector target_deriv(double u_t, const GameConfig& config);

}  // namespace hyperpursuit
