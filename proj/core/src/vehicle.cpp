#include "hyperpursuit/vehicle.hpp"

#include <cmath>
#include <string>

#include "hyperpursuit/errors.hpp"

namespace hyperpursuit {
namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ValidationError(std::string(name) + " must be positive");
  }
}

}  // namespace

void VehicleParams::validate() const {
  require_positive(s_ref, "s_ref");
  require_positive(mass, "mass");
  require_positive(c_l1, "c_l1");
  require_positive(c_d0, "c_d0");
  require_positive(c_d2, "c_d2");
  require_positive(g, "g");
}

void AtmosphereParams::validate() const {
  require_positive(rho0, "rho0");
  require_positive(scale_height, "scale_height");
}

void GameConfig::validate() const {
  require_positive(v_t, "v_t");
  if (!(eps >= 0.0)) throw ValidationError("eps must be nonnegative");
  if (!(alpha_bounds.lo < 0.0 && alpha_bounds.hi > 0.0)) {
    throw ValidationError("alpha_bounds must satisfy lo < 0 < hi");
  }
  if (!(ut_bounds.lo == -1.0 && ut_bounds.hi == 1.0)) {
    throw ValidationError("ut_bounds must be [-1, 1]");
  }
}

double atmosphere_density(double h, const AtmosphereParams& atmos) {
  return atmos.rho0 * std::exp(-h / atmos.scale_height);
}

AeroCoefficients aero_coeffs(double alpha, const VehicleParams& params) {
  return {params.c_l1 * alpha, params.c_d0 + params.c_d2 * alpha * alpha};
}

AeroForces aero_forces(const PursuerState& state, double alpha, const VehicleParams& params,
                       const AtmosphereParams& atmos) {
  const double q = 0.5 * atmosphere_density(state.h, atmos) * params.s_ref * state.v * state.v;
  const auto [c_l, c_d] = aero_coeffs(alpha, params);
  return {q * c_l, q * c_d};
}

double kappa(double h, const VehicleParams& params, const AtmosphereParams& atmos) {
  return params.s_ref * atmosphere_density(h, atmos) / (2.0 * params.mass);
}

PursuerVector pursuer_deriv(const PursuerVector& state, double alpha, const VehicleParams& params,
                            const AtmosphereParams& atmos) {
  const double v = state(2);
  const double gamma = state(3);
  if (!(v > 0.0)) {
    throw DomainError("pursuer speed must be positive, got " + std::to_string(v));
  }
  const auto [lift, drag] = aero_forces(PursuerState::from(state), alpha, params, atmos);
  const double cg = std::cos(gamma);
  const double sg = std::sin(gamma);
  return {v * cg, v * sg, -drag / params.mass - params.g * sg,
          lift / (params.mass * v) - params.g * cg / v};
}

TargetVector target_deriv(double u_t, const GameConfig& config) {
  if (!config.ut_bounds.contains(u_t)) {
    throw ContractViolation("target input " + std::to_string(u_t) + " outside [-1, 1]");
  }
  return {config.v_t * u_t, 0.0};
}

}  // namespace hyperpursuit
