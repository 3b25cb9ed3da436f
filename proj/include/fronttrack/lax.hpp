#pragma once

#include <cmath>
#include <string>

#include "fronttrack/gas.hpp"

namespace fronttrack {

enum class WaveFamily : int { One = 1, Two = 2, NonPhysical = 3 };

inline const char* family_name(WaveFamily f) {
  switch (f) {
    case WaveFamily::One: return "1";
    case WaveFamily::Two: return "2";
    default: return "np";
  }
}

inline bool is_physical(WaveFamily f) { return f != WaveFamily::NonPhysical; }

// Curve parametrization: sigma is a density increment, rho = rho0 - sigma on the
// 1-curve and rho = rho0 + sigma on the 2-curve. Positive sigma is the rarefaction
// branch, negative the Lax-admissible shock branch, for both families.

inline double characteristic_speed(const PressureLaw& law, WaveFamily family, const GasState& u) {
  auto [l1, l2] = eigenvalues(law, u);
  return family == WaveFamily::One ? l1 : l2;
}

/// Right state on the forward Lax curve of `family` through left state `u0`.
inline GasState lax_curve(const PressureLaw& law, WaveFamily family, const GasState& u0,
                          double sigma) {
  if (!is_physical(family)) throw UsageError("lax_curve: non-physical family");
  check_density(u0.rho, "lax_curve");
  const double sgn = family == WaveFamily::One ? -1.0 : 1.0;
  const double rho = u0.rho + sgn * sigma;
  if (!(rho > kDensityFloor)) {
    throw VacuumError("lax_curve: sigma " + std::to_string(sigma) + " drives density to " +
                      std::to_string(rho));
  }
  const double v0 = u0.velocity();
  double v;
  if (sigma >= 0.0) {
    v = v0 + sgn * (law.rarefaction_potential(rho) - law.rarefaction_potential(u0.rho));
  } else {
    const double dp = law.pressure(rho) - law.pressure(u0.rho);
    const double drho = rho - u0.rho;
    v = v0 - std::sqrt(dp * drho / (rho * u0.rho));
  }
  return {rho, rho * v};
}

/// Left state whose forward Lax curve reaches `u_right` at parameter sigma.
inline GasState lax_curve_from_right(const PressureLaw& law, WaveFamily family,
                                     const GasState& u_right, double sigma) {
  if (!is_physical(family)) throw UsageError("lax_curve_from_right: non-physical family");
  check_density(u_right.rho, "lax_curve_from_right");
  const double sgn = family == WaveFamily::One ? -1.0 : 1.0;
  const double rho = u_right.rho - sgn * sigma;
  if (!(rho > kDensityFloor)) {
    throw VacuumError("lax_curve_from_right: sigma drives density to " + std::to_string(rho));
  }
  const double vr = u_right.velocity();
  double v;
  if (sigma >= 0.0) {
    v = vr - sgn * (law.rarefaction_potential(u_right.rho) - law.rarefaction_potential(rho));
  } else {
    const double dp = law.pressure(u_right.rho) - law.pressure(rho);
    const double drho = u_right.rho - rho;
    v = vr + std::sqrt(dp * drho / (rho * u_right.rho));
  }
  return {rho, rho * v};
}

/// Rankine-Hugoniot speed of the jump (u_l, u_r); exact for shocks.
inline double rankine_hugoniot_speed(const GasState& u_l, const GasState& u_r) {
  return (u_r.q - u_l.q) / (u_r.rho - u_l.rho);
}

/// Propagation speed assigned to a front: RH speed for shocks, the right-state
/// characteristic speed for (possibly unsplit) rarefaction jumps.
inline double front_speed(const PressureLaw& law, WaveFamily family, const GasState& u_l,
                          const GasState& u_r, double sigma) {
  if (sigma < 0.0) return rankine_hugoniot_speed(u_l, u_r);
  return characteristic_speed(law, family, u_r);
}

/// Lax admissibility lambda_i(u_r) < s < lambda_i(u_l) for a shock of `family`.
inline bool shock_is_admissible(const PressureLaw& law, WaveFamily family, const GasState& u_l,
                                const GasState& u_r) {
  const double s = rankine_hugoniot_speed(u_l, u_r);
  return characteristic_speed(law, family, u_r) < s && s < characteristic_speed(law, family, u_l);
}

}  // namespace fronttrack
