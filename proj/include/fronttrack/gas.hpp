#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "fronttrack/errors.hpp"

namespace fronttrack {

/// Densities at or below this are treated as vacuum and rejected.
inline constexpr double kDensityFloor = 1e-12;

/// State of the gas at a point: density and linear momentum density.
struct GasState {
  double rho = 1.0;
  double q = 0.0;

  double velocity() const { return q / rho; }
};

inline void check_density(double rho, const char* where) {
  if (!(rho > kDensityFloor)) {
    throw DomainError(std::string(where) + ": non-positive density " + std::to_string(rho));
  }
}

/// Barotropic pressure law p(rho) with p' > 0 and p'' >= 0.
/// Isothermal p = c^2 rho, or gamma-law p = k rho^gamma (gamma >= 1).
class PressureLaw {
 public:
  enum class Kind { Isothermal, GammaLaw };

  static PressureLaw isothermal(double sound_speed, double rho_star = 1.0) {
    if (!(sound_speed > 0.0)) throw DomainError("isothermal: sound speed must be positive");
    if (!(rho_star > 0.0)) throw DomainError("isothermal: rho_star must be positive");
    PressureLaw law;
    law.kind_ = Kind::Isothermal;
    law.k_ = sound_speed * sound_speed;
    law.gamma_ = 1.0;
    law.rho_star_ = rho_star;
    return law;
  }

  static PressureLaw gamma_law(double k, double gamma, double rho_star = 1.0) {
    if (!(k > 0.0)) throw DomainError("gamma_law: k must be positive");
    if (!(gamma >= 1.0)) throw DomainError("gamma_law: gamma must be >= 1");
    if (!(rho_star > 0.0)) throw DomainError("gamma_law: rho_star must be positive");
    PressureLaw law;
    law.kind_ = Kind::GammaLaw;
    law.k_ = k;
    law.gamma_ = gamma;
    law.rho_star_ = rho_star;
    return law;
  }

  Kind kind() const { return kind_; }
  double k() const { return k_; }
  double gamma() const { return gamma_; }
  double rho_star() const { return rho_star_; }
  bool is_isothermal() const { return kind_ == Kind::Isothermal || gamma_ == 1.0; }

  double pressure(double rho) const {
    check_density(rho, "pressure");
    return k_ * std::pow(rho, gamma_);
  }

  double dp(double rho) const {
    check_density(rho, "dp");
    return k_ * gamma_ * std::pow(rho, gamma_ - 1.0);
  }

  double ddp(double rho) const {
    check_density(rho, "ddp");
    return k_ * gamma_ * (gamma_ - 1.0) * std::pow(rho, gamma_ - 2.0);
  }

  double sound_speed(double rho) const { return std::sqrt(dp(rho)); }

  /// c'(rho); zero for the isothermal law.
  double dc(double rho) const {
    if (gamma_ == 1.0) return 0.0;
    return 0.5 * ddp(rho) / sound_speed(rho);
  }

  /// Integral of p(r)/r^2 from rho_star to rho (internal-energy term in E).
  double energy_integral(double rho) const {
    check_density(rho, "energy_integral");
    if (gamma_ == 1.0) return k_ * std::log(rho / rho_star_);
    return k_ / (gamma_ - 1.0) * (std::pow(rho, gamma_ - 1.0) - std::pow(rho_star_, gamma_ - 1.0));
  }

  /// Antiderivative of c(r)/r, the Riemann-invariant potential along rarefaction curves.
  double rarefaction_potential(double rho) const {
    check_density(rho, "rarefaction_potential");
    if (gamma_ == 1.0) return std::sqrt(k_) * std::log(rho);
    const double e = 0.5 * (gamma_ - 1.0);
    return std::sqrt(k_ * gamma_) * std::pow(rho, e) / e;
  }

 private:
  Kind kind_ = Kind::Isothermal;
  double k_ = 1.0;        // c^2 for isothermal
  double gamma_ = 1.0;
  double rho_star_ = 1.0;
};

inline double sound_speed(const PressureLaw& law, double rho) { return law.sound_speed(rho); }

inline std::pair<double, double> eigenvalues(const PressureLaw& law, const GasState& u) {
  check_density(u.rho, "eigenvalues");
  const double v = u.velocity();
  const double c = law.sound_speed(u.rho);
  return {v - c, v + c};
}

inline bool is_subsonic(const PressureLaw& law, const GasState& u) {
  auto [l1, l2] = eigenvalues(law, u);
  return l1 < 0.0 && 0.0 < l2;
}

/// P(u) = q^2/rho + p(rho), the momentum flux.
inline double momentum_flux(const PressureLaw& law, const GasState& u) {
  check_density(u.rho, "momentum_flux");
  return u.q * u.q / u.rho + law.pressure(u.rho);
}

/// Total energy density E and its flux F; (E, F) is the entropy pair.
inline std::pair<double, double> entropy_pair(const PressureLaw& law, const GasState& u) {
  check_density(u.rho, "entropy_pair");
  const double e = 0.5 * u.q * u.q / u.rho + u.rho * law.energy_integral(u.rho);
  const double f = u.velocity() * (e + law.pressure(u.rho));
  return {e, f};
}

/// Flux of the homogeneous system: f(u) = (q, P(u)).
inline std::pair<double, double> flux(const PressureLaw& law, const GasState& u) {
  return {u.q, momentum_flux(law, u)};
}

}  // namespace fronttrack
