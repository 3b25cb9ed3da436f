#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "fronttrack/riemann.hpp"
#include "fronttrack/stationary.hpp"

namespace fronttrack {

/// Box constraints expressing the neighborhood where the junction maps are defined.
struct JunctionBox {
  double max_relative_jump = 0.25;  // |a+ - a-| <= this * min(a-, a+)
  double subsonic_margin = 0.99;    // require |v|/c <= this at the traces
};

/// Coupling condition at a section jump. The smooth-section kind realizes the
/// defect as the pressure integral along the stationary path; a custom kind
/// supplies Sigma(a-, a+; u-) directly.
class CouplingLaw {
 public:
  enum class Kind { SmoothSection, Custom };

  using SigmaFn = std::function<std::array<double, 2>(double, double, const GasState&)>;

  static CouplingLaw smooth_section() {
    CouplingLaw c;
    c.kind_ = Kind::SmoothSection;
    return c;
  }

  /// The supplied Sigma must satisfy the junction axioms; dsigma_da (optional)
  /// is d(Sigma_2)/d(a+) at a+ = a-, used to seed Newton.
  static CouplingLaw custom(SigmaFn sigma, std::function<double(double, const GasState&)>
                                               dsigma_da = nullptr) {
    CouplingLaw c;
    c.kind_ = Kind::Custom;
    c.sigma_ = std::move(sigma);
    c.dsigma_ = std::move(dsigma_da);
    return c;
  }

  Kind kind() const { return kind_; }

  std::array<double, 2> sigma(const PressureLaw& law, double am, double ap,
                              const GasState& u_minus, const OdeOptions& opt = {}) const {
    if (am == ap) return {0.0, 0.0};
    if (kind_ == Kind::Custom) return sigma_(am, ap, u_minus);
    const auto r = integrate_in_section(law, am, ap, u_minus, opt);
    return {0.0, r.pressure_integral};
  }

  /// d(Sigma_2)/d(a+) at coincident sections; p(rho-) for the smooth kind.
  double dsigma_da(const PressureLaw& law, double a, const GasState& u_minus) const {
    if (kind_ == Kind::SmoothSection || !dsigma_) return law.pressure(u_minus.rho);
    return dsigma_(a, u_minus);
  }

 private:
  Kind kind_ = Kind::SmoothSection;
  SigmaFn sigma_;
  std::function<double(double, const GasState&)> dsigma_;
};

namespace detail {

inline void check_junction_inputs(const PressureLaw& law, double am, double ap,
                                  const GasState& u, const JunctionBox& box, const char* where) {
  if (!(am > 0.0) || !(ap > 0.0)) throw DomainError(std::string(where) + ": sections must be > 0");
  check_density(u.rho, where);
  const double c = law.sound_speed(u.rho);
  if (std::abs(u.velocity()) > box.subsonic_margin * c) {
    throw DomainError(std::string(where) + ": state outside the subsonic margin");
  }
  if (std::abs(ap - am) > box.max_relative_jump * std::min(am, ap)) {
    throw DomainError(std::string(where) + ": section jump outside the admissible neighborhood");
  }
}

/// Subsonic root of a+ P(rho, q+) = target with q+ fixed. P(., q) is decreasing
/// up to the sonic density and increasing past it; the subsonic branch is the
/// larger root.
inline double solve_subsonic_density(const PressureLaw& law, double qp, double target_P,
                                     double rho_init) {
  if (qp == 0.0) {
    // P reduces to p(rho): strictly increasing, Newton from the seed
    double rho = rho_init;
    for (int it = 0; it < 100; ++it) {
      const double f = law.pressure(rho) - target_P;
      if (std::abs(f) <= 1e-14 * std::max(1.0, std::abs(target_P))) return rho;
      double next = rho - f / law.dp(rho);
      if (!(next > kDensityFloor)) next = 0.5 * rho;
      rho = next;
    }
    throw SolverError("solve_subsonic_density: stalled (q = 0)");
  }

  // sonic density: c(rho) rho = |q| (left endpoint of the subsonic branch)
  double lo = kDensityFloor * 2.0, hi = std::max(rho_init, 1.0);
  auto sonic_gap = [&](double r) { return law.sound_speed(r) * r - std::abs(qp); };
  while (sonic_gap(hi) < 0.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (sonic_gap(mid) < 0.0 ? lo : hi) = mid;
  }
  const double rho_sonic = hi;

  auto P = [&](double r) { return qp * qp / r + law.pressure(r); };
  if (P(rho_sonic) > target_P) {
    throw SonicError("solve_subsonic_density: target below the sonic minimum of P");
  }
  double b_lo = rho_sonic, b_hi = std::max(rho_init, rho_sonic * (1.0 + 1e-9));
  while (P(b_hi) < target_P) b_hi *= 2.0;
  double rho = std::clamp(rho_init, b_lo, b_hi);
  for (int it = 0; it < 200; ++it) {
    const double f = P(rho) - target_P;
    if (std::abs(f) <= 1e-14 * std::max(1.0, std::abs(target_P))) return rho;
    (f < 0.0 ? b_lo : b_hi) = rho;
    const double slope = -qp * qp / (rho * rho) + law.dp(rho);
    double next = slope > 0.0 ? rho - f / slope : 0.5 * (b_lo + b_hi);
    if (!(next > b_lo && next < b_hi)) next = 0.5 * (b_lo + b_hi);
    rho = next;
  }
  throw SolverError("solve_subsonic_density: no convergence");
}

}  // namespace detail

/// First-order data at a section jump: the transfer-map expansion coefficient H,
/// the outgoing-eigenvalue coefficient G, and the interaction coefficients K1, K2.
struct JunctionCoeffs {
  double H, G, K1, K2;
};

inline JunctionCoeffs first_order_coeffs(const PressureLaw& law, double a, const GasState& u,
                                         double dsigma_da) {
  check_density(u.rho, "first_order_coeffs");
  const double v = u.velocity();
  const double c = law.sound_speed(u.rho);
  const double xi2 = (v / c) * (v / c);
  const double den = 1.0 - xi2;
  if (std::abs(den) < 1e-12) {
    throw DomainError("first_order_coeffs: sonic state, coefficients diverge");
  }
  const double excess = (dsigma_da - law.pressure(u.rho)) / u.rho;  // (d Sigma - p)/rho
  const double cr = law.dc(u.rho) * u.rho / c;                      // c' rho / c

  JunctionCoeffs k;
  k.H = (v * v + excess) / (c * c - v * v);
  k.G = ((law.dc(u.rho) * u.rho - v) * k.H - v) / (v + c);
  k.K1 = std::abs((1.0 + cr * xi2 + (cr + 1.0) * excess / (c * c)) / den) / (2.0 * a);
  k.K2 = std::abs((1.0 - 2.0 * xi2 + cr * xi2 + (cr - 1.0) * excess / (c * c)) / den) / (2.0 * a);
  return k;
}

/// Transfer-map first-order expansion in the section difference.
inline GasState tt_expansion(const PressureLaw& law, double a, const GasState& u, double da,
                             double dsigma_da) {
  const double H = first_order_coeffs(law, a, u, dsigma_da).H;
  return {(1.0 + H * da / a) * u.rho, (1.0 - da / a) * u.q};
}

/// Predicted outgoing sizes for a 2-wave of size sigma2 hitting a section jump,
/// from the linearized transmission/reflection system.
inline std::pair<double, double> sigma12_prediction(const PressureLaw& law, double a,
                                                    const GasState& u, double da, double sigma2,
                                                    double dsigma_da) {
  const JunctionCoeffs k = first_order_coeffs(law, a, u, dsigma_da);
  auto [l1, l2] = eigenvalues(law, u);
  const double c = law.sound_speed(u.rho);
  const double th = da / a;
  const double s1 = -(l2 / (2.0 * c)) * (1.0 + k.G + k.H) * th * sigma2;
  const double s2 = (1.0 - (l1 * k.H + l2 * (1.0 + k.G)) / (2.0 * c) * th) * sigma2;
  return {s1, s2};
}

/// Sigma(a-, a+; u-): zero first component, pressure integral second (smooth kind).
inline std::array<double, 2> sigma_map(const CouplingLaw& claw, const PressureLaw& law, double am,
                                       double ap, const GasState& u_minus,
                                       const OdeOptions& opt = {}) {
  check_density(u_minus.rho, "sigma_map");
  if (!is_subsonic(law, u_minus)) throw DomainError("sigma_map: state not subsonic");
  return claw.sigma(law, am, ap, u_minus, opt);
}

/// The transfer map T(a-, a+; u-): the unique nearby subsonic right trace with
/// Psi = 0. Smooth kind: stationary endpoint. Custom kind: Newton on Psi = 0.
inline GasState t_map(const CouplingLaw& claw, const PressureLaw& law, double am, double ap,
                      const GasState& u_minus, const JunctionBox& box = {},
                      const OdeOptions& opt = {}) {
  detail::check_junction_inputs(law, am, ap, u_minus, box, "t_map");
  if (am == ap) return u_minus;

  if (claw.kind() == CouplingLaw::Kind::SmoothSection) {
    const GasState u = integrate_in_section(law, am, ap, u_minus, opt).u;
    const double c = law.sound_speed(u.rho);
    if (std::abs(u.velocity()) > box.subsonic_margin * c) {
      throw SonicError("t_map: endpoint left the subsonic margin");
    }
    return u;
  }

  const auto sig = claw.sigma(law, am, ap, u_minus, opt);
  const double qp = (am * u_minus.q + sig[0]) / ap;
  const double target = (am * momentum_flux(law, u_minus) + sig[1]) / ap;
  const GasState seed = tt_expansion(law, am, u_minus, ap - am,
                                     claw.dsigma_da(law, am, u_minus));
  const double rho = detail::solve_subsonic_density(law, qp, target, seed.rho);
  const GasState u{rho, qp};
  if (!is_subsonic(law, u)) throw SonicError("t_map: custom solve left the subsonic region");
  return u;
}

/// Residual of the coupling condition at given traces.
inline std::array<double, 2> psi_residual(const CouplingLaw& claw, const PressureLaw& law,
                                          double am, const GasState& u_minus, double ap,
                                          const GasState& u_plus, const OdeOptions& opt = {}) {
  check_density(u_minus.rho, "psi_residual");
  check_density(u_plus.rho, "psi_residual");
  const auto sig = claw.sigma(law, am, ap, u_minus, opt);
  return {ap * u_plus.q - am * u_minus.q - sig[0],
          ap * momentum_flux(law, u_plus) - am * momentum_flux(law, u_minus) - sig[1]};
}

/// Solution of the Riemann problem centered on a junction: family-1 waves into
/// the left pipe, family-2 waves into the right pipe, traces linked by T.
struct JunctionFan {
  double a_left, a_right;
  GasState u_left, u_right;
  GasState trace_minus, trace_plus;  // flanking states at the junction, Psi = 0
  double sigma1 = 0.0, sigma2 = 0.0;
  std::vector<Wave> left_waves, right_waves;
};

inline JunctionFan solve_junction_riemann(const CouplingLaw& claw, const PressureLaw& law,
                                          double am, const GasState& u_l, double ap,
                                          const GasState& u_r, const JunctionBox& box = {},
                                          const OdeOptions& opt = {}) {
  detail::check_junction_inputs(law, am, ap, u_l, box, "solve_junction_riemann(left)");
  detail::check_junction_inputs(law, am, ap, u_r, box, "solve_junction_riemann(right)");

  JunctionFan fan;
  fan.a_left = am;
  fan.a_right = ap;
  fan.u_left = u_l;
  fan.u_right = u_r;

  const double s1 = detail::solve_sigma1(
      law, u_l, u_r,
      [&](double s) {
        return t_map(claw, law, am, ap, lax_curve(law, WaveFamily::One, u_l, s), box, opt);
      },
      "solve_junction_riemann");

  const GasState tm = lax_curve(law, WaveFamily::One, u_l, s1);
  const GasState tp = t_map(claw, law, am, ap, tm, box, opt);
  const double s2 = u_r.rho - tp.rho;

  fan.sigma1 = s1;
  fan.sigma2 = s2;
  fan.trace_minus = tm;
  fan.trace_plus = tp;
  if (std::abs(s1) > 0.0)
    fan.left_waves.push_back(detail::make_wave(law, WaveFamily::One, u_l, tm, s1));
  if (std::abs(s2) > 0.0) {
    const GasState r2 = lax_curve(law, WaveFamily::Two, tp, s2);
    fan.right_waves.push_back(detail::make_wave(law, WaveFamily::Two, tp, r2, s2));
  }

  for (const Wave& w : fan.left_waves) {
    if (w.speed_hi >= 0.0) {
      throw RegimeError("junction emitted a family-1 wave with non-negative speed");
    }
  }
  for (const Wave& w : fan.right_waves) {
    if (w.speed_lo <= 0.0) {
      throw RegimeError("junction emitted a family-2 wave with non-positive speed");
    }
  }
  return fan;
}

/// Finite-difference estimate of the Lipschitz growth coefficient of T:
/// ||DT - I|| / |da|, the per-junction amplification bound for non-physical jumps.
inline double k3_estimate(const CouplingLaw& claw, const PressureLaw& law, double a,
                          const GasState& u, const JunctionBox& box = {}) {
  const double h = 1e-3 * a;
  const double d = 1e-6 * std::max(1.0, u.rho);
  double worst = 0.0;
  for (double da : {h, -h}) {
    double m[2][2];
    for (int col = 0; col < 2; ++col) {
      GasState up = u, um = u;
      (col == 0 ? up.rho : up.q) += d;
      (col == 0 ? um.rho : um.q) -= d;
      const GasState tp = t_map(claw, law, a, a + da, up, box);
      const GasState tm = t_map(claw, law, a, a + da, um, box);
      m[0][col] = (tp.rho - tm.rho) / (2.0 * d) - (col == 0 ? 1.0 : 0.0);
      m[1][col] = (tp.q - tm.q) / (2.0 * d) - (col == 0 ? 0.0 : 1.0);
    }
    const double row0 = std::abs(m[0][0]) + std::abs(m[0][1]);
    const double row1 = std::abs(m[1][0]) + std::abs(m[1][1]);
    worst = std::max(worst, std::max(row0, row1) / std::abs(da));
  }
  return worst;
}

}  // namespace fronttrack
