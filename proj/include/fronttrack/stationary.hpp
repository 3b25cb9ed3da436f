#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "fronttrack/gas.hpp"

namespace fronttrack {

struct OdeOptions {
  double tol = 1e-10;
  double sonic_margin = 1e-6;  // stop when 1 - (v/c)^2 falls below this
  int max_steps = 200000;
};

struct SectionPathResult {
  GasState u;                       // endpoint state
  double pressure_integral = 0.0;   // integral of p(rho) over the section variable
};

namespace detail {

// Stationary flow with the section as independent variable: a q = const eliminates q,
// leaving d(rho)/da = rho v^2 / ((c^2 - v^2) a). The pressure integral rides along.
class SectionOde {
 public:
  SectionOde(const PressureLaw& law, double mass_flux) : law_(law), flux_(mass_flux) {}

  void rhs(double a, double rho, double& drho, double& dint, const OdeOptions& opt) const {
    check_density(rho, "stationary ode");
    const double v = flux_ / (a * rho);
    const double c2 = law_.dp(rho);
    const double gap = c2 - v * v;
    if (gap <= opt.sonic_margin * c2) {
      throw SonicError("stationary path reached the sonic line at a = " + std::to_string(a));
    }
    drho = rho * v * v / (gap * a);
    dint = law_.pressure(rho);
  }

 private:
  const PressureLaw& law_;
  double flux_;
};

}  // namespace detail

/// Integrate the stationary equations between section values a0 and a1 starting
/// from u0 (taken as the state where the section equals a0). Step-doubling RK4.
inline SectionPathResult integrate_in_section(const PressureLaw& law, double a0, double a1,
                                              const GasState& u0, const OdeOptions& opt = {},
                                              std::vector<std::pair<double, GasState>>* path
                                              = nullptr) {
  if (!(a0 > 0.0) || !(a1 > 0.0)) throw DomainError("integrate_in_section: sections must be > 0");
  check_density(u0.rho, "integrate_in_section");

  const double flux = a0 * u0.q;
  SectionPathResult res;
  if (a0 == a1 || u0.q == 0.0) {
    // zero right-hand side: rho is constant, only the integral accumulates
    res.u = {u0.rho, flux / a1};
    res.pressure_integral = law.pressure(u0.rho) * (a1 - a0);
    if (path) {
      path->push_back({a0, u0});
      path->push_back({a1, res.u});
    }
    return res;
  }

  detail::SectionOde ode(law, flux);
  auto rk4 = [&](double a, double rho, double integ, double h, double& rho_out,
                 double& int_out) {
    double k1r, k1i, k2r, k2i, k3r, k3i, k4r, k4i;
    ode.rhs(a, rho, k1r, k1i, opt);
    ode.rhs(a + 0.5 * h, rho + 0.5 * h * k1r, k2r, k2i, opt);
    ode.rhs(a + 0.5 * h, rho + 0.5 * h * k2r, k3r, k3i, opt);
    ode.rhs(a + h, rho + h * k3r, k4r, k4i, opt);
    rho_out = rho + h / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r);
    int_out = integ + h / 6.0 * (k1i + 2.0 * k2i + 2.0 * k3i + k4i);
  };

  const double dir = a1 > a0 ? 1.0 : -1.0;
  const double span = std::abs(a1 - a0);
  double a = a0, rho = u0.rho, integ = 0.0;
  double h = dir * std::min(span, 0.05 * a0);
  if (path) path->push_back({a0, u0});

  for (int step = 0; step < opt.max_steps; ++step) {
    if ((a1 - a) * dir <= 0.0) break;
    if (std::abs(h) > std::abs(a1 - a)) h = a1 - a;

    double r_full, i_full, r_h1, i_h1, r_h2, i_h2;
    rk4(a, rho, integ, h, r_full, i_full);
    rk4(a, rho, integ, 0.5 * h, r_h1, i_h1);
    rk4(a + 0.5 * h, r_h1, i_h1, 0.5 * h, r_h2, i_h2);

    const double err = std::abs(r_full - r_h2) / 15.0;
    const double scale = opt.tol * std::max(1.0, std::abs(rho));
    if (err <= scale) {
      a += h;
      rho = r_h2 + (r_h2 - r_full) / 15.0;  // local extrapolation
      integ = i_h2 + (i_h2 - i_full) / 15.0;
      if (path) path->push_back({a, GasState{rho, flux / a}});
      if ((a1 - a) * dir <= 0.0) break;
    }
    const double grow = err > 0.0 ? 0.9 * std::pow(scale / err, 0.2) : 2.0;
    h *= std::clamp(grow, 0.2, 2.0);
    if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(a))) {
      throw SolverError("integrate_in_section: step underflow at a = " + std::to_string(a));
    }
  }
  if ((a1 - a) * dir > 1e-14 * span) {
    throw SolverError("integrate_in_section: step budget exhausted");
  }

  res.u = {rho, flux / a1};
  res.pressure_integral = integ;
  if (path && (path->empty() || path->back().first != a1)) path->push_back({a1, res.u});
  return res;
}

/// Piecewise-linear section profile over x used by the x-form of the stationary ODE.
struct SectionOfX {
  std::vector<double> xs;  // strictly increasing nodes
  std::vector<double> as;  // values at nodes; constant extension outside

  double value(double x) const {
    if (xs.empty()) throw UsageError("SectionOfX: empty profile");
    if (x <= xs.front()) return as.front();
    if (x >= xs.back()) return as.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const size_t i = static_cast<size_t>(it - xs.begin());
    const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return as[i - 1] + t * (as[i] - as[i - 1]);
  }
};

/// Integrate the stationary equations in x across a piecewise-linear section.
/// Since a(x) is monotone on each segment, this reduces to the section-variable
/// form segment by segment; a(x) q(x) is constant exactly.
inline std::vector<std::pair<double, GasState>> stationary_integrate(
    const PressureLaw& law, const SectionOfX& a_of_x, double x0, double x1, const GasState& u0,
    const OdeOptions& opt = {}) {
  if (!(x1 > x0)) throw UsageError("stationary_integrate: need x1 > x0");
  if (!is_subsonic(law, u0)) throw DomainError("stationary_integrate: datum not subsonic");

  std::vector<std::pair<double, GasState>> out;
  out.push_back({x0, u0});
  GasState cur = u0;
  double x = x0;
  double a_cur = a_of_x.value(x0);

  // march through the profile's breakpoints
  std::vector<double> cuts;
  for (double xn : a_of_x.xs) {
    if (xn > x0 && xn < x1) cuts.push_back(xn);
  }
  cuts.push_back(x1);

  for (double xn : cuts) {
    const double a_next = a_of_x.value(xn);
    if (a_next != a_cur) {
      std::vector<std::pair<double, GasState>> seg;
      const auto r = integrate_in_section(law, a_cur, a_next, cur, opt, &seg);
      // map section samples back to x along the linear segment
      for (const auto& [asec, u] : seg) {
        const double t = (asec - a_cur) / (a_next - a_cur);
        const double xs = x + t * (xn - x);
        if (xs > out.back().first) out.push_back({xs, u});
      }
      cur = r.u;
    } else {
      cur = GasState{cur.rho, a_cur * cur.q / a_next};
    }
    x = xn;
    a_cur = a_next;
    if (out.back().first < x) out.push_back({x, cur});
  }
  return out;
}

}  // namespace fronttrack
