#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "fronttrack/lax.hpp"

namespace fronttrack {

/// One wave of a Riemann fan: the jump from `left` to `right` of the given family.
struct Wave {
  WaveFamily family;
  double sigma;
  GasState left, right;
  double speed_lo, speed_hi;  // equal for shocks; [lambda(l), lambda(r)] for rarefactions
};

struct RiemannFan {
  GasState left, right, middle;
  double sigma1 = 0.0, sigma2 = 0.0;
  std::vector<Wave> waves;
};

namespace detail {

/// Root-find data for the scalar reduction of the Riemann problem: the density
/// parametrization pins sigma2 = rho_r - rho_m, leaving one unknown sigma1.
template <typename MiddleMap>
double solve_sigma1(const PressureLaw& law, const GasState& u_l, const GasState& u_r,
                    MiddleMap&& middle_of, const char* what) {
  const double scale = std::max({1.0, std::abs(u_r.q), std::abs(u_l.q)});
  const double tol = 1e-13 * scale;

  auto residual = [&](double s1) {
    const GasState m = middle_of(s1);
    const double s2 = u_r.rho - m.rho;
    const GasState out = lax_curve(law, WaveFamily::Two, m, s2);
    return out.q - u_r.q;
  };

  // The q-mismatch is strictly increasing in sigma1, so bracket then refine.
  double lo = 0.0, hi = 0.0, flo, fhi;
  const double f0 = residual(0.0);
  if (std::abs(f0) <= tol) return 0.0;
  double step = 1e-3 * u_l.rho;
  if (f0 > 0.0) {
    hi = 0.0;
    fhi = f0;
    lo = -step;
    for (int k = 0; k < 200; ++k) {
      flo = residual(lo);
      if (flo <= 0.0) break;
      hi = lo;
      fhi = flo;
      step *= 2.0;
      lo -= step;
    }
    if (flo > 0.0) throw SolverError(std::string(what) + ": no bracket (sigma1 low)");
  } else {
    lo = 0.0;
    flo = f0;
    hi = step;
    for (int k = 0; k < 200; ++k) {
      const double cap = u_l.rho - 2.0 * kDensityFloor;
      if (hi > cap) {
        hi = cap;
        fhi = residual(hi);
        if (fhi < 0.0)
          throw VacuumError(std::string(what) + ": middle density reaches the vacuum floor");
        break;
      }
      fhi = residual(hi);
      if (fhi >= 0.0) break;
      lo = hi;
      flo = fhi;
      step *= 2.0;
      hi += step;
    }
    if (fhi < 0.0) throw SolverError(std::string(what) + ": no bracket (sigma1 high)");
  }

  // Newton with finite-difference slope, clipped to the bracket; bisect on stall.
  double s = 0.5 * (lo + hi);
  double fs = residual(s);
  for (int it = 0; it < 200; ++it) {
    if (std::abs(fs) <= tol) return s;
    if (fs > 0.0) {
      hi = s;
    } else {
      lo = s;
    }
    const double h = 1e-7 * std::max(1.0, std::abs(s));
    const double slope = (residual(s + h) - fs) / h;
    double snew = slope != 0.0 ? s - fs / slope : 0.5 * (lo + hi);
    if (!(snew > lo && snew < hi)) snew = 0.5 * (lo + hi);
    s = snew;
    fs = residual(s);
  }
  throw SolverError(std::string(what) + ": root finder did not converge, |residual| = " +
                    std::to_string(std::abs(fs)));
}

inline Wave make_wave(const PressureLaw& law, WaveFamily family, const GasState& l,
                      const GasState& r, double sigma) {
  Wave w;
  w.family = family;
  w.sigma = sigma;
  w.left = l;
  w.right = r;
  if (sigma < 0.0) {
    w.speed_lo = w.speed_hi = rankine_hugoniot_speed(l, r);
  } else {
    w.speed_lo = characteristic_speed(law, family, l);
    w.speed_hi = characteristic_speed(law, family, r);
  }
  return w;
}

}  // namespace detail

/// Exact solution of the Riemann problem (u_l, u_r) for the homogeneous p-system.
inline RiemannFan solve_riemann(const PressureLaw& law, const GasState& u_l,
                                const GasState& u_r) {
  check_density(u_l.rho, "solve_riemann(left)");
  check_density(u_r.rho, "solve_riemann(right)");

  RiemannFan fan;
  fan.left = u_l;
  fan.right = u_r;

  const double scale = std::max({1.0, std::abs(u_l.q), std::abs(u_r.q)});
  if (std::abs(u_l.rho - u_r.rho) < 1e-14 * u_l.rho && std::abs(u_l.q - u_r.q) < 1e-14 * scale) {
    fan.middle = u_l;
    return fan;
  }

  const double s1 = detail::solve_sigma1(
      law, u_l, u_r, [&](double s) { return lax_curve(law, WaveFamily::One, u_l, s); },
      "solve_riemann");
  const GasState m = lax_curve(law, WaveFamily::One, u_l, s1);
  const double s2 = u_r.rho - m.rho;

  fan.sigma1 = s1;
  fan.sigma2 = s2;
  fan.middle = m;
  if (std::abs(s1) > 0.0) fan.waves.push_back(detail::make_wave(law, WaveFamily::One, u_l, m, s1));
  if (std::abs(s2) > 0.0) {
    const GasState r2 = lax_curve(law, WaveFamily::Two, m, s2);
    fan.waves.push_back(detail::make_wave(law, WaveFamily::Two, m, r2, s2));
  }
  return fan;
}

/// Split a rarefaction of size sigma > 0 into jumps of size at most eps, each
/// traveling at the characteristic speed of its right state.
inline std::vector<Wave> rarefaction_fan(const PressureLaw& law, WaveFamily family,
                                         const GasState& u0, double sigma, double eps) {
  if (!is_physical(family)) throw UsageError("rarefaction_fan: non-physical family");
  if (sigma < 0.0) throw UsageError("rarefaction_fan: shock-branch sigma");
  if (!(eps > 0.0)) throw UsageError("rarefaction_fan: fan step must be positive");

  std::vector<Wave> pieces;
  if (sigma == 0.0) return pieces;
  const int n = static_cast<int>(std::ceil(sigma / eps - 1e-12));
  GasState cur = u0;
  double done = 0.0;
  for (int k = 0; k < n; ++k) {
    const double step = (k + 1 < n) ? eps : sigma - done;
    const GasState nxt = lax_curve(law, family, cur, step);
    pieces.push_back(detail::make_wave(law, family, cur, nxt, step));
    cur = nxt;
    done += step;
  }
  return pieces;
}

/// Value of the self-similar fan solution at slope xi = x/t.
inline GasState sample_fan(const PressureLaw& law, const RiemannFan& fan, double xi) {
  GasState u = fan.left;
  for (const Wave& w : fan.waves) {
    if (w.sigma < 0.0) {
      if (xi < w.speed_lo) return u;
      u = w.right;
    } else {
      if (xi < w.speed_lo) return u;
      if (xi < w.speed_hi) {
        // inside the rarefaction: solve lambda_family(state) = xi along the curve
        double lo = 0.0, hi = w.sigma;
        for (int it = 0; it < 80; ++it) {
          const double mid = 0.5 * (lo + hi);
          const GasState um = lax_curve(law, w.family, w.left, mid);
          (characteristic_speed(law, w.family, um) < xi ? lo : hi) = mid;
        }
        return lax_curve(law, w.family, w.left, 0.5 * (lo + hi));
      }
      u = w.right;
    }
  }
  return u;
}

}  // namespace fronttrack
