#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "fronttrack/engine.hpp"

namespace fronttrack {

namespace residual_detail {

struct Strip {
  GasState u;
  // linear-in-time strip boundaries
  double xl0, xl_slope, xr0, xr_slope, t0;
  double xl(double t) const { return xl0 + xl_slope * (t - t0); }
  double xr(double t) const { return xr0 + xr_slope * (t - t0); }
};

/// Tensor-midpoint integral of g over the space-time trapezoid of one strip
/// clipped to [x_lo, x_hi] x [ta, tb], refined until stable. The absolute
/// stopping tolerance matters: the cell integrals cancel almost completely in
/// the weak form, so per-cell errors must be controlled absolutely.
template <typename G>
double cell_integral(const Strip& st, double ta, double tb, double x_lo, double x_hi, G&& g) {
  auto eval_n = [&](int n) {
    const double dt = (tb - ta) / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t = ta + (i + 0.5) * dt;
      const double lo = std::max(st.xl(t), x_lo);
      const double hi = std::min(st.xr(t), x_hi);
      if (hi <= lo) continue;
      const double dx = (hi - lo) / n;
      for (int k = 0; k < n; ++k) {
        const double x = lo + (k + 0.5) * dx;
        acc += g(t, x, st.u) * dt * dx;
      }
    }
    return acc;
  };
  double prev = eval_n(4);
  for (int n = 8; n <= 512; n *= 2) {
    const double cur = eval_n(n);
    if (std::abs(cur - prev) <= 1e-13 + 1e-10 * std::abs(cur)) return cur;
    prev = cur;
  }
  return prev;
}

/// Integrate a pair of integrands over the support of the bump across the
/// timeline's space-time cells (strips between front trajectories, slabs
/// between events).
template <typename G1, typename G2>
std::pair<double, double> spacetime_integral(const Timeline& tl, const TestBump& bump, G1&& g1,
                                             G2&& g2) {
  const double t_lo = std::max(bump.t_lo(), 0.0);
  const double t_hi = std::min(bump.t_hi(), tl.ctx.params.t_end);
  if (!(t_hi > t_lo)) throw UsageError("residual: bump time support outside the run window");

  std::vector<double> slabs{t_lo, t_hi};
  for (const WftState& s : tl.snapshots) {
    if (s.t > t_lo && s.t < t_hi) slabs.push_back(s.t);
  }
  std::sort(slabs.begin(), slabs.end());
  slabs.erase(std::unique(slabs.begin(), slabs.end()), slabs.end());

  double i1 = 0.0, i2 = 0.0;
  const double max_dt = (t_hi - t_lo) / 48.0;
  for (size_t k = 0; k + 1 < slabs.size(); ++k) {
    const int pieces = std::max(1, (int)std::ceil((slabs[k + 1] - slabs[k]) / max_dt));
    for (int p = 0; p < pieces; ++p) {
      const double ta = slabs[k] + (slabs[k + 1] - slabs[k]) * p / pieces;
      const double tb = slabs[k] + (slabs[k + 1] - slabs[k]) * (p + 1) / pieces;

      // prevailing snapshot for this slab
      const WftState* snap = &tl.snapshots.front();
      for (const WftState& s : tl.snapshots) {
        if (s.t <= ta + 1e-15) snap = &s;
      }

      // strips between front trajectories, cut to the bump's x-range
      std::vector<Strip> strips;
      const double big = 1e30;
      GasState cur = snap->far_left;
      double xl = -big, sl = 0.0;
      auto push = [&](double xr0, double sr, const GasState& u, double xr_at) {
        Strip st;
        st.u = u;
        st.t0 = snap->t;
        st.xl0 = xl;
        st.xl_slope = sl;
        st.xr0 = xr0;
        st.xr_slope = sr;
        strips.push_back(st);
        xl = xr0;
        sl = sr;
        (void)xr_at;
      };
      size_t fi = 0, ti = 0;
      while (fi < snap->fronts.size() || ti < snap->traces.size()) {
        const bool take_front = ti >= snap->traces.size() ||
                                (fi < snap->fronts.size() &&
                                 snap->fronts[fi].x <= snap->traces[ti].x);
        if (take_front) {
          const Front& f = snap->fronts[fi];
          push(f.x, f.speed, cur, 0);
          cur = f.right;
          ++fi;
        } else {
          push(snap->traces[ti].x, 0.0, cur, 0);
          cur = snap->traces[ti].plus;
          ++ti;
        }
      }
      {
        Strip st;
        st.u = cur;
        st.t0 = snap->t;
        st.xl0 = xl;
        st.xl_slope = sl;
        st.xr0 = big;
        st.xr_slope = 0.0;
        strips.push_back(st);
      }

      for (const Strip& st : strips) {
        if (std::min(st.xr(ta), st.xr(tb)) < bump.x_lo()) continue;
        if (std::max(st.xl(ta), st.xl(tb)) > bump.x_hi()) continue;
        i1 += cell_integral(st, ta, tb, bump.x_lo(), bump.x_hi(),
                            [&](double t, double x, const GasState& u) { return g1(t, x, u); });
        i2 += cell_integral(st, ta, tb, bump.x_lo(), bump.x_hi(),
                            [&](double t, double x, const GasState& u) { return g2(t, x, u); });
      }
    }
  }
  return {i1, i2};
}

inline double section_on_support(const Timeline& tl, const TestBump& bump) {
  const PipeProfile& prof = tl.ctx.profile;
  for (double xj : prof.xs) {
    if (xj > bump.x_lo() - 1e-12 && xj < bump.x_hi() + 1e-12) {
      throw UsageError("residual: test-function support must not meet a junction");
    }
  }
  return prof.section_at(0.5 * (bump.x_lo() + bump.x_hi()));
}

}  // namespace residual_detail

/// Max component magnitude of the weak-form space-time integral against the bump.
inline double weak_residual(const Timeline& tl, const TestBump& bump) {
  const PressureLaw& law = tl.ctx.law;
  const double a = residual_detail::section_on_support(tl, bump);
  auto [i1, i2] = residual_detail::spacetime_integral(
      tl, bump,
      [&](double t, double x, const GasState& u) {
        return a * (u.rho * bump.dt(t, x) + u.q * bump.dx(t, x));
      },
      [&](double t, double x, const GasState& u) {
        return a * (u.q * bump.dt(t, x) + momentum_flux(law, u) * bump.dx(t, x));
      });
  return std::max(std::abs(i1), std::abs(i2));
}

/// Entropy inequality integral: nonnegative for entropy solutions up to the
/// O(eps) defect of the rarefaction fans.
inline double entropy_residual(const Timeline& tl, const TestBump& bump) {
  const PressureLaw& law = tl.ctx.law;
  const double a = residual_detail::section_on_support(tl, bump);
  auto [i1, i2] = residual_detail::spacetime_integral(
      tl, bump,
      [&](double t, double x, const GasState& u) {
        auto [e, f] = entropy_pair(law, u);
        return a * (e * bump.dt(t, x) + f * bump.dx(t, x));
      },
      [&](double, double, const GasState&) { return 0.0; });
  (void)i2;
  return i1;
}

struct IntegralConditionRow {
  double h;
  double value;  // (1/h) * L1 distance over [xi - h lhat, xi + h lhat]
};

struct IntegralConditionReport {
  std::vector<IntegralConditionRow> rows;
  bool junction_centered = false;
  bool decreasing = false;
};

/// Sampled check of the local Riemann-structure condition: compare u(tau + h)
/// against the (junction-aware) self-similar solution launched from the traces
/// at (tau, xi).
inline IntegralConditionReport integral_condition_check(const Timeline& tl, double tau,
                                                        double xi,
                                                        const std::vector<double>& hs) {
  const PressureLaw& law = tl.ctx.law;
  const PipeProfile& prof = tl.ctx.profile;
  const double lhat = tl.ctx.params.lambda_hat;

  IntegralConditionReport rep;
  const PiecewiseState at_tau = tl.sample(tau);
  const GasState ul = at_tau.at(xi - 1e-11);
  const GasState ur = at_tau.at(xi + 1e-11);

  int jidx = -1;
  for (size_t j = 0; j < prof.xs.size(); ++j) {
    if (std::abs(prof.xs[j] - xi) < 1e-11) jidx = static_cast<int>(j);
  }
  rep.junction_centered = jidx >= 0;

  // self-similar reference sampler in the slope variable
  std::vector<Wave> left_waves, right_waves;
  auto inside_wedge = [&law](const Wave& w, double s) {
    double lo = 0.0, hi = w.sigma;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      const GasState um = lax_curve(law, w.family, w.left, mid);
      (characteristic_speed(law, w.family, um) < s ? lo : hi) = mid;
    }
    return lax_curve(law, w.family, w.left, 0.5 * (lo + hi));
  };
  GasState trace_m = ul, trace_p = ur;
  if (jidx >= 0) {
    const JunctionFan jf = solve_junction_riemann(tl.ctx.claw, law, prof.as[jidx], ul,
                                                  prof.as[jidx + 1], ur, tl.ctx.box, tl.ctx.ode);
    left_waves = jf.left_waves;
    right_waves = jf.right_waves;
    trace_m = jf.trace_minus;
    trace_p = jf.trace_plus;
  } else {
    const RiemannFan rf = solve_riemann(law, ul, ur);
    for (const Wave& w : rf.waves) (w.speed_hi <= 0.0 ? left_waves : right_waves).push_back(w);
    trace_m = trace_p = rf.middle;
  }
  auto ref_at_slope = [&](double s) -> GasState {
    GasState u = ul;
    for (const Wave& w : left_waves) {
      if (s < w.speed_lo) return u;
      if (s < w.speed_hi) return inside_wedge(w, s);
      u = w.right;
    }
    if (jidx >= 0) {
      if (s < 0.0) return u;  // u == trace_minus here
      u = trace_p;
    }
    for (const Wave& w : right_waves) {
      if (s < w.speed_lo) return u;
      if (s < w.speed_hi) return inside_wedge(w, s);
      u = w.right;
    }
    return u;
  };
  (void)trace_m;

  for (double h : hs) {
    if (!(h > 0.0) || tau + h > tl.ctx.params.t_end + 1e-12) continue;
    const PiecewiseState now = tl.sample(tau + h);
    const double lo = xi - h * lhat, hi = xi + h * lhat;
    std::vector<double> cuts{lo, hi};
    for (double x : now.xs)
      if (x > lo && x < hi) cuts.push_back(x);
    for (const Wave& w : left_waves) {
      for (double s : {w.speed_lo, w.speed_hi}) {
        const double x = xi + s * h;
        if (x > lo && x < hi) cuts.push_back(x);
      }
    }
    for (const Wave& w : right_waves) {
      for (double s : {w.speed_lo, w.speed_hi}) {
        const double x = xi + s * h;
        if (x > lo && x < hi) cuts.push_back(x);
      }
    }
    if (xi > lo && xi < hi) cuts.push_back(xi);
    std::sort(cuts.begin(), cuts.end());

    double acc = 0.0;
    for (size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double w = cuts[k + 1] - cuts[k];
      if (w <= 0.0) continue;
      // subdivide: the reference may vary smoothly inside rarefaction wedges
      const int sub = 8;
      for (int m = 0; m < sub; ++m) {
        const double x = cuts[k] + (m + 0.5) * w / sub;
        const GasState u = now.at(x);
        const GasState r = ref_at_slope((x - xi) / h);
        acc += (std::abs(u.rho - r.rho) + std::abs(u.q - r.q)) * w / sub;
      }
    }
    rep.rows.push_back({h, acc / h});
  }

  rep.decreasing = true;
  for (size_t k = 0; k + 1 < rep.rows.size(); ++k) {
    if (rep.rows[k + 1].value > rep.rows[k].value + 1e-12) rep.decreasing = false;
  }
  // rows are ordered as given; callers pass decreasing h sequences
  return rep;
}

}  // namespace fronttrack
