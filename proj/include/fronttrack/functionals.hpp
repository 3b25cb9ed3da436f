#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "fronttrack/front.hpp"
#include "fronttrack/riemann.hpp"

namespace fronttrack {

/// Coefficient on the interaction potential in Upsilon = V + C0 Q. Unit
/// coefficient is not enough: a below-threshold crossing spends |sigma sigma'|
/// of Q to buy a non-physical front whose jump norm is ~ 2(c/rho - c') |sigma
/// sigma'|, which exceeds the Q loss whenever weights or 1/rho are above one.
/// C0 = 20 dominates the crossing, merge and transport constants over the
/// working box |v|/c <= 0.9, rho in [0.5, 2] with the junction weights <= e.
inline constexpr double kInteractionCoefficient = 20.0;

struct GlimmReport {
  double V = 0.0, Q = 0.0, upsilon = 0.0;
  double C = 0.0;
  double C0 = kInteractionCoefficient;
  std::vector<double> contributions;  // weighted |sigma| per front, front order
  int approaching_pairs = 0;
};

/// Pipe index with junction positions resolved by travel direction: a front
/// sitting exactly on a junction belongs to the pipe it is moving into.
inline size_t pipe_index_directed(const PipeProfile& profile, double x, bool moving_left) {
  if (moving_left) {
    return static_cast<size_t>(std::lower_bound(profile.xs.begin(), profile.xs.end(), x) -
                               profile.xs.begin());
  }
  return profile.pipe_index(x);
}

/// Weighted total wave size V, interaction potential Q, and Upsilon = V + Q.
/// Family-1 fronts are weighted by the section jumps to their left, family-2
/// and non-physical fronts by the jumps to their right.
inline GlimmReport glimm_functionals(const WftState& state, const PipeProfile& profile, double C,
                                     double C0 = kInteractionCoefficient) {
  GlimmReport rep;
  rep.C = C;
  rep.C0 = C0;
  const std::vector<double> cum = profile.cumulative_jumps();
  const double total = cum.back();

  rep.contributions.reserve(state.fronts.size());
  for (const Front& f : state.fronts) {
    const size_t j = pipe_index_directed(profile, f.x, f.speed < 0.0);
    const double sum = f.family == WaveFamily::One ? cum[j] : total - cum[j];
    const double w = std::exp(C * sum);
    const double c = w * std::abs(f.sigma);
    rep.contributions.push_back(c);
    rep.V += c;
  }

  const auto& fr = state.fronts;
  for (size_t a = 0; a < fr.size(); ++a) {
    for (size_t b = a + 1; b < fr.size(); ++b) {
      const Front &fa = fr[a], &fb = fr[b];
      bool approach = false;
      const bool pa = is_physical(fa.family), pb = is_physical(fb.family);
      if (pa && pb) {
        if (fa.family != fb.family) {
          // list is ordered in x: approaching iff the 2-wave sits left of the 1-wave
          approach = fa.family == WaveFamily::Two && fb.family == WaveFamily::One;
        } else {
          approach = std::min(fa.sigma, fb.sigma) < 0.0;
        }
      } else if (pa != pb) {
        // non-physical fronts approach every physical front to their right
        approach = !pa;  // fa non-physical, fb physical, and fb is right of fa
      }
      if (approach) {
        rep.Q += std::abs(fa.sigma) * std::abs(fb.sigma);
        ++rep.approaching_pairs;
      }
    }
  }
  rep.upsilon = rep.V + C0 * rep.Q;
  return rep;
}

/// Weight constant and admissibility verdict for the Glimm machinery.
struct WeightChoice {
  double C = 0.0;
  double delta = 0.5;
  bool tv_ok = false, jump_ok = false, delta_ok = true, c_vs_k3_ok = false;
  double tv_bound = 0.0;
  double max_jump_bound = 0.0;
  bool admissible() const { return tv_ok && jump_ok && delta_ok && c_vs_k3_ok; }
  std::string describe() const {
    std::string s;
    if (!tv_ok) s += "TV(a) not below 1/(4(K1+K2)e); ";
    if (!jump_ok) s += "a jump exceeds ln2/K2; ";
    if (!delta_ok) s += "delta not < 1; ";
    if (!c_vs_k3_ok) s += "C not > 2 K3; ";
    return s.empty() ? "admissible" : s;
  }
};

inline WeightChoice choose_weight_constant(const PipeProfile& profile, double K1, double K2,
                                           double K3, double delta = 0.5) {
  const double tv = profile.tv();
  if (!(tv > 0.0)) throw UsageError("choose_weight_constant: TV(a) must be positive");
  WeightChoice w;
  w.C = 1.0 / tv;
  w.delta = delta;
  w.tv_bound = 1.0 / (4.0 * (K1 + K2) * std::exp(1.0));
  w.max_jump_bound = std::log(2.0) / K2;
  w.tv_ok = tv < w.tv_bound;
  w.jump_ok = profile.max_jump() <= w.max_jump_bound;
  w.delta_ok = delta < 1.0;
  w.c_vs_k3_ok = w.C > 2.0 * K3;
  return w;
}

namespace detail {

inline PiecewiseState to_piecewise(const WftState& s) {
  struct Cut {
    double x;
    GasState right;
  };
  std::vector<Cut> cuts;
  cuts.reserve(s.fronts.size() + s.traces.size());
  size_t fi = 0, ti = 0;
  while (fi < s.fronts.size() || ti < s.traces.size()) {
    const bool take_front =
        ti >= s.traces.size() ||
        (fi < s.fronts.size() && s.fronts[fi].x <= s.traces[ti].x);
    if (take_front) {
      cuts.push_back({s.fronts[fi].x, s.fronts[fi].right});
      ++fi;
    } else {
      cuts.push_back({s.traces[ti].x, s.traces[ti].plus});
      ++ti;
    }
  }
  PiecewiseState p;
  p.states.push_back(s.far_left);
  for (const Cut& c : cuts) {
    p.xs.push_back(c.x);
    p.states.push_back(c.right);
  }
  return p;
}

}  // namespace detail

/// Weighted L1-type distance between two front-tracking states over the same
/// profile: cell-wise wave strengths from the exact Riemann solver, weighted by
/// the approaching mass and the two Glimm functionals.
inline double phi_distance(const PressureLaw& law, const PipeProfile& profile,
                           const WftState& s1, const WftState& s2, double C, double kappa1,
                           double kappa2, double window_lo, double window_hi) {
  const double ups = glimm_functionals(s1, profile, C).upsilon +
                     glimm_functionals(s2, profile, C).upsilon;
  const PiecewiseState p1 = detail::to_piecewise(s1);
  const PiecewiseState p2 = detail::to_piecewise(s2);

  std::vector<double> cuts{window_lo, window_hi};
  for (double x : p1.xs)
    if (x > window_lo && x < window_hi) cuts.push_back(x);
  for (double x : p2.xs)
    if (x > window_lo && x < window_hi) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());

  auto approaching_mass = [&](double x, int family, double strength) {
    // waves of both states in the pipe containing x
    const size_t pipe = profile.pipe_index(x);
    double mass = 0.0;
    for (const WftState* s : {&s1, &s2}) {
      for (const Front& f : s->fronts) {
        if (!is_physical(f.family)) continue;
        if (profile.pipe_index(f.x) != pipe) continue;
        const int k = static_cast<int>(f.family);
        if ((f.x < x && k > family) || (f.x > x && k < family)) mass += std::abs(f.sigma);
      }
    }
    // same-family term: which solution's waves count on which side flips with
    // the sign of the connecting strength
    const WftState& lo_side = strength < 0.0 ? s1 : s2;
    const WftState& hi_side = strength < 0.0 ? s2 : s1;
    for (const Front& f : lo_side.fronts) {
      if (is_physical(f.family) && static_cast<int>(f.family) == family && f.x < x &&
          profile.pipe_index(f.x) == pipe)
        mass += std::abs(f.sigma);
    }
    for (const Front& f : hi_side.fronts) {
      if (is_physical(f.family) && static_cast<int>(f.family) == family && f.x > x &&
          profile.pipe_index(f.x) == pipe)
        mass += std::abs(f.sigma);
    }
    return mass;
  };

  double phi = 0.0;
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double w = cuts[k + 1] - cuts[k];
    if (w <= 0.0) continue;
    const double xm = 0.5 * (cuts[k] + cuts[k + 1]);
    const GasState a = p1.at(xm), b = p2.at(xm);
    const RiemannFan fan = solve_riemann(law, a, b);
    const double strengths[2] = {fan.sigma1, fan.sigma2};
    for (int i = 0; i < 2; ++i) {
      if (strengths[i] == 0.0) continue;
      const double weight =
          1.0 + kappa1 * approaching_mass(xm, i + 1, strengths[i]) + kappa1 * kappa2 * ups;
      phi += w * std::abs(strengths[i]) * weight;
    }
  }
  return phi;
}

/// Smooth compactly-supported space-time bump with analytic derivatives.
class TestBump {
 public:
  TestBump(double t0, double rt, double x0, double rx) : t0_(t0), rt_(rt), x0_(x0), rx_(rx) {}

  double t_lo() const { return t0_ - rt_; }
  double t_hi() const { return t0_ + rt_; }
  double x_lo() const { return x0_ - rx_; }
  double x_hi() const { return x0_ + rx_; }

  double value(double t, double x) const { return mollifier((t - t0_) / rt_) * mollifier((x - x0_) / rx_); }
  double dt(double t, double x) const {
    return dmollifier((t - t0_) / rt_) / rt_ * mollifier((x - x0_) / rx_);
  }
  double dx(double t, double x) const {
    return mollifier((t - t0_) / rt_) * dmollifier((x - x0_) / rx_) / rx_;
  }

 private:
  static double mollifier(double s) {
    const double z = 1.0 - s * s;
    return z > 0.0 ? std::exp(1.0 - 1.0 / z) : 0.0;
  }
  static double dmollifier(double s) {
    const double z = 1.0 - s * s;
    if (z <= 0.0) return 0.0;
    return std::exp(1.0 - 1.0 / z) * (-2.0 * s / (z * z));
  }
  double t0_, rt_, x0_, rx_;
};

}  // namespace fronttrack
