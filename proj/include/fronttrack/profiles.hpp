#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "fronttrack/junction.hpp"

namespace fronttrack {

/// Piecewise-constant pipe section: n junctions at x_1 < ... < x_n separating
/// n+1 constant section values a_0, ..., a_n.
struct PipeProfile {
  std::vector<double> xs;  // junction positions
  std::vector<double> as;  // section values, size xs.size() + 1
  double a_ref = 1.0;
  double delta = 0.25;

  void validate() const {
    if (as.size() != xs.size() + 1) throw ConfigError("PipeProfile: need one more value than jump");
    for (size_t i = 1; i < xs.size(); ++i) {
      if (!(xs[i] > xs[i - 1])) throw ConfigError("PipeProfile: junctions must be increasing");
    }
    for (double a : as) {
      if (!(a > 0.0)) throw ConfigError("PipeProfile: sections must be positive");
    }
  }

  bool in_range() const {
    return std::all_of(as.begin(), as.end(),
                       [&](double a) { return a > a_ref - delta && a < a_ref + delta; });
  }

  size_t junction_count() const { return xs.size(); }

  double tv() const {
    double s = 0.0;
    for (size_t j = 1; j < as.size(); ++j) s += std::abs(as[j] - as[j - 1]);
    return s;
  }

  double max_jump() const {
    double m = 0.0;
    for (size_t j = 1; j < as.size(); ++j) m = std::max(m, std::abs(as[j] - as[j - 1]));
    return m;
  }

  /// Index j of the pipe I_j containing x (junction positions belong to the right pipe).
  size_t pipe_index(double x) const {
    return static_cast<size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
  }

  double section_at(double x) const { return as[pipe_index(x)]; }

  /// cumulative_jumps()[j] = sum of |a_h - a_{h-1}| for h = 1..j.
  std::vector<double> cumulative_jumps() const {
    std::vector<double> c(as.size(), 0.0);
    for (size_t j = 1; j < as.size(); ++j) c[j] = c[j - 1] + std::abs(as[j] - as[j - 1]);
    return c;
  }
};

/// Continuous piecewise-linear section on [-X, X], constant outside.
struct SmoothProfile {
  std::vector<double> xs;  // strictly increasing nodes, xs.front() = -X, xs.back() = X
  std::vector<double> as;  // values at the nodes

  void validate() const {
    if (xs.size() < 2 || as.size() != xs.size()) throw ConfigError("SmoothProfile: bad node data");
    for (size_t i = 1; i < xs.size(); ++i) {
      if (!(xs[i] > xs[i - 1])) throw ConfigError("SmoothProfile: nodes must be increasing");
    }
    for (double a : as) {
      if (!(a > 0.0)) throw ConfigError("SmoothProfile: sections must be positive");
    }
  }

  double extent() const { return std::max(std::abs(xs.front()), std::abs(xs.back())); }

  double value(double x) const {
    SectionOfX s{xs, as};
    return s.value(x);
  }

  double tv() const {
    double s = 0.0;
    for (size_t i = 1; i < as.size(); ++i) s += std::abs(as[i] - as[i - 1]);
    return s;
  }
};

/// Admissible bound on TV(a) for the isothermal law, as a function of the
/// velocity-to-sound ratio. Weakly decreasing; vanishes toward the sonic line.
inline double bound_M(const PressureLaw& law, double a_ref, double vbar_over_c) {
  if (!law.is_isothermal()) {
    throw UsageError("bound_M: closed form is isothermal-only; use bound_M_general");
  }
  if (!(vbar_over_c >= 0.0 && vbar_over_c < 1.0)) {
    throw DomainError("bound_M: need 0 <= vbar/c < 1");
  }
  const double base = a_ref / (4.0 * std::exp(1.0));
  const double s2 = vbar_over_c * vbar_over_c;
  if (s2 <= 0.5) return base;
  return base * (1.0 - s2) / s2;
}

/// TV(a) bound from the interaction coefficients, any pressure law.
inline double bound_M_general(const PressureLaw& law, double a_ref, const GasState& u,
                              double dsigma_da) {
  if (!is_subsonic(law, u)) throw DomainError("bound_M_general: state not subsonic");
  const JunctionCoeffs k = first_order_coeffs(law, a_ref, u, dsigma_da);
  return 1.0 / (4.0 * (k.K1 + k.K2) * std::exp(1.0));
}

/// Leading-order amplification coefficient of a 2-wave crossing an up-down
/// section pair, as a function of xi = vbar/c.
inline double kgrande(double xi) {
  if (!(xi >= 0.0 && xi < 1.0)) throw DomainError("kgrande: need 0 <= xi < 1");
  const double x2 = xi * xi;
  const double num = -1.0 + x2 * (8.0 + x2 * (-7.0 + 2.0 * x2));
  const double den = 2.0 * std::pow(1.0 - xi, 3) * std::pow(1.0 + xi, 3);
  return num / den;
}

/// Staircase approximation of a W^{1,1} section: cell-averaged derivative on a
/// mesh of width <= 1/n, accumulated into a piecewise-linear interpolant, with
/// junctions at cell midpoints. Endpoint values are preserved exactly.
struct PcApproximation {
  PipeProfile profile;
  SmoothProfile alpha_n;  // the accumulated piecewise-linear surrogate
};

inline PcApproximation pc_approximate(const SmoothProfile& smooth, int n) {
  smooth.validate();
  if (n < 1) throw DomainError("pc_approximate: need n >= 1");

  const double X0 = smooth.xs.front(), X1 = smooth.xs.back();
  const double span = X1 - X0;
  const int cells = std::max(1, static_cast<int>(std::ceil(span * n - 1e-12)));
  const double h = span / cells;

  PcApproximation out;
  // alpha_n interpolates the profile at the mesh nodes: cell-averaging a' over
  // each cell and integrating reproduces exactly the node values.
  for (int i = 0; i <= cells; ++i) {
    const double x = X0 + i * h;
    out.alpha_n.xs.push_back(x);
    out.alpha_n.as.push_back(smooth.value(x));
  }

  out.profile.as.push_back(smooth.as.front());
  for (int i = 0; i < cells; ++i) {
    const double mid = X0 + (i + 0.5) * h;
    const double value_right = out.alpha_n.as[static_cast<size_t>(i) + 1];
    if (value_right != out.profile.as.back()) {
      out.profile.xs.push_back(mid);
      out.profile.as.push_back(value_right);
    }
  }
  out.profile.a_ref = 0.5 * (*std::max_element(out.profile.as.begin(), out.profile.as.end()) +
                             *std::min_element(out.profile.as.begin(), out.profile.as.end()));
  out.profile.delta = 0.25 * out.profile.a_ref;
  out.profile.validate();
  return out;
}

/// Piecewise-constant stationary solution across the profile: iterate the
/// transfer map junction by junction from the left datum.
struct StationaryHat {
  std::vector<GasState> states;  // one per pipe, size junction_count() + 1
  double tv_hat = 0.0;           // sum over junctions of |rho jump| + |q jump|
  double ratio = 0.0;            // tv_hat / TV(a)
  double lipschitz_estimate = 0.0;  // max per-junction ||T(u) - u|| / |da|
};

inline StationaryHat hat_stationary(const PressureLaw& law, const CouplingLaw& claw,
                                    const PipeProfile& profile, const GasState& u_left,
                                    const JunctionBox& box = {}, const OdeOptions& opt = {}) {
  profile.validate();
  if (!is_subsonic(law, u_left)) throw DomainError("hat_stationary: datum not subsonic");

  StationaryHat hat;
  hat.states.push_back(u_left);
  for (size_t j = 1; j < profile.as.size(); ++j) {
    GasState next;
    try {
      next = t_map(claw, law, profile.as[j - 1], profile.as[j], hat.states.back(), box, opt);
    } catch (const Error& e) {
      throw SolverError("hat_stationary: junction " + std::to_string(j) + ": " + e.what());
    }
    const double da = std::abs(profile.as[j] - profile.as[j - 1]);
    const double jump = std::abs(next.rho - hat.states.back().rho) +
                        std::abs(next.q - hat.states.back().q);
    hat.tv_hat += jump;
    if (da > 0.0) hat.lipschitz_estimate = std::max(hat.lipschitz_estimate, jump / da);
    hat.states.push_back(next);
  }
  const double tva = profile.tv();
  hat.ratio = tva > 0.0 ? hat.tv_hat / tva : 0.0;
  return hat;
}

}  // namespace fronttrack
