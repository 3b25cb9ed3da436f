#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "fronttrack/experiments.hpp"

namespace fronttrack {

// ---------------------------------------------------------------------------
// amplification: a 2-wave through repeated up-down section pairs

struct AmplifyOptions {
  double vbar_over_c = 0.9;
  double da_over_a = 0.01;
  int repeats = 10;
  double sigma2 = -1e-4;  // incoming size at the first pair (shock by default)
  double a_ref = 1.0;
  double rho_ref = 1.0;
  double sound_speed = 1.0;
  std::vector<double> fit_thetas = {1e-2, 5e-3, 2.5e-3};
  double fit_sigma = -1e-5;
};

struct PairCrossing {
  int pair = 0;
  double sigma_in = 0.0, sigma_mid = 0.0, sigma_out = 0.0;
  double ratio = 0.0;  // |sigma_out / sigma_in|
};

struct AmplifyReport {
  std::vector<PairCrossing> crossings;
  std::vector<std::pair<double, double>> khat_by_theta;  // (theta, (r-1)/theta^2)
  double khat = 0.0;                                     // Richardson extrapolation
  double kgrande_value = 0.0;
  double rel_err_vs_kgrande = 0.0;
  bool attenuates = false;
  int pairs_to_double = -1;
  double predicted_pairs_to_double = 0.0;  // from (1 + K theta^2)^m with K = kgrande
  bool regime_breakdown = false;
  int breakdown_pair = -1;
  std::string breakdown_what;
};

namespace amplify_detail {

struct TrackedWave {
  double sigma;
  GasState behind;  // left state of the 2-wave
  GasState entry;   // stationary state ahead of it
};

/// Send the wave across one junction a_from -> a_to sitting in a stationary
/// background; returns the transmitted 2-wave and the new stationary state.
inline TrackedWave cross_junction(const CouplingLaw& claw, const PressureLaw& law, double a_from,
                                  double a_to, const TrackedWave& w, const JunctionBox& box,
                                  const OdeOptions& ode) {
  const GasState ahead_hat = t_map(claw, law, a_from, a_to, w.entry, box, ode);
  const JunctionFan fan =
      solve_junction_riemann(claw, law, a_from, w.behind, a_to, ahead_hat, box, ode);
  TrackedWave out;
  out.sigma = fan.sigma2;
  out.behind = fan.trace_plus;
  out.entry = ahead_hat;
  return out;
}

inline double pair_ratio(const CouplingLaw& claw, const PressureLaw& law, double a, double theta,
                         double sigma, const GasState& entry, const JunctionBox& box,
                         const OdeOptions& ode, double* sigma_mid = nullptr) {
  TrackedWave w;
  w.sigma = sigma;
  w.entry = entry;
  w.behind = lax_curve_from_right(law, WaveFamily::Two, entry, sigma);
  const TrackedWave mid = cross_junction(claw, law, a, a * (1.0 + theta), w, box, ode);
  if (sigma_mid) *sigma_mid = mid.sigma;
  const TrackedWave out = cross_junction(claw, law, a * (1.0 + theta), a, mid, box, ode);
  return std::abs(out.sigma / sigma);
}

}  // namespace amplify_detail

inline AmplifyReport amplification_experiment(const PressureLaw& law, const AmplifyOptions& opt,
                                              const CouplingLaw& claw
                                              = CouplingLaw::smooth_section(),
                                              const JunctionBox& box = {},
                                              const OdeOptions& ode = {}) {
  if (!(opt.vbar_over_c > -1.0 && opt.vbar_over_c < 1.0)) {
    throw DomainError("amplification_experiment: need |vbar/c| < 1");
  }
  AmplifyReport rep;
  const double c = law.sound_speed(opt.rho_ref);
  const GasState ubar{opt.rho_ref, opt.rho_ref * opt.vbar_over_c * c};

  rep.kgrande_value = kgrande(std::abs(opt.vbar_over_c));
  const double growth = 1.0 + rep.kgrande_value * opt.da_over_a * opt.da_over_a;
  rep.predicted_pairs_to_double =
      growth > 1.0 ? std::log(2.0) / std::log(growth) : std::numeric_limits<double>::infinity();

  // fit K from the exact per-pair ratio at shrinking theta
  for (double th : opt.fit_thetas) {
    const double r = amplify_detail::pair_ratio(claw, law, opt.a_ref, th, opt.fit_sigma, ubar,
                                                box, ode);
    rep.khat_by_theta.push_back({th, (r - 1.0) / (th * th)});
  }
  if (rep.khat_by_theta.size() >= 2) {
    // khat(theta) = K + O(theta): linear extrapolation from the two smallest
    const auto& [t1, k1] = rep.khat_by_theta[rep.khat_by_theta.size() - 2];
    const auto& [t2, k2] = rep.khat_by_theta.back();
    rep.khat = k2 + (k2 - k1) * t2 / (t1 - t2);
  } else if (!rep.khat_by_theta.empty()) {
    rep.khat = rep.khat_by_theta.front().second;
  }
  rep.rel_err_vs_kgrande = std::abs(rep.khat - rep.kgrande_value) /
                           std::max(1e-300, std::abs(rep.kgrande_value));

  // cascade at the requested geometry
  amplify_detail::TrackedWave w;
  w.sigma = opt.sigma2;
  w.entry = ubar;
  w.behind = lax_curve_from_right(law, WaveFamily::Two, ubar, opt.sigma2);
  double worst_ratio = 0.0;
  for (int m = 1; m <= opt.repeats; ++m) {
    PairCrossing pc;
    pc.pair = m;
    pc.sigma_in = w.sigma;
    try {
      const auto mid = amplify_detail::cross_junction(claw, law, opt.a_ref,
                                                      opt.a_ref * (1.0 + opt.da_over_a), w, box,
                                                      ode);
      pc.sigma_mid = mid.sigma;
      const auto out = amplify_detail::cross_junction(
          claw, law, opt.a_ref * (1.0 + opt.da_over_a), opt.a_ref, mid, box, ode);
      pc.sigma_out = out.sigma;
      pc.ratio = std::abs(pc.sigma_out / pc.sigma_in);
      w = out;
    } catch (const Error& e) {
      rep.regime_breakdown = true;
      rep.breakdown_pair = m;
      rep.breakdown_what = e.what();
      break;
    }
    rep.crossings.push_back(pc);
    worst_ratio = std::max(worst_ratio, pc.ratio);
    if (rep.pairs_to_double < 0 && std::abs(w.sigma / opt.sigma2) >= 2.0) {
      rep.pairs_to_double = m;
    }
  }
  rep.attenuates = !rep.crossings.empty() && rep.crossings.front().ratio < 1.0;
  return rep;
}

/// Measured pair coefficient over a grid of speed ratios (for sign scans).
inline std::vector<std::pair<double, double>> amplification_sign_scan(
    const PressureLaw& law, const std::vector<double>& xis,
    const CouplingLaw& claw = CouplingLaw::smooth_section()) {
  std::vector<std::pair<double, double>> out;
  for (double xi : xis) {
    AmplifyOptions opt;
    opt.vbar_over_c = xi;
    opt.repeats = 0;
    const AmplifyReport r = amplification_experiment(law, opt, claw);
    out.push_back({xi, r.khat});
  }
  return out;
}

// ---------------------------------------------------------------------------
// expansion probes (transfer map and junction transmission vs their
// first-order predictions)

struct ExpansionProbe {
  double da;
  double t_map_error;       // ||T - first-order expansion||_1
  double sigma1_error;      // |sigma1_solver - sigma1_predicted| / |sigma2_in|
  double sigma2_error;      // |sigma2_solver - sigma2_predicted| / |sigma2_in|
};

inline ExpansionProbe junction_expansion_probe(const CouplingLaw& claw, const PressureLaw& law,
                                               double a, const GasState& u, double da,
                                               double sigma_in, const JunctionBox& box = {},
                                               const OdeOptions& ode = {}) {
  ExpansionProbe p;
  p.da = da;
  const double dsig = claw.dsigma_da(law, a, u);
  const GasState t_exact = t_map(claw, law, a, a + da, u, box, ode);
  const GasState t_lin = tt_expansion(law, a, u, da, dsig);
  p.t_map_error = std::abs(t_exact.rho - t_lin.rho) + std::abs(t_exact.q - t_lin.q);

  const GasState ahead = t_map(claw, law, a, a + da, u, box, ode);
  const GasState behind = lax_curve_from_right(law, WaveFamily::Two, u, sigma_in);
  const JunctionFan fan = solve_junction_riemann(claw, law, a, behind, a + da, ahead, box, ode);
  const auto [s1p, s2p] = sigma12_prediction(law, a, u, da, sigma_in, dsig);
  p.sigma1_error = std::abs(fan.sigma1 - s1p) / std::abs(sigma_in);
  p.sigma2_error = std::abs(fan.sigma2 - s2p) / std::abs(sigma_in);
  return p;
}

// ---------------------------------------------------------------------------
// convergence over staircase resolutions

struct ConvergenceOptions {
  SmoothProfile smooth;
  GasState reference{1.0, 0.3};
  InitialSpec initial;  // typically a wave
  std::vector<int> ns = {4, 8, 16, 32};
  int reference_factor = 2;  // reference resolution = factor * max(ns)
  double eps = 5e-4;
  double t_end = 1.0;
  std::vector<double> times = {0.5, 1.0};
};

struct ConvergenceReport {
  struct Row {
    int n;
    std::vector<double> distances;  // vs the reference run, one per sample time
  };
  std::vector<Row> rows;
  int n_ref = 0;
  bool distances_monotone = true;   // non-increasing in n, per time column
  std::vector<double> hat_l1;       // || hat(a_n) - smooth stationary ||_L1
  double hat_slope = 0.0;           // fitted order in 1/n
};

inline ConvergenceReport convergence_experiment(const PressureLaw& law,
                                                const ConvergenceOptions& opt,
                                                const CouplingLaw& claw
                                                = CouplingLaw::smooth_section()) {
  ConvergenceReport rep;
  rep.n_ref = opt.reference_factor * *std::max_element(opt.ns.begin(), opt.ns.end());

  auto make_cfg = [&](int n) {
    ScenarioConfig cfg;
    cfg.law = law;
    cfg.claw = claw;
    cfg.smooth_profile = opt.smooth;
    cfg.smooth_resolution = n;
    cfg.initial = opt.initial;
    cfg.initial.reference = opt.reference;
    cfg.params.eps = opt.eps;
    cfg.params.t_end = opt.t_end;
    cfg.upsilon_mode = "off";
    return cfg;
  };

  const PreparedScenario ref_prep = prepare_scenario(make_cfg(rep.n_ref));
  const RunReport ref_run = run_prepared(ref_prep);

  for (int n : opt.ns) {
    const PreparedScenario prep = prepare_scenario(make_cfg(n));
    const RunReport run = run_prepared(prep);
    ConvergenceReport::Row row;
    row.n = n;
    for (double t : opt.times) {
      const PiecewiseState u1 = run.timeline.sample(t);
      const PiecewiseState u2 = ref_run.timeline.sample(t);
      row.distances.push_back(
          l1_distance(u1, u2, ref_prep.window_lo, ref_prep.window_hi));
    }
    rep.rows.push_back(row);
  }
  for (size_t t = 0; t < opt.times.size(); ++t) {
    for (size_t k = 0; k + 1 < rep.rows.size(); ++k) {
      if (rep.rows[k + 1].distances[t] > rep.rows[k].distances[t] * 1.0000001) {
        rep.distances_monotone = false;
      }
    }
  }

  // stationary staircase data vs the smooth stationary solution
  SectionOfX sec{opt.smooth.xs, opt.smooth.as};
  const double X0 = opt.smooth.xs.front(), X1 = opt.smooth.xs.back();
  const auto smooth_path = stationary_integrate(law, sec, X0, X1, opt.reference);
  auto smooth_at = [&](double x) -> GasState {
    if (x <= smooth_path.front().first) return smooth_path.front().second;
    if (x >= smooth_path.back().first) return smooth_path.back().second;
    for (size_t i = 1; i < smooth_path.size(); ++i) {
      if (smooth_path[i].first >= x) {
        const auto& [xa, ua] = smooth_path[i - 1];
        const auto& [xb, ub] = smooth_path[i];
        const double t = (x - xa) / (xb - xa);
        return {ua.rho + t * (ub.rho - ua.rho), ua.q + t * (ub.q - ua.q)};
      }
    }
    return smooth_path.back().second;
  };
  for (int n : opt.ns) {
    const PcApproximation pc = pc_approximate(opt.smooth, n);
    const StationaryHat hat = hat_stationary(law, claw, pc.profile, opt.reference);
    PiecewiseState stair;
    stair.xs = pc.profile.xs;
    stair.states = hat.states;
    double acc = 0.0;
    const int fine = 4000;
    for (int k = 0; k < fine; ++k) {
      const double x = X0 + (k + 0.5) * (X1 - X0) / fine;
      const GasState a = stair.at(x);
      const GasState b = smooth_at(x);
      acc += (std::abs(a.rho - b.rho) + std::abs(a.q - b.q)) * (X1 - X0) / fine;
    }
    rep.hat_l1.push_back(acc);
  }
  if (rep.hat_l1.size() >= 2) {
    const double e0 = rep.hat_l1.front(), e1 = rep.hat_l1.back();
    const double n0 = opt.ns.front(), n1 = opt.ns.back();
    rep.hat_slope = std::log(e0 / e1) / std::log(n1 / n0);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// stability: paired evolutions of nearby data

struct StabilityOptions {
  double drho = 0.0, dq = 0.0;
  double x_lo = 0.0, x_hi = 0.0;
  std::vector<double> times = {0.25, 0.5, 0.75, 1.0};
};

struct StabilityReport {
  double d0 = 0.0;
  std::vector<double> times;
  std::vector<double> distances;
  std::vector<double> ratios;
  std::vector<double> phi_values;
  double empirical_L = 0.0;
  bool phi_bounded = true;  // Phi(t) <= Phi(s) + slack for t >= s
};

inline WftState state_at(const Timeline& tl, double t) {
  const WftState* snap = &tl.snapshots.front();
  for (const WftState& s : tl.snapshots) {
    if (s.t <= t + 1e-15) snap = &s;
  }
  WftState adv = *snap;
  engine_detail::advance_to(adv, t);
  return adv;
}

inline StabilityReport stability_experiment(const ScenarioConfig& base_cfg,
                                            const StabilityOptions& opt) {
  const PreparedScenario base = prepare_scenario(base_cfg);

  PreparedScenario pert = base;
  {
    PiecewiseDatum d;
    auto base_at = [&](double x) {
      const size_t i = std::upper_bound(base.datum.xs.begin(), base.datum.xs.end(), x) -
                       base.datum.xs.begin();
      return base.datum.states[i];
    };
    std::vector<double> cuts = base.datum.xs;
    if (std::find(cuts.begin(), cuts.end(), opt.x_lo) == cuts.end()) cuts.push_back(opt.x_lo);
    if (std::find(cuts.begin(), cuts.end(), opt.x_hi) == cuts.end()) cuts.push_back(opt.x_hi);
    std::sort(cuts.begin(), cuts.end());
    d.xs = cuts;
    d.states.push_back(base_at(cuts.front() - 1.0));
    for (size_t k = 0; k < cuts.size(); ++k) {
      const double probe =
          k + 1 < cuts.size() ? 0.5 * (cuts[k] + cuts[k + 1]) : cuts[k] + 1.0;
      GasState u = base_at(probe);
      if (probe > opt.x_lo && probe < opt.x_hi) {
        u.rho += opt.drho;
        u.q += opt.dq;
        check_density(u.rho, "stability perturbation");
      }
      d.states.push_back(u);
    }
    pert.datum = d;
  }

  const RunReport r1 = run_prepared(base);
  RunReport r2;
  {
    PreparedScenario p2 = pert;
    p2.ctx.enforce_upsilon = false;
    r2 = run_prepared(p2);
  }

  StabilityReport rep;
  const PiecewiseState u10 = r1.timeline.sample(0.0);
  const PiecewiseState u20 = r2.timeline.sample(0.0);
  rep.d0 = l1_distance(u10, u20, base.window_lo, base.window_hi);

  for (double t : opt.times) {
    if (t > base.ctx.params.t_end) continue;
    const PiecewiseState a = r1.timeline.sample(t);
    const PiecewiseState b = r2.timeline.sample(t);
    const double d = l1_distance(a, b, base.window_lo, base.window_hi);
    rep.times.push_back(t);
    rep.distances.push_back(d);
    rep.ratios.push_back(rep.d0 > 0.0 ? d / rep.d0 : 0.0);
    const WftState s1 = state_at(r1.timeline, t);
    const WftState s2 = state_at(r2.timeline, t);
    rep.phi_values.push_back(phi_distance(base.ctx.law, base.ctx.profile, s1, s2,
                                          base.ctx.weight_C, 1.0, 10.0, base.window_lo,
                                          base.window_hi));
  }
  for (double r : rep.ratios) rep.empirical_L = std::max(rep.empirical_L, r);
  const double slack =
      10.0 * base.ctx.params.eps * (rep.times.empty() ? 1.0 : rep.times.back()) +
      1e-9;
  for (size_t k = 0; k + 1 < rep.phi_values.size(); ++k) {
    if (rep.phi_values[k + 1] > rep.phi_values[k] + slack) rep.phi_bounded = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// randomized invariant suite (the `check` verb)

struct CheckOptions {
  std::uint64_t seed = 20240601;
  int scenarios = 50;
  int sigma_axiom_samples = 100;
  int equivalence_samples = 1000;
  double xi_max = 0.5;
  std::uint64_t min_total_events = 1000;
  bool quick = false;
};

struct CheckReport {
  int scenarios_run = 0;
  std::uint64_t total_events = 0;
  int upsilon_violations = 0;
  double worst_upsilon_jump = 0.0;
  double max_trace_residual = 0.0;
  int sigma_axiom_failures = 0;
  double worst_additivity = 0.0, worst_reversibility = 0.0, worst_reparam = 0.0;
  int equivalence_failures = 0;
  double worst_equivalence = 0.0;
  bool determinism_ok = true;
  int solver_errors = 0;
  std::vector<std::string> notes;

  bool pass(std::uint64_t min_events) const {
    return upsilon_violations == 0 && sigma_axiom_failures == 0 && equivalence_failures == 0 &&
           determinism_ok && solver_errors == 0 && total_events >= min_events;
  }
};

namespace check_detail {

inline ScenarioConfig random_scenario(std::mt19937_64& rng, double xi_max, int index) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  ScenarioConfig cfg;
  cfg.name = "check_" + std::to_string(index);
  cfg.law = PressureLaw::isothermal(1.0);

  const double xi = xi_max * (2.0 * uni(rng) - 1.0);
  const double rho = 0.7 + 0.8 * uni(rng);
  const GasState ubar{rho, rho * xi};

  // admissible profile: respect the TV and per-jump bounds at ubar
  const double dsig = cfg.law.pressure(rho);
  const JunctionCoeffs k = first_order_coeffs(cfg.law, 1.0, ubar, dsig);
  const double tv_cap = 1.0 / (4.0 * (k.K1 + k.K2) * std::exp(1.0));
  const double jump_cap = std::log(2.0) / k.K2;

  const int nj = 1 + (int)(uni(rng) * 3.9);
  PipeProfile prof;
  prof.a_ref = 1.0;
  prof.delta = 0.25;
  const double tv_target = tv_cap * (0.3 + 0.5 * uni(rng));
  std::vector<double> jumps(nj);
  double sum_abs = 0.0;
  for (int j = 0; j < nj; ++j) {
    jumps[j] = (uni(rng) - 0.5);
    sum_abs += std::abs(jumps[j]);
  }
  double level = 1.0, lo = 1.0, hi = 1.0;
  prof.as.push_back(1.0);
  for (int j = 0; j < nj; ++j) {
    double step = jumps[j] / sum_abs * tv_target;
    if (std::abs(step) > jump_cap) step = step > 0.0 ? jump_cap : -jump_cap;
    level += step;
    prof.as.push_back(level);
    lo = std::min(lo, level);
    hi = std::max(hi, level);
  }
  // recentre into (a_ref - delta, a_ref + delta)
  const double shift = 1.0 - 0.5 * (lo + hi);
  for (double& a : prof.as) a += shift;
  double xpos = -0.5 * nj;
  for (int j = 0; j < nj; ++j) {
    prof.xs.push_back(xpos);
    xpos += 0.3 + 0.7 * uni(rng);
  }
  cfg.pc_profile = prof;

  cfg.params.eps = std::pow(10.0, -3.0 + 0.3 * uni(rng));

  // a 2-wave entering from the left, usually met by a 1-wave from the right;
  // sizes up to ~30 fan steps so rarefactions actually split
  const CouplingLaw claw = CouplingLaw::smooth_section();
  const StationaryHat hat = hat_stationary(cfg.law, claw, prof, ubar);
  const double s2 =
      (uni(rng) < 0.5 ? -1.0 : 1.0) * cfg.params.eps * (1.0 + 5.0 * uni(rng));
  const double x_left = prof.xs.front() - 0.3 - 0.5 * uni(rng);
  cfg.initial.kind = InitialSpec::Kind::Piecewise;
  cfg.initial.reference = ubar;
  cfg.initial.xs = {x_left};
  cfg.initial.states = {lax_curve_from_right(cfg.law, WaveFamily::Two, hat.states.front(), s2),
                        hat.states.front()};
  for (size_t j = 0; j < prof.xs.size(); ++j) {
    cfg.initial.xs.push_back(prof.xs[j]);
    cfg.initial.states.push_back(hat.states[j + 1]);
  }
  if (uni(rng) < 0.7) {
    const double s1 =
        (uni(rng) < 0.5 ? -1.0 : 1.0) * cfg.params.eps * (0.5 + 2.5 * uni(rng));
    const double x_right = prof.xs.back() + 0.3 + 0.5 * uni(rng);
    cfg.initial.xs.push_back(x_right);
    cfg.initial.states.push_back(lax_curve(cfg.law, WaveFamily::One, hat.states.back(), s1));
  }

  const double span = prof.xs.back() - x_left;
  const double l2min = std::abs(ubar.velocity()) < 1.0
                           ? 1.0 - std::abs(ubar.velocity())
                           : 0.1;  // lower bound on lambda2 along the way
  cfg.params.t_end = 1.3 * span / std::max(0.05, l2min);
  cfg.params.max_events = 200000;
  cfg.upsilon_mode = "off";  // violations are collected, not thrown
  return cfg;
}

}  // namespace check_detail

inline CheckReport run_check_suite(const CheckOptions& opt) {
  CheckReport rep;
  std::mt19937_64 rng(opt.seed);

  // randomized evolutions: Upsilon monotonicity and trace condition
  const int n_scen = opt.quick ? std::min(opt.scenarios, 8) : opt.scenarios;
  std::string first_log;
  for (int i = 0; i < n_scen; ++i) {
    std::mt19937_64 srng(opt.seed + 1000003ULL * (std::uint64_t)i);
    const ScenarioConfig cfg = check_detail::random_scenario(srng, opt.xi_max, i);
    try {
      const PreparedScenario prep = prepare_scenario(cfg);
      const RunReport run = run_prepared(prep);
      ++rep.scenarios_run;
      rep.total_events += run.events;
      rep.max_trace_residual = std::max(rep.max_trace_residual, run.max_trace_residual);
      for (const EventRecord& e : run.timeline.events) {
        const double jump = e.upsilon_after - e.upsilon_before;
        rep.worst_upsilon_jump = std::max(rep.worst_upsilon_jump, jump);
        if (jump > cfg.params.upsilon_tol) ++rep.upsilon_violations;
      }
      if (i == 0) {
        first_log = event_log_text(run.timeline);
        const RunReport rerun = run_prepared(prepare_scenario(cfg));
        if (event_log_text(rerun.timeline) != first_log) rep.determinism_ok = false;
      }
    } catch (const Error& e) {
      ++rep.solver_errors;
      rep.notes.push_back(cfg.name + ": " + e.what());
    }
  }

  // coupling axioms
  const PressureLaw law = PressureLaw::isothermal(1.0);
  const CouplingLaw claw = CouplingLaw::smooth_section();
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const int n_ax = opt.quick ? std::min(opt.sigma_axiom_samples, 20) : opt.sigma_axiom_samples;
  int done = 0, attempts = 0;
  while (done < n_ax && attempts < 20 * n_ax) {
    ++attempts;
    const double rho = 0.6 + 1.0 * uni(rng);
    const double xi = 0.85 * (2.0 * uni(rng) - 1.0);
    const GasState u{rho, rho * xi * law.sound_speed(rho)};
    const double am = 1.0 + 0.2 * (uni(rng) - 0.5);
    const double ap = am * (1.0 + 0.2 * (uni(rng) - 0.5));
    const double a0 = 0.5 * (am + ap);
    // stay inside the admissible neighborhood: skip draws whose stationary
    // path would cross the sonic line (the maps are not defined there)
    try {
      (void)t_map(claw, law, am, ap, u);
      (void)t_map(claw, law, ap, am, t_map(claw, law, am, ap, u));
    } catch (const SonicError&) {
      continue;
    } catch (const SolverError&) {
      continue;
    } catch (const DomainError&) {
      continue;
    }
    ++done;
    try {
      const auto s_full = sigma_map(claw, law, am, ap, u);
      const auto s_1 = sigma_map(claw, law, am, a0, u);
      const GasState u0 = t_map(claw, law, am, a0, u);
      const auto s_2 = sigma_map(claw, law, a0, ap, u0);
      const double add = std::abs(s_1[1] + s_2[1] - s_full[1]);
      rep.worst_additivity = std::max(rep.worst_additivity, add);

      const GasState up = t_map(claw, law, am, ap, u);
      const auto s_back = sigma_map(claw, law, ap, am, up);
      const double rev = std::abs(s_full[1] + s_back[1]);
      rep.worst_reversibility = std::max(rep.worst_reversibility, rev);

      // reparametrization: smoothstep polyline vs the canonical linear path
      double alt = 0.0;
      {
        const int segs = 32;
        GasState cur = u;
        double a_prev = am;
        for (int sgi = 1; sgi <= segs; ++sgi) {
          const double t = (double)sgi / segs;
          const double s = t * t * (3.0 - 2.0 * t);
          const double a_next = am + (ap - am) * s;
          const auto r = integrate_in_section(law, a_prev, a_next, cur);
          alt += r.pressure_integral;
          cur = r.u;
          a_prev = a_next;
        }
      }
      const double rp = std::abs(alt - s_full[1]);
      rep.worst_reparam = std::max(rep.worst_reparam, rp);

      if (add > 1e-9 || rev > 1e-9 || rp > 1e-9) ++rep.sigma_axiom_failures;
    } catch (const Error& e) {
      ++rep.sigma_axiom_failures;
      rep.notes.push_back(std::string("sigma axiom sample: ") + e.what());
    }
  }

  // junction solver collapses to the plain solver at equal sections
  const int n_eq = opt.quick ? std::min(opt.equivalence_samples, 100) : opt.equivalence_samples;
  for (int i = 0; i < n_eq; ++i) {
    const double rho_l = 0.6 + 1.0 * uni(rng);
    const double rho_r = 0.6 + 1.0 * uni(rng);
    const double xi_l = 0.8 * (2.0 * uni(rng) - 1.0);
    const double xi_r = 0.8 * (2.0 * uni(rng) - 1.0);
    const GasState ul{rho_l, rho_l * xi_l * law.sound_speed(rho_l)};
    GasState ur{rho_r, rho_r * xi_r * law.sound_speed(rho_r)};
    // keep the pair close enough that the solution stays subsonic
    ur.rho = rho_l + 0.2 * (rho_r - rho_l);
    ur.q = ul.q + 0.2 * (ur.q - ul.q);
    try {
      const RiemannFan rf = solve_riemann(law, ul, ur);
      const JunctionFan jf = solve_junction_riemann(claw, law, 1.0, ul, 1.0, ur);
      const double diff =
          std::abs(rf.sigma1 - jf.sigma1) + std::abs(rf.sigma2 - jf.sigma2);
      rep.worst_equivalence = std::max(rep.worst_equivalence, diff);
      if (diff > 1e-10) ++rep.equivalence_failures;
    } catch (const Error& e) {
      ++rep.equivalence_failures;
      rep.notes.push_back(std::string("equivalence sample: ") + e.what());
    }
  }
  return rep;
}

}  // namespace fronttrack
