#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fronttrack/residuals.hpp"
#include "fronttrack/scenario.hpp"

namespace fronttrack {

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// Everything run_scenario needs, resolved from a config.
struct PreparedScenario {
  EvolveContext ctx;
  PiecewiseDatum datum;
  GasState reference;
  StationaryHat hat;       // populated when the datum is stationary-based
  WeightChoice weights;    // meaningful only when the profile has junctions
  bool has_junctions = false;
  bool admissible = false;
  double window_lo = 0.0, window_hi = 0.0;
};

inline PreparedScenario prepare_scenario(const ScenarioConfig& cfg) {
  PreparedScenario p;
  p.ctx.law = cfg.law;
  p.ctx.claw = cfg.claw;
  p.ctx.params = cfg.params;
  p.ctx.box = cfg.box;
  p.ctx.ode = cfg.ode;

  if (cfg.pc_profile) {
    p.ctx.profile = *cfg.pc_profile;
  } else if (cfg.smooth_profile) {
    p.ctx.profile = pc_approximate(*cfg.smooth_profile, cfg.smooth_resolution).profile;
  } else {
    throw ConfigError("scenario has no profile");
  }
  const PipeProfile& prof = p.ctx.profile;
  p.has_junctions = prof.junction_count() > 0;
  p.reference = cfg.initial.reference;
  if (!is_subsonic(cfg.law, p.reference)) {
    throw ConfigError("initial reference state is not subsonic");
  }

  const bool needs_hat = cfg.initial.kind == InitialSpec::Kind::Stationary ||
                         cfg.initial.kind == InitialSpec::Kind::Wave ||
                         cfg.initial.kind == InitialSpec::Kind::PerturbedStationary;
  if (needs_hat) {
    p.hat = hat_stationary(cfg.law, cfg.claw, prof, p.reference, cfg.box, cfg.ode);
  }

  // assemble the datum
  const InitialSpec& in = cfg.initial;
  auto stationary_datum = [&]() {
    PiecewiseDatum d;
    d.xs = prof.xs;
    d.states = p.hat.states;
    return d;
  };
  switch (in.kind) {
    case InitialSpec::Kind::Stationary:
      p.datum = stationary_datum();
      break;
    case InitialSpec::Kind::Constant:
      p.datum.states = {in.reference};
      break;
    case InitialSpec::Kind::Wave: {
      p.datum = stationary_datum();
      if (p.has_junctions) {
        const bool ok = in.family == WaveFamily::Two ? in.x0 < prof.xs.front()
                                                     : in.x0 > prof.xs.back();
        if (!ok) {
          throw ConfigError("initial wave must start in the unbounded pipe it travels from "
                            "(left of all junctions for family 2, right for family 1)");
        }
      }
      const size_t pipe = prof.pipe_index(in.x0);
      const GasState ahead = p.hat.states.empty() ? in.reference : p.hat.states[pipe];
      if (in.family == WaveFamily::Two) {
        const GasState behind = lax_curve_from_right(cfg.law, WaveFamily::Two, ahead, in.sigma);
        p.datum.xs.insert(p.datum.xs.begin(), in.x0);
        p.datum.states.insert(p.datum.states.begin(), behind);
      } else {
        const GasState right = lax_curve(cfg.law, WaveFamily::One, ahead, in.sigma);
        p.datum.xs.push_back(in.x0);
        p.datum.states.push_back(right);
      }
      break;
    }
    case InitialSpec::Kind::PerturbedStationary: {
      const PiecewiseDatum base = stationary_datum();
      auto base_at = [&](double x) {
        const size_t i = std::upper_bound(base.xs.begin(), base.xs.end(), x) - base.xs.begin();
        return base.states[i];
      };
      std::vector<double> cuts{in.x_lo};
      for (double xj : base.xs) {
        if (xj > in.x_lo && xj < in.x_hi) cuts.push_back(xj);
      }
      cuts.push_back(in.x_hi);
      PiecewiseDatum d;
      // left part
      for (double xj : base.xs) {
        if (xj < in.x_lo) {
          d.xs.push_back(xj);
        }
      }
      d.states.assign(d.xs.size() + 1, GasState{});
      for (size_t k = 0; k < d.states.size(); ++k) {
        const double probe = k < d.xs.size() ? d.xs[k] - 1e-9 : in.x_lo - 1e-9;
        d.states[k] = base_at(probe);
      }
      // perturbed cells
      for (size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
        GasState u = base_at(mid);
        u.rho += in.drho;
        u.q += in.dq;
        check_density(u.rho, "perturbed datum");
        d.xs.push_back(cuts[k]);
        d.states.push_back(u);
      }
      // right part
      d.xs.push_back(in.x_hi);
      d.states.push_back(base_at(in.x_hi + 1e-9));
      for (double xj : base.xs) {
        if (xj > in.x_hi) {
          d.xs.push_back(xj);
          d.states.push_back(base_at(xj + 1e-9));
        }
      }
      p.datum = d;
      break;
    }
    case InitialSpec::Kind::Piecewise:
      p.datum.xs = in.xs;
      p.datum.states = in.states;
      break;
  }

  // lambda_hat: dominate every characteristic speed seen in the datum
  if (p.ctx.params.lambda_hat <= 0.0) {
    double top = 0.0;
    for (const GasState& u : p.datum.states) {
      auto [l1, l2] = eigenvalues(cfg.law, u);
      top = std::max({top, std::abs(l1), std::abs(l2)});
    }
    p.ctx.params.lambda_hat = 1.1 * top;
  }

  // Glimm weight constant and admissibility from the reference-state coefficients
  if (p.has_junctions && prof.tv() > 0.0) {
    const double dsig = cfg.claw.dsigma_da(cfg.law, prof.a_ref, p.reference);
    const JunctionCoeffs k = first_order_coeffs(cfg.law, prof.a_ref, p.reference, dsig);
    const double k3 = k3_estimate(cfg.claw, cfg.law, prof.a_ref, p.reference, cfg.box);
    p.weights = choose_weight_constant(prof, k.K1, k.K2, k3);
    p.ctx.weight_C = p.weights.C;
    p.admissible = p.weights.admissible() && prof.in_range();
  } else {
    p.weights.C = 0.0;
    p.ctx.weight_C = 0.0;
    p.admissible = true;  // uniform pipe: classical Glimm decrease, unit weights
  }
  if (cfg.upsilon_mode == "enforce") {
    p.ctx.enforce_upsilon = true;
  } else if (cfg.upsilon_mode == "off") {
    p.ctx.enforce_upsilon = false;
  } else {
    p.ctx.enforce_upsilon = p.admissible;
  }

  const double span_lo = prof.xs.empty() ? 0.0 : prof.xs.front();
  const double span_hi = prof.xs.empty() ? 0.0 : prof.xs.back();
  double lo = span_lo, hi = span_hi;
  for (double x : p.datum.xs) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  const double reach = p.ctx.params.lambda_hat * p.ctx.params.t_end;
  p.window_lo = lo - reach - 1.0;
  p.window_hi = hi + reach + 1.0;
  return p;
}

struct RunReport {
  PreparedScenario prep;
  Timeline timeline;
  GlimmReport initial_glimm, final_glimm;
  std::uint64_t events = 0;
  bool upsilon_monotone = true;
  double worst_upsilon_jump = 0.0;  // max positive jump observed
  double max_trace_residual = 0.0;
};

inline RunReport run_prepared(const PreparedScenario& prep) {
  RunReport rep;
  rep.prep = prep;
  rep.timeline = evolve(prep.ctx, prep.datum);
  rep.events = rep.timeline.events.size();
  rep.initial_glimm =
      glimm_functionals(rep.timeline.snapshots.front(), prep.ctx.profile, prep.ctx.weight_C);
  rep.final_glimm =
      glimm_functionals(rep.timeline.final_state, prep.ctx.profile, prep.ctx.weight_C);
  for (const EventRecord& e : rep.timeline.events) {
    const double jump = e.upsilon_after - e.upsilon_before;
    if (jump > rep.worst_upsilon_jump) rep.worst_upsilon_jump = jump;
    if (jump > prep.ctx.params.upsilon_tol) rep.upsilon_monotone = false;
  }
  for (const JunctionTraceState& tr : rep.timeline.final_state.traces) {
    const auto r = psi_residual(prep.ctx.claw, prep.ctx.law, prep.ctx.profile.as[tr.index],
                                tr.minus, prep.ctx.profile.as[tr.index + 1], tr.plus,
                                prep.ctx.ode);
    rep.max_trace_residual =
        std::max({rep.max_trace_residual, std::abs(r[0]), std::abs(r[1])});
  }
  return rep;
}

// ---------------------------------------------------------------------------
// emission

inline std::string event_log_text(const Timeline& tl) {
  std::ostringstream os;
  for (const EventRecord& e : tl.events) {
    os << e.index << ' ' << event_kind_name(e.kind) << ' ' << fmt17(e.t) << ' ' << fmt17(e.x)
       << ' ' << e.junction << " in:";
    for (size_t i = 0; i < e.sizes_in.size(); ++i) os << (i ? ";" : "") << fmt17(e.sizes_in[i]);
    os << " out:";
    for (size_t i = 0; i < e.sizes_out.size(); ++i) os << (i ? ";" : "") << fmt17(e.sizes_out[i]);
    os << " V:" << fmt17(e.v_before) << ">" << fmt17(e.v_after) << " Q:" << fmt17(e.q_before)
       << ">" << fmt17(e.q_after) << " U:" << fmt17(e.upsilon_before) << ">"
       << fmt17(e.upsilon_after) << '\n';
  }
  return os.str();
}

inline std::string snapshots_csv(const Timeline& tl) {
  std::ostringstream os;
  os << "t,x,family,sigma,speed,rho_l,q_l,rho_r,q_r\n";
  for (const WftState& s : tl.snapshots) {
    for (const Front& f : s.fronts) {
      os << fmt17(s.t) << ',' << fmt17(f.x) << ',' << family_name(f.family) << ','
         << fmt17(f.sigma) << ',' << fmt17(f.speed) << ',' << fmt17(f.left.rho) << ','
         << fmt17(f.left.q) << ',' << fmt17(f.right.rho) << ',' << fmt17(f.right.q) << '\n';
    }
  }
  return os.str();
}

inline std::string functional_trace_csv(const Timeline& tl) {
  std::ostringstream os;
  os << "event,t,V_before,Q_before,upsilon_before,V_after,Q_after,upsilon_after\n";
  for (const EventRecord& e : tl.events) {
    os << e.index << ',' << fmt17(e.t) << ',' << fmt17(e.v_before) << ',' << fmt17(e.q_before)
       << ',' << fmt17(e.upsilon_before) << ',' << fmt17(e.v_after) << ',' << fmt17(e.q_after)
       << ',' << fmt17(e.upsilon_after) << '\n';
  }
  return os.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for writing: " + path.string());
  f << text;
}

inline Json run_summary_json(const ScenarioConfig& cfg, const RunReport& rep) {
  Json j;
  j["name"] = cfg.name;
  j["pressure_law"] = pressure_law_to_json(cfg.law);
  j["junctions"] = rep.prep.ctx.profile.junction_count();
  j["tv_a"] = rep.prep.ctx.profile.tv();
  j["admissible_regime"] = rep.prep.admissible;
  j["weight_C"] = rep.prep.ctx.weight_C;
  j["lambda_hat"] = rep.prep.ctx.params.lambda_hat;
  j["epsilon"] = rep.prep.ctx.params.eps;
  j["t_end"] = rep.prep.ctx.params.t_end;
  j["events"] = rep.events;
  j["interactions"] = rep.timeline.final_state.interactions;
  j["junction_hits"] = rep.timeline.final_state.junction_hits;
  j["nonphysical_created"] = rep.timeline.final_state.nonphysical_created;
  j["fronts_final"] = rep.timeline.final_state.fronts.size();
  j["upsilon_initial"] = rep.initial_glimm.upsilon;
  j["upsilon_final"] = rep.final_glimm.upsilon;
  j["upsilon_monotone"] = rep.upsilon_monotone;
  j["worst_upsilon_jump"] = rep.worst_upsilon_jump;
  j["max_trace_residual"] = rep.max_trace_residual;
  j["seed"] = cfg.seed;
  if (!rep.prep.hat.states.empty()) {
    j["tv_hat"] = rep.prep.hat.tv_hat;
    j["tv_hat_over_tv_a"] = rep.prep.hat.ratio;
  }
  return j;
}

/// Execute a scenario and emit the event log, snapshot table, functional trace
/// and JSON summary under cfg.out_dir.
inline RunReport run_scenario(const ScenarioConfig& cfg, bool write_outputs = true) {
  const PreparedScenario prep = prepare_scenario(cfg);
  RunReport rep = run_prepared(prep);
  if (write_outputs) {
    const std::filesystem::path root = std::filesystem::path(cfg.out_dir) / cfg.name;
    write_text_file(root / "events.log", event_log_text(rep.timeline));
    write_text_file(root / "snapshots.csv", snapshots_csv(rep.timeline));
    write_text_file(root / "functionals.csv", functional_trace_csv(rep.timeline));
    write_text_file(root / "summary.json", run_summary_json(cfg, rep).dump(2) + "\n");
  }
  return rep;
}

}  // namespace fronttrack
