#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fronttrack/functionals.hpp"
#include "fronttrack/junction.hpp"

namespace fronttrack {

/// Raw piecewise-constant initial datum; junction compatibility is not assumed,
/// every jump (and every junction) is solved at t = 0.
struct PiecewiseDatum {
  std::vector<double> xs;
  std::vector<GasState> states;  // size xs.size() + 1
};

struct EvolveContext {
  PressureLaw law = PressureLaw::isothermal(1.0);
  CouplingLaw claw = CouplingLaw::smooth_section();
  PipeProfile profile;
  WftParams params;
  JunctionBox box;
  OdeOptions ode;
  double weight_C = 1.0;          // Glimm weight constant used for logging
  bool enforce_upsilon = false;   // raise on Upsilon increase (admissible regime)
};

struct Timeline {
  EvolveContext ctx;
  std::vector<WftState> snapshots;
  std::vector<EventRecord> events;
  WftState final_state;

  PiecewiseState sample(double t) const;
};

namespace engine_detail {

struct PendingEvent {
  enum class Kind { Collision, Junction };
  Kind kind;
  double t;          // absolute time
  double x;          // event location
  size_t a = 0;      // left front index (collision) or front index (junction)
  size_t b = 0;      // right front index (collision)
  int junction = -1;
};

class Emitter {
 public:
  Emitter(const EvolveContext& ctx, std::uint32_t& id_counter)
      : ctx_(ctx), ids_(id_counter) {}

  std::vector<Front> riemann_waves(const RiemannFan& fan, double x, bool resplit1,
                                   bool resplit2, Front::Origin origin) {
    std::vector<Front> out;
    append_macro(out, WaveFamily::One, fan.sigma1, fan.left, x, resplit1, origin);
    append_macro(out, WaveFamily::Two, fan.sigma2, fan.middle, x, resplit2, origin);
    snap_chain(out, fan.left, fan.right);
    return out;
  }

  /// Family-1 and family-2 fronts emitted by a junction solve; junction-born
  /// rarefactions are always fanned.
  std::vector<Front> junction_waves(const JunctionFan& fan, double x) {
    std::vector<Front> out;
    append_macro(out, WaveFamily::One, fan.sigma1, fan.u_left, x, true, Front::Origin::Accurate);
    append_macro(out, WaveFamily::Two, fan.sigma2, fan.trace_plus, x, true,
                 Front::Origin::Accurate);
    snap_chain_junction(out, fan);
    return out;
  }

  Front physical_front(WaveFamily family, double sigma, const GasState& l, const GasState& r,
                       double x, Front::Origin origin) {
    Front f;
    f.family = family;
    f.sigma = sigma;
    f.left = l;
    f.right = r;
    f.x = x;
    f.speed = front_speed(ctx_.law, family, l, r, sigma);
    f.origin = origin;
    f.id = ++ids_;
    return f;
  }

  std::optional<Front> nonphysical_front(const GasState& l, const GasState& r, double x,
                                         Front::Origin origin) {
    const double size = nonphysical_size(l, r);
    if (size < ctx_.params.zero_size_tol) return std::nullopt;
    Front f;
    f.family = WaveFamily::NonPhysical;
    f.sigma = size;
    f.left = l;
    f.right = r;
    f.x = x;
    f.speed = ctx_.params.lambda_hat;
    f.origin = origin;
    f.id = ++ids_;
    return f;
  }

 private:
  void append_macro(std::vector<Front>& out, WaveFamily family, double sigma,
                    const GasState& from, double x, bool split, Front::Origin origin) {
    if (std::abs(sigma) < ctx_.params.zero_size_tol) return;
    if (sigma < 0.0 || !split) {
      const GasState to = lax_curve(ctx_.law, family, from, sigma);
      out.push_back(physical_front(family, sigma, from, to, x, origin));
      return;
    }
    const auto pieces = rarefaction_fan(ctx_.law, family, from, sigma, ctx_.params.eps);
    for (const Wave& w : pieces) {
      out.push_back(physical_front(family, w.sigma, w.left, w.right, x,
                                   pieces.size() > 1 ? Front::Origin::Fan : origin));
    }
  }

  void snap_chain(std::vector<Front>& out, const GasState& u_l, const GasState& u_r) {
    if (out.empty()) return;
    out.front().left = u_l;
    out.back().right = u_r;
  }

  void snap_chain_junction(std::vector<Front>& out, const JunctionFan& fan) {
    // family-1 block chains u_left -> trace_minus, family-2 block trace_plus -> u_right
    Front* last1 = nullptr;
    Front* first1 = nullptr;
    Front* first2 = nullptr;
    Front* last2 = nullptr;
    for (Front& f : out) {
      if (f.family == WaveFamily::One) {
        if (!first1) first1 = &f;
        last1 = &f;
      } else {
        if (!first2) first2 = &f;
        last2 = &f;
      }
    }
    if (first1) first1->left = fan.u_left;
    if (last1) last1->right = fan.trace_minus;
    if (first2) first2->left = fan.trace_plus;
    if (last2) last2->right = fan.u_right;
  }

  const EvolveContext& ctx_;
  std::uint32_t& ids_;
};

inline double max_lambda2(const PressureLaw& law, const GasState& u) {
  return eigenvalues(law, u).second;
}

}  // namespace engine_detail

/// Piecewise-constant initial state: solve the Riemann problem at every datum
/// jump and the junction Riemann problem at every junction; fan rarefactions.
inline WftState init_approximation(const EvolveContext& ctx, const PiecewiseDatum& datum,
                                   std::uint32_t& id_counter) {
  const PipeProfile& prof = ctx.profile;
  prof.validate();
  if (datum.states.size() != datum.xs.size() + 1) {
    throw ConfigError("init_approximation: datum needs one more state than breakpoints");
  }
  for (const GasState& u : datum.states) {
    if (!is_subsonic(ctx.law, u)) {
      throw DomainError("init_approximation: datum state not subsonic");
    }
    if (engine_detail::max_lambda2(ctx.law, u) >= ctx.params.lambda_hat) {
      throw ConfigError("init_approximation: lambda_hat does not dominate the datum speeds");
    }
  }
  for (size_t i = 1; i < datum.xs.size(); ++i) {
    if (!(datum.xs[i] > datum.xs[i - 1])) {
      throw ConfigError("init_approximation: datum breakpoints must be increasing");
    }
  }

  // one-sided limits of the datum; a datum jump may sit exactly on a junction
  auto datum_left = [&](double x) {
    const size_t i =
        std::lower_bound(datum.xs.begin(), datum.xs.end(), x - 1e-12) - datum.xs.begin();
    return datum.states[i];
  };
  auto datum_right = [&](double x) {
    const size_t i =
        std::upper_bound(datum.xs.begin(), datum.xs.end(), x + 1e-12) - datum.xs.begin();
    return datum.states[i];
  };
  auto is_junction_pos = [&](double x) {
    for (double xj : prof.xs) {
      if (std::abs(x - xj) < 1e-12) return true;
    }
    return false;
  };

  WftState s;
  s.t = 0.0;
  s.far_left = datum.states.front();
  engine_detail::Emitter emit(ctx, id_counter);

  // one ordered walk over datum jumps (inside pipes) and junctions
  struct Cut {
    double x;
    bool junction;
    int index;
  };
  std::vector<Cut> cuts;
  for (size_t i = 0; i < datum.xs.size(); ++i) {
    if (!is_junction_pos(datum.xs[i])) cuts.push_back({datum.xs[i], false, (int)i});
  }
  for (size_t j = 0; j < prof.xs.size(); ++j) cuts.push_back({prof.xs[j], true, (int)j});
  std::sort(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) { return a.x < b.x; });

  for (const Cut& c : cuts) {
    if (!c.junction) {
      const GasState ul = datum.states[static_cast<size_t>(c.index)];
      const GasState ur = datum.states[static_cast<size_t>(c.index) + 1];
      const RiemannFan fan = solve_riemann(ctx.law, ul, ur);
      auto fronts = emit.riemann_waves(fan, c.x, true, true, Front::Origin::Initial);
      for (Front& f : fronts) s.fronts.push_back(f);
    } else {
      const double am = prof.as[c.index];
      const double ap = prof.as[c.index + 1];
      const JunctionFan fan = solve_junction_riemann(ctx.claw, ctx.law, am, datum_left(c.x), ap,
                                                     datum_right(c.x), ctx.box, ctx.ode);
      auto fronts = emit.junction_waves(fan, c.x);
      for (Front& f : fronts) s.fronts.push_back(f);
      s.traces.push_back({c.index, c.x, fan.trace_minus, fan.trace_plus});
    }
  }
  std::stable_sort(s.fronts.begin(), s.fronts.end(), [](const Front& a, const Front& b) {
    return a.x < b.x || (a.x == b.x && a.speed < b.speed);
  });
  return s;
}

/// Earliest upcoming front-front collision or front-junction hit.
inline std::optional<engine_detail::PendingEvent> next_event(const WftState& s,
                                                             const PipeProfile& prof,
                                                             double t_end) {
  using engine_detail::PendingEvent;
  std::optional<PendingEvent> best;
  auto offer = [&](const PendingEvent& e) {
    if (e.t > t_end) return;
    if (!best) {
      best = e;
      return;
    }
    // near-ties: junction events first, then leftmost
    if (e.t < best->t - 1e-13) {
      best = e;
    } else if (e.t <= best->t + 1e-13) {
      const bool ej = e.kind == PendingEvent::Kind::Junction;
      const bool bj = best->kind == PendingEvent::Kind::Junction;
      if ((ej && !bj) || (ej == bj && e.x < best->x)) best = e;
    }
  };

  for (size_t k = 0; k + 1 < s.fronts.size(); ++k) {
    const Front &a = s.fronts[k], &b = s.fronts[k + 1];
    const double rel = a.speed - b.speed;
    if (rel <= 0.0) continue;
    const double dt = (b.x - a.x) / rel;
    if (dt < 0.0) continue;
    PendingEvent e;
    e.kind = PendingEvent::Kind::Collision;
    e.t = s.t + dt;
    e.x = a.x + a.speed * dt;
    e.a = k;
    e.b = k + 1;
    offer(e);
  }

  for (size_t k = 0; k < s.fronts.size(); ++k) {
    const Front& f = s.fronts[k];
    if (f.speed == 0.0) continue;
    double xj = 0.0;
    int idx = -1;
    if (f.speed > 0.0) {
      for (size_t j = 0; j < prof.xs.size(); ++j) {
        if (prof.xs[j] > f.x) {
          xj = prof.xs[j];
          idx = static_cast<int>(j);
          break;
        }
      }
    } else {
      for (size_t j = prof.xs.size(); j-- > 0;) {
        if (prof.xs[j] < f.x) {
          xj = prof.xs[j];
          idx = static_cast<int>(j);
          break;
        }
      }
    }
    if (idx < 0) continue;
    PendingEvent e;
    e.kind = PendingEvent::Kind::Junction;
    e.t = s.t + (xj - f.x) / f.speed;
    e.x = xj;
    e.a = k;
    e.junction = idx;
    offer(e);
  }
  return best;
}

namespace engine_detail {

inline void advance_to(WftState& s, double t) {
  const double dt = t - s.t;
  for (Front& f : s.fronts) f.x += f.speed * dt;
  s.t = t;
}

inline void replace_fronts(WftState& s, size_t first, size_t count,
                           const std::vector<Front>& repl) {
  s.fronts.erase(s.fronts.begin() + first, s.fronts.begin() + first + count);
  s.fronts.insert(s.fronts.begin() + first, repl.begin(), repl.end());
  std::stable_sort(s.fronts.begin(), s.fronts.end(), [](const Front& a, const Front& b) {
    return a.x < b.x || (a.x == b.x && a.speed < b.speed);
  });
}

}  // namespace engine_detail

/// Apply one event. Pipe interactions use the accurate solver above the
/// threshold and the crossing rule with a non-physical front below it; junction
/// hits use the accurate junction solver; non-physical fronts refract.
inline EventRecord handle_interaction(const EvolveContext& ctx, WftState& s,
                                      const engine_detail::PendingEvent& ev,
                                      std::uint32_t& id_counter) {
  using engine_detail::PendingEvent;
  engine_detail::Emitter emit(ctx, id_counter);
  EventRecord rec;
  rec.t = ev.t;
  rec.x = ev.x;
  rec.junction = ev.junction;

  if (ev.kind == PendingEvent::Kind::Collision) {
    Front a = s.fronts[ev.a];
    Front b = s.fronts[ev.b];
    a.x = b.x = ev.x;
    rec.sizes_in = {a.sigma, b.sigma};
    std::vector<Front> out;

    if (a.family == WaveFamily::NonPhysical) {
      // physical wave crosses unchanged, the non-physical front absorbs the defect
      rec.kind = EventRecord::Kind::NonPhysicalCross;
      const GasState al = a.left;
      const GasState crossed = lax_curve(ctx.law, b.family, al, b.sigma);
      out.push_back(emit.physical_front(b.family, b.sigma, al, crossed, ev.x, b.origin));
      if (auto np = emit.nonphysical_front(crossed, b.right, ev.x, Front::Origin::Simplified)) {
        out.push_back(*np);
      }
      ++s.nonphysical_created;
    } else if (std::abs(a.sigma * b.sigma) >= ctx.params.threshold()) {
      rec.kind = EventRecord::Kind::Accurate;
      const RiemannFan fan = solve_riemann(ctx.law, a.left, b.right);
      const bool nores1 = (a.family == WaveFamily::One && a.sigma > 0.0) ||
                          (b.family == WaveFamily::One && b.sigma > 0.0);
      const bool nores2 = (a.family == WaveFamily::Two && a.sigma > 0.0) ||
                          (b.family == WaveFamily::Two && b.sigma > 0.0);
      out = emit.riemann_waves(fan, ev.x, !nores1, !nores2, Front::Origin::Accurate);
    } else {
      rec.kind = EventRecord::Kind::Simplified;
      if (a.family == b.family) {
        const double combined = a.sigma + b.sigma;
        GasState cur = a.left;
        if (std::abs(combined) >= ctx.params.zero_size_tol) {
          const GasState nxt = lax_curve(ctx.law, a.family, cur, combined);
          out.push_back(
              emit.physical_front(a.family, combined, cur, nxt, ev.x, Front::Origin::Simplified));
          cur = nxt;
        }
        if (auto np = emit.nonphysical_front(cur, b.right, ev.x, Front::Origin::Simplified)) {
          out.push_back(*np);
          ++s.nonphysical_created;
        }
      } else {
        // a is the 2-wave catching the 1-wave b: let them cross unaltered
        const GasState a1 = lax_curve(ctx.law, WaveFamily::One, a.left, b.sigma);
        out.push_back(
            emit.physical_front(WaveFamily::One, b.sigma, a.left, a1, ev.x, b.origin));
        const GasState b2 = lax_curve(ctx.law, WaveFamily::Two, a1, a.sigma);
        out.push_back(emit.physical_front(WaveFamily::Two, a.sigma, a1, b2, ev.x, a.origin));
        if (auto np = emit.nonphysical_front(b2, b.right, ev.x, Front::Origin::Simplified)) {
          out.push_back(*np);
          ++s.nonphysical_created;
        }
      }
    }
    for (const Front& f : out) rec.sizes_out.push_back(f.sigma);
    engine_detail::replace_fronts(s, ev.a, 2, out);
    ++s.interactions;
    return rec;
  }

  // junction hit
  Front f = s.fronts[ev.a];
  f.x = ev.x;
  const int j = ev.junction;
  const double am = ctx.profile.as[j];
  const double ap = ctx.profile.as[j + 1];
  rec.sizes_in = {f.sigma};
  std::vector<Front> out;

  if (f.family == WaveFamily::NonPhysical) {
    rec.kind = EventRecord::Kind::NonPhysicalJunction;
    const GasState tl = t_map(ctx.claw, ctx.law, am, ap, f.left, ctx.box, ctx.ode);
    const GasState tr = t_map(ctx.claw, ctx.law, am, ap, f.right, ctx.box, ctx.ode);
    if (auto np = emit.nonphysical_front(tl, tr, ev.x, Front::Origin::Refracted)) {
      out.push_back(*np);
    }
    s.traces[j] = {j, ev.x, f.left, tl};
  } else {
    rec.kind = EventRecord::Kind::JunctionHit;
    GasState ul, ur;
    if (f.speed > 0.0) {
      ul = f.left;
      ur = s.traces[j].plus;
    } else {
      ul = s.traces[j].minus;
      ur = f.right;
    }
    const JunctionFan fan =
        solve_junction_riemann(ctx.claw, ctx.law, am, ul, ap, ur, ctx.box, ctx.ode);
    out = emit.junction_waves(fan, ev.x);
    s.traces[j] = {j, ev.x, fan.trace_minus, fan.trace_plus};
    ++s.junction_hits;
  }
  for (const Front& fo : out) rec.sizes_out.push_back(fo.sigma);
  engine_detail::replace_fronts(s, ev.a, 1, out);
  return rec;
}

/// Run the event loop to t_end, logging the Glimm functionals across every event.
inline Timeline evolve(const EvolveContext& ctx, const PiecewiseDatum& datum) {
  Timeline tl;
  tl.ctx = ctx;
  std::uint32_t ids = 0;
  WftState s = init_approximation(ctx, datum, ids);
  tl.snapshots.push_back(s);
  double last_snap_t = 0.0;

  for (std::uint64_t n = 0;; ++n) {
    if (n >= ctx.params.max_events) {
      throw SolverError("evolve: event cap " + std::to_string(ctx.params.max_events) +
                        " exceeded at t = " + std::to_string(s.t) + " with " +
                        std::to_string(s.fronts.size()) + " fronts");
    }
    auto ev = next_event(s, ctx.profile, ctx.params.t_end);
    if (!ev) break;

    // Upsilon is constant between events; measure it before moving the fronts
    // so boundary roundoff cannot misassign pipes.
    const GlimmReport before = glimm_functionals(s, ctx.profile, ctx.weight_C);
    engine_detail::advance_to(s, ev->t);
    EventRecord rec = handle_interaction(ctx, s, *ev, ids);
    const GlimmReport after = glimm_functionals(s, ctx.profile, ctx.weight_C);

    rec.index = n;
    rec.v_before = before.V;
    rec.q_before = before.Q;
    rec.upsilon_before = before.upsilon;
    rec.v_after = after.V;
    rec.q_after = after.Q;
    rec.upsilon_after = after.upsilon;
    tl.events.push_back(rec);

    if (ctx.enforce_upsilon && after.upsilon > before.upsilon + ctx.params.upsilon_tol) {
      throw InvariantViolation(
          "evolve: Upsilon increased at event " + std::to_string(n) + " (t = " +
          std::to_string(rec.t) + ", kind = " + event_kind_name(rec.kind) + "): " +
          std::to_string(before.upsilon) + " -> " + std::to_string(after.upsilon));
    }

    if (ctx.params.snapshot_every_event ||
        (ctx.params.snapshot_dt > 0.0 && s.t - last_snap_t >= ctx.params.snapshot_dt)) {
      tl.snapshots.push_back(s);
      last_snap_t = s.t;
    }
  }

  engine_detail::advance_to(s, ctx.params.t_end);
  tl.snapshots.push_back(s);
  tl.final_state = s;
  return tl;
}

inline PiecewiseState Timeline::sample(double t) const {
  if (t < 0.0 || t > ctx.params.t_end + 1e-12) {
    throw UsageError("Timeline::sample: t outside [0, t_end]");
  }
  // last snapshot at or before t; snapshots at event times hold the post-event state
  const WftState* snap = &snapshots.front();
  for (const WftState& s : snapshots) {
    if (s.t <= t + 1e-15) snap = &s;
  }
  WftState adv = *snap;
  engine_detail::advance_to(adv, t);
  return detail::to_piecewise(adv);
}

}  // namespace fronttrack
