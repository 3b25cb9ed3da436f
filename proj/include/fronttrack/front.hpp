#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fronttrack/profiles.hpp"

namespace fronttrack {

/// A traveling discontinuity. For physical families `sigma` is the curve
/// parameter (density increment); for non-physical fronts it is the l1 norm of
/// the jump and the speed is the fixed lambda_hat.
struct Front {
  enum class Origin { Initial, Accurate, Fan, Simplified, Refracted };

  WaveFamily family = WaveFamily::Two;
  double sigma = 0.0;
  double x = 0.0;
  double speed = 0.0;
  GasState left, right;
  Origin origin = Origin::Initial;
  std::uint32_t id = 0;
};

inline double nonphysical_size(const GasState& l, const GasState& r) {
  return std::abs(r.rho - l.rho) + std::abs(r.q - l.q);
}

/// Current trace pair at a junction; satisfies the coupling condition.
struct JunctionTraceState {
  int index = 0;  // junction index into the profile
  double x = 0.0;
  GasState minus, plus;
};

/// Complete piecewise-constant solution at one instant: ordered fronts plus the
/// static junction jumps. The constant state left of everything closes the chain.
struct WftState {
  double t = 0.0;
  GasState far_left;
  std::vector<Front> fronts;               // ordered by x, ties by speed
  std::vector<JunctionTraceState> traces;  // one per junction, ordered
  std::uint64_t interactions = 0;
  std::uint64_t junction_hits = 0;
  std::uint64_t nonphysical_created = 0;
};

struct WftParams {
  double eps = 1e-3;           // rarefaction fan step
  double eps_check = -1.0;     // interaction threshold; < 0 means eps^2
  double lambda_hat = -1.0;    // non-physical speed; < 0 means auto from the datum
  double t_end = 1.0;
  double zero_size_tol = 1e-13;
  double upsilon_tol = 1e-9;
  std::uint64_t max_events = 1000000;
  bool snapshot_every_event = true;
  double snapshot_dt = 0.0;  // used when snapshot_every_event is false

  double threshold() const { return eps_check > 0.0 ? eps_check : eps * eps; }
};

struct EventRecord {
  enum class Kind { Accurate, Simplified, NonPhysicalCross, JunctionHit, NonPhysicalJunction };

  std::uint64_t index = 0;
  Kind kind = Kind::Accurate;
  double t = 0.0;
  double x = 0.0;
  int junction = -1;
  std::vector<double> sizes_in, sizes_out;
  double v_before = 0.0, q_before = 0.0, upsilon_before = 0.0;
  double v_after = 0.0, q_after = 0.0, upsilon_after = 0.0;
};

inline const char* event_kind_name(EventRecord::Kind k) {
  switch (k) {
    case EventRecord::Kind::Accurate: return "accurate";
    case EventRecord::Kind::Simplified: return "simplified";
    case EventRecord::Kind::NonPhysicalCross: return "np_cross";
    case EventRecord::Kind::JunctionHit: return "junction";
    case EventRecord::Kind::NonPhysicalJunction: return "np_junction";
  }
  return "?";
}

/// Piecewise-constant trace of the solution at a fixed time.
struct PiecewiseState {
  std::vector<double> xs;
  std::vector<GasState> states;  // size xs.size() + 1; states[k] prevails left of xs[k]

  GasState at(double x) const {
    size_t i = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin();
    return states[i];
  }
};

/// L1 distance between two piecewise-constant traces over [lo, hi].
inline double l1_distance(const PiecewiseState& u1, const PiecewiseState& u2, double lo,
                          double hi) {
  std::vector<double> cuts{lo, hi};
  for (double x : u1.xs)
    if (x > lo && x < hi) cuts.push_back(x);
  for (double x : u2.xs)
    if (x > lo && x < hi) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double w = cuts[k + 1] - cuts[k];
    if (w <= 0.0) continue;
    const double xm = 0.5 * (cuts[k] + cuts[k + 1]);
    const GasState a = u1.at(xm), b = u2.at(xm);
    acc += w * (std::abs(a.rho - b.rho) + std::abs(a.q - b.q));
  }
  return acc;
}

}  // namespace fronttrack
