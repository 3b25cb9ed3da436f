#include <catch2/catch_amalgamated.hpp>

#include "fronttrack/residuals.hpp"
#include "fronttrack/experiments.hpp"
#include "oracles.hpp"

using namespace fronttrack;
using Catch::Approx;

namespace {

PipeProfile uniform_profile() {
  PipeProfile p;
  p.as = {1.0};
  return p;
}

Front make_front(const PressureLaw& law, WaveFamily fam, const GasState& l, double sigma,
                 double x) {
  Front f;
  f.family = fam;
  f.sigma = sigma;
  f.left = l;
  f.right = lax_curve(law, fam, l, sigma);
  f.x = x;
  f.speed = front_speed(law, fam, f.left, f.right, sigma);
  return f;
}

}  // namespace

TEST_CASE("glimm functionals on simple states") {
  const auto iso = PressureLaw::isothermal(1.0);
  const PipeProfile flat = uniform_profile();

  WftState empty;
  empty.far_left = {1.0, 0.0};
  const GlimmReport z = glimm_functionals(empty, flat, 0.0);
  CHECK(z.V == 0.0);
  CHECK(z.Q == 0.0);
  CHECK(z.upsilon == 0.0);

  WftState one;
  one.far_left = {1.0, 0.0};
  one.fronts = {make_front(iso, WaveFamily::Two, {1.0, 0.0}, -0.05, 0.3)};
  const GlimmReport g1 = glimm_functionals(one, flat, 0.0);
  CHECK(g1.V == Approx(0.05));
  CHECK(g1.Q == 0.0);

  // approaching pair: 1-wave to the right of a 2-wave
  WftState two = one;
  two.fronts.push_back(make_front(iso, WaveFamily::One, {1.0, 0.0}, -0.02, 1.0));
  const GlimmReport g2 = glimm_functionals(two, flat, 0.0);
  CHECK(g2.Q == Approx(0.05 * 0.02));
  CHECK(g2.approaching_pairs == 1);
  CHECK(g2.upsilon == Approx(g2.V + g2.C0 * g2.Q));

  // same family, both rarefactions: not approaching
  WftState fans;
  fans.far_left = {1.0, 0.0};
  fans.fronts = {make_front(iso, WaveFamily::Two, {1.0, 0.0}, 0.01, 0.0),
                 make_front(iso, WaveFamily::Two, {1.01, 0.0}, 0.01, 0.2)};
  CHECK(glimm_functionals(fans, flat, 0.0).Q == 0.0);
}

TEST_CASE("junction weights follow the crossing sums") {
  const auto iso = PressureLaw::isothermal(1.0);
  PipeProfile prof;
  prof.xs = {0.0};
  prof.as = {1.0, 1.1};
  const double C = 3.0;

  WftState s;
  s.far_left = {1.0, 0.0};
  s.fronts = {make_front(iso, WaveFamily::Two, {1.0, 0.0}, -0.05, -1.0),   // will cross
              make_front(iso, WaveFamily::Two, {1.0, 0.0}, -0.05, 1.0),    // already crossed
              make_front(iso, WaveFamily::One, {1.0, 0.0}, -0.05, -1.5),   // moving away
              make_front(iso, WaveFamily::One, {1.0, 0.0}, -0.05, 2.0)};   // will cross
  const GlimmReport g = glimm_functionals(s, prof, C);
  const double w = std::exp(C * 0.1);
  CHECK(g.contributions[0] == Approx(0.05 * w));   // 2-wave left of the junction
  CHECK(g.contributions[1] == Approx(0.05));       // 2-wave right of it
  CHECK(g.contributions[2] == Approx(0.05));       // 1-wave left of it
  CHECK(g.contributions[3] == Approx(0.05 * w));   // 1-wave right of it
  for (double c : g.contributions) {
    CHECK(c >= 0.05 - 1e-15);
    CHECK(c <= 0.05 * std::exp(C * prof.tv()) + 1e-15);
  }
}

TEST_CASE("weight constant choice") {
  PipeProfile prof;
  prof.xs = {0.0, 1.0};
  prof.as = {1.0, 1.03, 1.05};  // TV = 0.05
  const WeightChoice w = choose_weight_constant(prof, 0.5, 0.5, 1.0);
  CHECK(w.C == Approx(20.0));
  CHECK(w.tv_bound == Approx(1.0 / (4.0 * std::exp(1.0))));
  CHECK(w.admissible());

  // exact boundary is rejected (strict inequality)
  PipeProfile edge;
  edge.xs = {0.0};
  edge.as = {1.0, 1.0 + 1.0 / (4.0 * std::exp(1.0))};
  const WeightChoice we = choose_weight_constant(edge, 0.5, 0.5, 1.0);
  CHECK_FALSE(we.tv_ok);
  CHECK_FALSE(we.admissible());

  // an oversized single jump trips the per-jump bound
  PipeProfile jumpy;
  jumpy.xs = {0.0};
  jumpy.as = {1.0, 1.09};
  const WeightChoice wj = choose_weight_constant(jumpy, 0.5, 9.0, 1.0);
  CHECK_FALSE(wj.jump_ok);
  CHECK(wj.describe().find("ln2/K2") != std::string::npos);

  CHECK_THROWS_AS(choose_weight_constant(uniform_profile(), 0.5, 0.5, 1.0), UsageError);
}

TEST_CASE("phi distance") {
  const auto iso = PressureLaw::isothermal(1.0);
  const PipeProfile flat = uniform_profile();

  WftState a;
  a.far_left = {1.0, 0.1};
  CHECK(phi_distance(iso, flat, a, a, 0.0, 1.0, 10.0, -2.0, 2.0) == 0.0);

  // two copies of one shock offset by d: Phi = d |sigma| W. Inside the offset
  // strip the connecting strength runs from the post-shock state of s1 back to
  // the pre-shock state, a positive 2-strength, so neither state contributes
  // approaching same-family mass there and W = 1 + kappa1 kappa2 (Y1 + Y2).
  const double sigma = -0.01, d = 0.3;
  WftState s1 = a, s2 = a;
  s1.fronts = {make_front(iso, WaveFamily::Two, a.far_left, sigma, 0.0)};
  s2.fronts = {make_front(iso, WaveFamily::Two, a.far_left, sigma, d)};
  const double ups = glimm_functionals(s1, flat, 0.0).upsilon +
                     glimm_functionals(s2, flat, 0.0).upsilon;
  const double kappa1 = 1.0, kappa2 = 10.0;
  const double w_expected = 1.0 + kappa1 * kappa2 * ups;
  const double phi = phi_distance(iso, flat, s1, s2, 0.0, kappa1, kappa2, -2.0, 2.0);
  CHECK(phi == Approx(d * std::abs(sigma) * w_expected).epsilon(2e-2));

  // equivalence with the L1 distance on nearby piecewise states
  oracles::StateSampler sampler(71, 0.4);
  for (int k = 0; k < 10; ++k) {
    WftState u = a, v = a;
    u.fronts = {make_front(iso, WaveFamily::Two, a.far_left, sampler.uniform(-0.05, 0.05), -0.5)};
    v.fronts = {make_front(iso, WaveFamily::One, a.far_left, sampler.uniform(-0.05, 0.05), 0.4)};
    const double l1 = l1_distance(detail::to_piecewise(u), detail::to_piecewise(v), -3.0, 3.0);
    const double ph = phi_distance(iso, flat, u, v, 0.0, kappa1, kappa2, -3.0, 3.0);
    if (l1 > 1e-12) {
      CHECK(ph / l1 > 0.05);
      CHECK(ph / l1 < 20.0);
    }
  }
}

TEST_CASE("weak residual vanishes for exact solutions") {
  // stationary data across junctions
  {
    ScenarioConfig cfg;
    cfg.law = PressureLaw::isothermal(1.0);
    PipeProfile prof;
    prof.xs = {0.0};
    prof.as = {1.0, 1.06};
    cfg.pc_profile = prof;
    cfg.initial.kind = InitialSpec::Kind::Stationary;
    cfg.initial.reference = {1.0, 0.3};
    cfg.params.t_end = 2.0;
    const RunReport rep = run_scenario(cfg, false);
    const TestBump bump(1.0, 0.8, -1.5, 1.2);  // support strictly left of the junction
    CHECK(weak_residual(rep.timeline, bump) < 1e-9);
    CHECK(std::abs(entropy_residual(rep.timeline, bump)) < 1e-9);
  }

  // a single exact shock: Rankine-Hugoniot makes the weak form exact
  {
    EvolveContext ctx;
    ctx.law = PressureLaw::isothermal(1.0);
    ctx.profile.as = {1.0};
    ctx.params.t_end = 2.0;
    ctx.params.lambda_hat = 2.0;
    PiecewiseDatum d;
    const GasState ul{1.0, 0.2};
    d.xs = {0.0};
    d.states = {ul, lax_curve(ctx.law, WaveFamily::Two, ul, -0.1)};
    const Timeline tl = evolve(ctx, d);
    const TestBump bump(1.0, 0.9, 0.3, 1.0);  // straddles the shock path
    CHECK(weak_residual(tl, bump) < 1e-8);
    CHECK(entropy_residual(tl, bump) >= -1e-10);  // entropic shock
  }

  // support touching a junction is rejected
  {
    ScenarioConfig cfg;
    cfg.law = PressureLaw::isothermal(1.0);
    PipeProfile prof;
    prof.xs = {0.0};
    prof.as = {1.0, 1.06};
    cfg.pc_profile = prof;
    cfg.initial.kind = InitialSpec::Kind::Stationary;
    cfg.initial.reference = {1.0, 0.3};
    cfg.params.t_end = 1.0;
    const RunReport rep = run_scenario(cfg, false);
    const TestBump bad(0.5, 0.4, -0.1, 0.3);
    CHECK_THROWS_AS(weak_residual(rep.timeline, bad), UsageError);
  }
}

TEST_CASE("entropy defect of a single fan step is quadratic") {
  // A fan front rides at the right-state characteristic speed, which differs
  // from the RH speed at first order in the size, so its entropy production is
  // O(sigma^2) per front. (The cubic rate belongs to Hugoniot jumps at the RH
  // speed; a fan front is not one.)
  const auto iso = PressureLaw::isothermal(1.0);
  const GasState u{1.0, 0.1};
  std::vector<double> defects;
  for (double eps : {4e-2, 2e-2, 1e-2, 5e-3}) {
    const GasState r = lax_curve(iso, WaveFamily::Two, u, eps);
    const double s = characteristic_speed(iso, WaveFamily::Two, r);
    auto [el, fl] = entropy_pair(iso, u);
    auto [er, fr] = entropy_pair(iso, r);
    defects.push_back(std::abs(s * (er - el) - (fr - fl)));
  }
  const auto slopes = oracles::richardson_slopes(defects);
  for (double s : slopes) CHECK(s == Approx(2.0).margin(0.2));

  // the RH-speed defect of the same jump is the cubic one
  std::vector<double> rh_defects;
  for (double eps : {4e-2, 2e-2, 1e-2, 5e-3}) {
    const GasState r = lax_curve(iso, WaveFamily::Two, u, eps);
    const double s = rankine_hugoniot_speed(u, r);
    auto [el, fl] = entropy_pair(iso, u);
    auto [er, fr] = entropy_pair(iso, r);
    rh_defects.push_back(std::abs(s * (er - el) - (fr - fl)));
  }
  for (double s : oracles::richardson_slopes(rh_defects)) CHECK(s == Approx(3.0).margin(0.2));
}

TEST_CASE("weak residual scales with the fan step") {
  // rarefaction-heavy run: the defect comes from the fan discretization
  auto run_with_eps = [&](double eps) {
    EvolveContext ctx;
    ctx.law = PressureLaw::isothermal(1.0);
    ctx.profile.as = {1.0};
    ctx.params.t_end = 1.0;
    ctx.params.eps = eps;
    ctx.params.lambda_hat = 2.0;
    PiecewiseDatum d;
    const GasState ul{1.2, 0.0};
    d.xs = {0.0};
    d.states = {ul, lax_curve(ctx.law, WaveFamily::Two, ul, 0.12)};
    const Timeline tl = evolve(ctx, d);
    const TestBump bump(0.5, 0.45, 0.35, 0.8);
    return weak_residual(tl, bump);
  };
  std::vector<double> res;
  for (double eps : {4e-3, 2e-3, 1e-3}) res.push_back(run_with_eps(eps));
  const auto slopes = oracles::richardson_slopes(res);
  for (double s : slopes) CHECK(s >= 0.8);
}

TEST_CASE("local Riemann-structure diagnostic") {
  // constant state: identically zero
  {
    EvolveContext ctx;
    ctx.law = PressureLaw::isothermal(1.0);
    ctx.profile.as = {1.0};
    ctx.params.t_end = 1.0;
    ctx.params.lambda_hat = 2.0;
    PiecewiseDatum d;
    d.states = {{1.0, 0.2}};
    const Timeline tl = evolve(ctx, d);
    const auto rep = integral_condition_check(tl, 0.2, 0.1, {0.2, 0.1, 0.05});
    for (const auto& row : rep.rows) CHECK(row.value < 1e-13);
  }

  // a point on an isolated exact shock: the local solution is the fan itself
  {
    EvolveContext ctx;
    ctx.law = PressureLaw::isothermal(1.0);
    ctx.profile.as = {1.0};
    ctx.params.t_end = 2.0;
    ctx.params.lambda_hat = 2.0;
    PiecewiseDatum d;
    const GasState ul{1.0, 0.2};
    d.xs = {0.0};
    d.states = {ul, lax_curve(ctx.law, WaveFamily::Two, ul, -0.1)};
    const Timeline tl = evolve(ctx, d);
    const double s = tl.final_state.fronts[0].speed;
    const auto rep = integral_condition_check(tl, 0.5, 0.5 * s, {0.1, 0.05, 0.025});
    for (const auto& row : rep.rows) CHECK(row.value < 1e-11);
  }

  // junction with stationary data: the stationary jump solves it exactly
  {
    ScenarioConfig cfg;
    cfg.law = PressureLaw::isothermal(1.0);
    PipeProfile prof;
    prof.xs = {0.0};
    prof.as = {1.0, 1.06};
    cfg.pc_profile = prof;
    cfg.initial.kind = InitialSpec::Kind::Stationary;
    cfg.initial.reference = {1.0, 0.3};
    cfg.params.t_end = 1.0;
    const RunReport rep = run_scenario(cfg, false);
    const auto ic = integral_condition_check(rep.timeline, 0.3, 0.0, {0.1, 0.05});
    CHECK(ic.junction_centered);
    for (const auto& row : ic.rows) CHECK(row.value < 1e-10);
  }
}
