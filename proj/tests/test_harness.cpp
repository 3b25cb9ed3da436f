#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "fronttrack/suite.hpp"
#include "oracles.hpp"

using namespace fronttrack;
using Catch::Approx;

namespace {

const char* kScenarioText = R"({
  "name": "unit",
  "pressure_law": {"kind": "isothermal", "c": 1.0},
  "profile": {"kind": "pc", "junctions": [0.0], "sections": [1.0, 1.05]},
  "initial": {"kind": "wave", "family": 2, "sigma": -0.01, "x0": -0.5, "rho": 1.0, "q": 0.3},
  "params": {"epsilon": 0.002, "t_end": 1.0}
})";

}  // namespace

TEST_CASE("config parsing and validation") {
  const ScenarioConfig cfg = parse_scenario_text(kScenarioText);
  CHECK(cfg.name == "unit");
  CHECK(cfg.law.is_isothermal());
  REQUIRE(cfg.pc_profile.has_value());
  CHECK(cfg.pc_profile->junction_count() == 1);
  CHECK(cfg.initial.kind == InitialSpec::Kind::Wave);
  CHECK(cfg.params.eps == Approx(0.002));

  CHECK_THROWS_AS(parse_scenario_text("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_text(R"({"profile": {}})"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_text(
                      R"({"pressure_law": {"kind": "isothermal", "c": 1.0},
                          "profile": {"kind": "pc", "junctions": [0], "sections": [1.0]},
                          "initial": {"kind": "stationary"}})"),
                  ConfigError);  // sections must outnumber junctions by one
  CHECK_THROWS_AS(parse_scenario_text(
                      R"({"pressure_law": {"kind": "isothermal", "c": 1.0},
                          "profile": {"kind": "pc", "junctions": [0], "sections": [1.0, 1.1]},
                          "initial": {"kind": "wave", "family": 3, "sigma": 0.1, "x0": -1}})"),
                  ConfigError);  // bad family
  // wave must start in the pipe it travels from
  CHECK_THROWS_AS(prepare_scenario(parse_scenario_text(
                      R"({"pressure_law": {"kind": "isothermal", "c": 1.0},
                          "profile": {"kind": "pc", "junctions": [0], "sections": [1.0, 1.05]},
                          "initial": {"kind": "wave", "family": 2, "sigma": -0.01, "x0": 0.5,
                                      "rho": 1.0, "q": 0.3}})")),
                  ConfigError);
}

TEST_CASE("run_scenario emits the declared artifacts") {
  ScenarioConfig cfg = parse_scenario_text(kScenarioText);
  const auto dir = std::filesystem::temp_directory_path() / "fronttrack_unit_out";
  std::filesystem::remove_all(dir);
  cfg.out_dir = dir.string();
  const RunReport rep = run_scenario(cfg);
  CHECK(rep.events > 0);
  for (const char* name : {"events.log", "snapshots.csv", "functionals.csv", "summary.json"}) {
    CHECK(std::filesystem::exists(dir / "unit" / name));
  }
  // summary round-trips through JSON
  const Json j = Json::parse(std::ifstream(dir / "unit" / "summary.json"));
  CHECK(j["events"].get<std::uint64_t>() == rep.events);
  CHECK(j["junctions"].get<int>() == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("amplification experiment: attenuation at low speed") {
  const auto iso = PressureLaw::isothermal(1.0);
  AmplifyOptions opt;
  opt.vbar_over_c = 0.1;
  opt.da_over_a = 0.02;
  opt.repeats = 5;
  opt.sigma2 = -1e-4;
  const AmplifyReport rep = amplification_experiment(iso, opt);

  CHECK(kgrande(0.1) < 0.0);
  CHECK(kgrande(0.1) == Approx(-0.4744).epsilon(1e-3));
  CHECK(rep.attenuates);
  for (const PairCrossing& pc : rep.crossings) CHECK(pc.ratio < 1.0);
  CHECK(rep.khat < 0.0);
}

TEST_CASE("amplification experiment: acoustic limit of the pair coefficient") {
  // at rest the two-junction transmission is 4(1+theta)/(2+theta)^2 per pair,
  // i.e. the measured coefficient tends to -1/4
  const auto iso = PressureLaw::isothermal(1.0);
  AmplifyOptions opt;
  opt.vbar_over_c = 0.0;
  opt.repeats = 0;
  const AmplifyReport rep = amplification_experiment(iso, opt);
  CHECK(rep.khat == Approx(-0.25).margin(0.02));

  // finite theta closed form
  const double theta = 1e-3;
  const double r = amplify_detail::pair_ratio(CouplingLaw::smooth_section(), iso, 1.0, theta,
                                              -1e-7, {1.0, 0.0}, {}, {});
  CHECK(r == Approx(4.0 * (1.0 + theta) / ((2.0 + theta) * (2.0 + theta))).margin(1e-9));
}

TEST_CASE("stability: translated data stay at constant distance in a uniform pipe") {
  ScenarioConfig cfg;
  cfg.law = PressureLaw::isothermal(1.0);
  PipeProfile prof;
  prof.as = {1.0};
  cfg.pc_profile = prof;
  cfg.initial.kind = InitialSpec::Kind::Wave;
  cfg.initial.reference = {1.0, 0.2};
  cfg.initial.family = WaveFamily::Two;
  cfg.initial.sigma = -0.05;
  cfg.initial.x0 = -0.5;
  cfg.params.t_end = 1.0;

  // same shock shifted: distances are pure translation, ratio 1 for all t
  const PreparedScenario p1 = prepare_scenario(cfg);
  ScenarioConfig cfg2 = cfg;
  cfg2.initial.x0 = -0.45;
  const PreparedScenario p2 = prepare_scenario(cfg2);
  const RunReport r1 = run_prepared(p1);
  const RunReport r2 = run_prepared(p2);
  const double d0 = l1_distance(r1.timeline.sample(0.0), r2.timeline.sample(0.0), -3.0, 3.0);
  for (double t : {0.3, 0.7, 1.0}) {
    const double dt = l1_distance(r1.timeline.sample(t), r2.timeline.sample(t), -3.0, 3.0);
    CHECK(dt == Approx(d0).epsilon(1e-10));
  }
}

TEST_CASE("stability experiment: identical data give zero distances") {
  ScenarioConfig cfg = parse_scenario_text(kScenarioText);
  StabilityOptions opt;
  opt.drho = 0.0;
  opt.dq = 0.0;
  opt.x_lo = -1.5;
  opt.x_hi = -1.0;
  opt.times = {0.4, 0.9};
  const StabilityReport rep = stability_experiment(cfg, opt);
  CHECK(rep.d0 == 0.0);
  for (double d : rep.distances) CHECK(d < 1e-12);
}

TEST_CASE("stability experiment: perturbed stationary data through junctions") {
  ScenarioConfig cfg;
  cfg.law = PressureLaw::isothermal(1.0);
  PipeProfile prof;
  prof.xs = {0.0, 0.8};
  prof.as = {1.0, 1.04, 1.0};
  cfg.pc_profile = prof;
  cfg.initial.kind = InitialSpec::Kind::Stationary;
  cfg.initial.reference = {1.0, 0.3};
  cfg.params.t_end = 2.0;
  cfg.params.eps = 2e-3;

  StabilityOptions opt;
  opt.drho = 2e-3;
  opt.x_lo = -1.2;
  opt.x_hi = -0.4;
  opt.times = {0.5, 1.0, 1.5, 2.0};
  const StabilityReport rep = stability_experiment(cfg, opt);
  CHECK(rep.d0 > 0.0);
  CHECK(rep.empirical_L < 10.0);
  CHECK(rep.phi_bounded);
}

TEST_CASE("quick randomized invariants") {
  CheckOptions opt;
  opt.quick = true;
  opt.scenarios = 6;
  const CheckReport rep = run_check_suite(opt);
  CHECK(rep.upsilon_violations == 0);
  CHECK(rep.sigma_axiom_failures == 0);
  CHECK(rep.equivalence_failures == 0);
  CHECK(rep.determinism_ok);
  CHECK(rep.solver_errors == 0);
  CHECK(rep.worst_additivity < 1e-9);
  CHECK(rep.worst_reversibility < 1e-9);
  CHECK(rep.worst_reparam < 1e-9);
}
