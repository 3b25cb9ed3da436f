// Command-line driver: batch scenario runs and the experiment presets.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fronttrack/suite.hpp"

using namespace fronttrack;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

int guarded(int (*body)(void*), void* arg) {
  try {
    return body(arg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

struct RunArgs {
  std::string config;
  std::string out_dir;
  long long seed = -1;
};

int do_run(void* p) {
  auto& a = *static_cast<RunArgs*>(p);
  ScenarioConfig cfg = parse_scenario_text(slurp(a.config));
  if (!a.out_dir.empty()) cfg.out_dir = a.out_dir;
  if (a.seed >= 0) cfg.seed = static_cast<std::uint64_t>(a.seed);
  const RunReport rep = run_scenario(cfg);
  std::cout << run_summary_json(cfg, rep).dump(2) << "\n";
  if (rep.prep.admissible && !rep.upsilon_monotone) {
    std::cerr << "invariant violation: Upsilon increased by " << rep.worst_upsilon_jump << "\n";
    return 4;
  }
  return 0;
}

struct AmplifyArgs {
  AmplifyOptions opt;
  std::string out_dir = "out";
};

int do_amplify(void* p) {
  auto& a = *static_cast<AmplifyArgs*>(p);
  const PressureLaw law = PressureLaw::isothermal(a.opt.sound_speed);
  const AmplifyReport rep = amplification_experiment(law, a.opt);

  Json j;
  j["vbar_over_c"] = a.opt.vbar_over_c;
  j["da_over_a"] = a.opt.da_over_a;
  j["repeats"] = a.opt.repeats;
  j["sigma2"] = a.opt.sigma2;
  j["khat_fitted"] = rep.khat;
  j["kgrande"] = rep.kgrande_value;
  j["rel_err_vs_kgrande"] = rep.rel_err_vs_kgrande;
  j["attenuates"] = rep.attenuates;
  j["pairs_to_double"] = rep.pairs_to_double;
  j["predicted_pairs_to_double"] = rep.predicted_pairs_to_double;
  j["regime_breakdown"] = rep.regime_breakdown;
  if (rep.regime_breakdown) {
    j["breakdown_pair"] = rep.breakdown_pair;
    j["breakdown_what"] = rep.breakdown_what;
  }
  std::cout << j.dump(2) << "\n";

  std::ostringstream csv;
  csv << "pair,sigma_in,sigma_mid,sigma_out,ratio\n";
  for (const PairCrossing& pc : rep.crossings) {
    csv << pc.pair << ',' << fmt17(pc.sigma_in) << ',' << fmt17(pc.sigma_mid) << ','
        << fmt17(pc.sigma_out) << ',' << fmt17(pc.ratio) << '\n';
  }
  write_text_file(std::filesystem::path(a.out_dir) / "amplify" / "crossings.csv", csv.str());
  std::ostringstream fit;
  fit << "theta,khat\n";
  for (auto& [t, k] : rep.khat_by_theta) fit << fmt17(t) << ',' << fmt17(k) << '\n';
  write_text_file(std::filesystem::path(a.out_dir) / "amplify" / "khat_fit.csv", fit.str());
  write_text_file(std::filesystem::path(a.out_dir) / "amplify" / "summary.json",
                  j.dump(2) + "\n");
  return 0;
}

struct ConvergeArgs {
  std::string config;
  std::vector<int> ns;
  std::string out_dir;
};

int do_converge(void* p) {
  auto& a = *static_cast<ConvergeArgs*>(p);
  ScenarioConfig cfg = parse_scenario_text(slurp(a.config));
  if (!cfg.smooth_profile) throw ConfigError("converge needs a scenario with a smooth profile");
  if (!a.out_dir.empty()) cfg.out_dir = a.out_dir;

  ConvergenceOptions opt;
  opt.smooth = *cfg.smooth_profile;
  opt.reference = cfg.initial.reference;
  opt.initial = cfg.initial;
  if (!a.ns.empty()) opt.ns = a.ns;
  opt.eps = cfg.params.eps;
  opt.t_end = cfg.params.t_end;
  opt.times = {0.5 * cfg.params.t_end, cfg.params.t_end};
  const ConvergenceReport rep = convergence_experiment(cfg.law, opt);

  Json j;
  j["n_ref"] = rep.n_ref;
  j["distances_monotone"] = rep.distances_monotone;
  j["hat_slope"] = rep.hat_slope;
  std::cout << j.dump(2) << "\n";

  std::ostringstream csv;
  csv << "n";
  for (double t : opt.times) csv << ",d_t" << fmt17(t);
  csv << ",hat_l1\n";
  for (size_t k = 0; k < rep.rows.size(); ++k) {
    csv << rep.rows[k].n;
    for (double d : rep.rows[k].distances) csv << ',' << fmt17(d);
    csv << ',' << fmt17(rep.hat_l1[k]) << '\n';
  }
  write_text_file(std::filesystem::path(cfg.out_dir) / "converge" / "distances.csv", csv.str());
  write_text_file(std::filesystem::path(cfg.out_dir) / "converge" / "summary.json",
                  j.dump(2) + "\n");
  return 0;
}

struct StabilityArgs {
  std::string config;
  double perturb = 1e-3;
  std::string out_dir;
};

int do_stability(void* p) {
  auto& a = *static_cast<StabilityArgs*>(p);
  ScenarioConfig cfg = parse_scenario_text(slurp(a.config));
  if (!a.out_dir.empty()) cfg.out_dir = a.out_dir;

  StabilityOptions opt;
  opt.drho = a.perturb;
  opt.dq = 0.0;
  const PreparedScenario prep = prepare_scenario(cfg);
  const double lo = prep.ctx.profile.xs.empty() ? -1.0 : prep.ctx.profile.xs.front();
  opt.x_lo = lo - 0.8;
  opt.x_hi = lo - 0.2;
  opt.times = {0.25 * cfg.params.t_end, 0.5 * cfg.params.t_end, 0.75 * cfg.params.t_end,
               cfg.params.t_end};
  const StabilityReport rep = stability_experiment(cfg, opt);

  Json j;
  j["d0"] = rep.d0;
  j["empirical_L"] = rep.empirical_L;
  j["phi_bounded"] = rep.phi_bounded;
  std::cout << j.dump(2) << "\n";

  std::ostringstream csv;
  csv << "t,distance,ratio,phi\n";
  for (size_t k = 0; k < rep.times.size(); ++k) {
    csv << fmt17(rep.times[k]) << ',' << fmt17(rep.distances[k]) << ',' << fmt17(rep.ratios[k])
        << ',' << fmt17(rep.phi_values[k]) << '\n';
  }
  write_text_file(std::filesystem::path(cfg.out_dir) / "stability" / "trace.csv", csv.str());
  write_text_file(std::filesystem::path(cfg.out_dir) / "stability" / "summary.json",
                  j.dump(2) + "\n");
  return 0;
}

struct CheckArgs {
  CheckOptions opt;
  std::string out_dir = "out";
};

int do_check(void* p) {
  auto& a = *static_cast<CheckArgs*>(p);
  const CheckReport rep = run_check_suite(a.opt);
  Json j;
  j["scenarios_run"] = rep.scenarios_run;
  j["total_events"] = rep.total_events;
  j["upsilon_violations"] = rep.upsilon_violations;
  j["worst_upsilon_jump"] = rep.worst_upsilon_jump;
  j["max_trace_residual"] = rep.max_trace_residual;
  j["sigma_axiom_failures"] = rep.sigma_axiom_failures;
  j["worst_additivity"] = rep.worst_additivity;
  j["worst_reversibility"] = rep.worst_reversibility;
  j["worst_reparametrization"] = rep.worst_reparam;
  j["equivalence_failures"] = rep.equivalence_failures;
  j["worst_equivalence"] = rep.worst_equivalence;
  j["determinism_ok"] = rep.determinism_ok;
  j["solver_errors"] = rep.solver_errors;
  j["notes"] = rep.notes;
  const bool pass = rep.pass(a.opt.min_total_events);
  j["pass"] = pass;
  std::cout << j.dump(2) << "\n";
  write_text_file(std::filesystem::path(a.out_dir) / "check" / "summary.json", j.dump(2) + "\n");
  if (!pass) {
    if (rep.upsilon_violations > 0) return 4;
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wave-front-tracking solver for gas flow in pipes with varying section"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "run a scenario config and emit tables");
  run->add_option("config", run_args.config, "scenario JSON file")->required();
  run->add_option("--out-dir", run_args.out_dir, "output root (overrides config)");
  run->add_option("--seed", run_args.seed, "RNG seed (overrides config)");

  AmplifyArgs amp_args;
  auto* amp = app.add_subcommand("amplify", "2-wave through repeated up-down section pairs");
  amp->add_option("--vbar-over-c", amp_args.opt.vbar_over_c, "mean-flow speed ratio")->required();
  amp->add_option("--da-over-a", amp_args.opt.da_over_a, "relative section bump")->required();
  amp->add_option("--repeats", amp_args.opt.repeats, "number of up-down pairs");
  amp->add_option("--sigma", amp_args.opt.sigma2, "incoming 2-wave size");
  amp->add_option("--out-dir", amp_args.out_dir, "output root");

  ConvergeArgs conv_args;
  auto* conv = app.add_subcommand("converge", "staircase resolution convergence");
  conv->add_option("--profile", conv_args.config, "scenario JSON with a smooth profile")
      ->required();
  conv->add_option("--n-list", conv_args.ns, "resolutions")->delimiter(',');
  conv->add_option("--out-dir", conv_args.out_dir, "output root");

  StabilityArgs stab_args;
  auto* stab = app.add_subcommand("stability", "paired evolutions of nearby data");
  stab->add_option("config", stab_args.config, "scenario JSON file")->required();
  stab->add_option("--perturb", stab_args.perturb, "density perturbation size");
  stab->add_option("--out-dir", stab_args.out_dir, "output root");

  CheckArgs check_args;
  auto* chk = app.add_subcommand("check", "randomized invariant suite");
  chk->add_option("--seed", check_args.opt.seed, "suite seed");
  chk->add_option("--scenarios", check_args.opt.scenarios, "number of random evolutions");
  chk->add_flag("--quick", check_args.opt.quick, "reduced sample counts");
  chk->add_option("--out-dir", check_args.out_dir, "output root");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return guarded(do_run, &run_args);
  if (amp->parsed()) return guarded(do_amplify, &amp_args);
  if (conv->parsed()) return guarded(do_converge, &conv_args);
  if (stab->parsed()) return guarded(do_stability, &stab_args);
  if (chk->parsed()) return guarded(do_check, &check_args);
  return 1;
}
