#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fronttrack/engine.hpp"

namespace fronttrack {

using Json = nlohmann::ordered_json;

/// Initial datum selectors understood by the scenario runner.
struct InitialSpec {
  enum class Kind { Stationary, Constant, Wave, PerturbedStationary, Piecewise };
  Kind kind = Kind::Stationary;
  GasState reference{1.0, 0.0};  // left-pipe state the stationary datum is built from
  // wave
  WaveFamily family = WaveFamily::Two;
  double sigma = 0.0;
  double x0 = 0.0;
  // perturbation
  double x_lo = 0.0, x_hi = 0.0, drho = 0.0, dq = 0.0;
  // explicit piecewise
  std::vector<double> xs;
  std::vector<GasState> states;
};

struct ScenarioConfig {
  PressureLaw law = PressureLaw::isothermal(1.0);
  CouplingLaw claw = CouplingLaw::smooth_section();
  std::optional<PipeProfile> pc_profile;
  std::optional<SmoothProfile> smooth_profile;
  int smooth_resolution = 8;
  InitialSpec initial;
  WftParams params;
  JunctionBox box;
  OdeOptions ode;
  std::string upsilon_mode = "auto";  // "auto" | "enforce" | "off"
  double kappa1 = 1.0, kappa2 = 10.0;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  std::string name = "scenario";
};

namespace config_detail {

inline double require_number(const Json& j, const std::string& key, const std::string& ctx) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw ConfigError(ctx + ": missing or non-numeric field '" + key + "'");
  }
  return j[key].get<double>();
}

inline double number_or(const Json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ConfigError("field '" + key + "' must be numeric");
  return j[key].get<double>();
}

inline std::string require_string(const Json& j, const std::string& key, const std::string& ctx) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw ConfigError(ctx + ": missing or non-string field '" + key + "'");
  }
  return j[key].get<std::string>();
}

inline std::vector<double> require_array(const Json& j, const std::string& key,
                                         const std::string& ctx) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw ConfigError(ctx + ": missing or non-array field '" + key + "'");
  }
  std::vector<double> v;
  for (const auto& e : j[key]) {
    if (!e.is_number()) throw ConfigError(ctx + ": array '" + key + "' must hold numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

}  // namespace config_detail

inline PressureLaw parse_pressure_law(const Json& j) {
  using namespace config_detail;
  const std::string kind = require_string(j, "kind", "pressure_law");
  const double rho_star = number_or(j, "rho_star", 1.0);
  if (kind == "isothermal") {
    return PressureLaw::isothermal(require_number(j, "c", "pressure_law"), rho_star);
  }
  if (kind == "gamma_law") {
    return PressureLaw::gamma_law(require_number(j, "k", "pressure_law"),
                                  require_number(j, "gamma", "pressure_law"), rho_star);
  }
  throw ConfigError("pressure_law.kind must be 'isothermal' or 'gamma_law', got '" + kind + "'");
}

inline Json pressure_law_to_json(const PressureLaw& law) {
  Json j;
  if (law.kind() == PressureLaw::Kind::Isothermal) {
    j["kind"] = "isothermal";
    j["c"] = std::sqrt(law.k());
  } else {
    j["kind"] = "gamma_law";
    j["k"] = law.k();
    j["gamma"] = law.gamma();
  }
  j["rho_star"] = law.rho_star();
  return j;
}

inline ScenarioConfig parse_scenario(const Json& j) {
  using namespace config_detail;
  ScenarioConfig cfg;
  if (!j.contains("pressure_law")) throw ConfigError("missing 'pressure_law'");
  cfg.law = parse_pressure_law(j["pressure_law"]);

  if (j.contains("coupling")) {
    const std::string kind = require_string(j["coupling"], "kind", "coupling");
    if (kind != "smooth_section") {
      throw ConfigError("coupling.kind: only 'smooth_section' is configurable; custom coupling "
                        "laws are an API-level extension point");
    }
  }

  if (!j.contains("profile")) throw ConfigError("missing 'profile'");
  const Json& pj = j["profile"];
  const std::string pkind = require_string(pj, "kind", "profile");
  if (pkind == "pc") {
    PipeProfile p;
    p.xs = require_array(pj, "junctions", "profile");
    p.as = require_array(pj, "sections", "profile");
    p.a_ref = number_or(pj, "a_ref", 1.0);
    p.delta = number_or(pj, "delta", 0.25 * p.a_ref);
    p.validate();
    cfg.pc_profile = p;
  } else if (pkind == "smooth") {
    SmoothProfile sp;
    sp.xs = require_array(pj, "nodes_x", "profile");
    sp.as = require_array(pj, "nodes_a", "profile");
    sp.validate();
    cfg.smooth_profile = sp;
    cfg.smooth_resolution = static_cast<int>(number_or(pj, "resolution", 8));
    if (cfg.smooth_resolution < 1) throw ConfigError("profile.resolution must be >= 1");
  } else {
    throw ConfigError("profile.kind must be 'pc' or 'smooth'");
  }

  if (!j.contains("initial")) throw ConfigError("missing 'initial'");
  const Json& ij = j["initial"];
  const std::string ikind = require_string(ij, "kind", "initial");
  InitialSpec& in = cfg.initial;
  in.reference = {number_or(ij, "rho", 1.0), number_or(ij, "q", 0.0)};
  if (ikind == "stationary") {
    in.kind = InitialSpec::Kind::Stationary;
  } else if (ikind == "constant") {
    in.kind = InitialSpec::Kind::Constant;
  } else if (ikind == "wave") {
    in.kind = InitialSpec::Kind::Wave;
    const int fam = static_cast<int>(require_number(ij, "family", "initial"));
    if (fam != 1 && fam != 2) throw ConfigError("initial.family must be 1 or 2");
    in.family = fam == 1 ? WaveFamily::One : WaveFamily::Two;
    in.sigma = require_number(ij, "sigma", "initial");
    in.x0 = require_number(ij, "x0", "initial");
  } else if (ikind == "perturbed_stationary") {
    in.kind = InitialSpec::Kind::PerturbedStationary;
    in.x_lo = require_number(ij, "x_lo", "initial");
    in.x_hi = require_number(ij, "x_hi", "initial");
    if (!(in.x_hi > in.x_lo)) throw ConfigError("initial: need x_hi > x_lo");
    in.drho = number_or(ij, "drho", 0.0);
    in.dq = number_or(ij, "dq", 0.0);
  } else if (ikind == "piecewise") {
    in.kind = InitialSpec::Kind::Piecewise;
    in.xs = require_array(ij, "xs", "initial");
    const auto rhos = require_array(ij, "rho_values", "initial");
    const auto qs = require_array(ij, "q_values", "initial");
    if (rhos.size() != qs.size() || rhos.size() != in.xs.size() + 1) {
      throw ConfigError("initial: piecewise needs len(rho_values) == len(q_values) == len(xs)+1");
    }
    for (size_t k = 0; k < rhos.size(); ++k) in.states.push_back({rhos[k], qs[k]});
  } else {
    throw ConfigError("initial.kind must be one of stationary|constant|wave|"
                      "perturbed_stationary|piecewise");
  }

  if (j.contains("params")) {
    const Json& wj = j["params"];
    cfg.params.eps = number_or(wj, "epsilon", cfg.params.eps);
    if (!(cfg.params.eps > 0.0)) throw ConfigError("params.epsilon must be positive");
    cfg.params.eps_check = number_or(wj, "eps_check", -1.0);
    cfg.params.lambda_hat = number_or(wj, "lambda_hat", -1.0);
    cfg.params.t_end = number_or(wj, "t_end", cfg.params.t_end);
    if (!(cfg.params.t_end > 0.0)) throw ConfigError("params.t_end must be positive");
    cfg.params.max_events =
        static_cast<std::uint64_t>(number_or(wj, "max_events", (double)cfg.params.max_events));
    cfg.params.upsilon_tol = number_or(wj, "upsilon_tol", cfg.params.upsilon_tol);
    if (wj.contains("snapshot") && wj["snapshot"].is_string()) {
      const std::string snap = wj["snapshot"].get<std::string>();
      if (snap == "every_event") {
        cfg.params.snapshot_every_event = true;
      } else if (snap == "final") {
        cfg.params.snapshot_every_event = false;
      } else {
        throw ConfigError("params.snapshot must be 'every_event' or 'final'");
      }
    }
  }
  if (j.contains("upsilon_mode")) {
    cfg.upsilon_mode = j["upsilon_mode"].get<std::string>();
    if (cfg.upsilon_mode != "auto" && cfg.upsilon_mode != "enforce" && cfg.upsilon_mode != "off") {
      throw ConfigError("upsilon_mode must be auto|enforce|off");
    }
  }
  cfg.kappa1 = number_or(j, "kappa1", 1.0);
  cfg.kappa2 = number_or(j, "kappa2", 10.0);
  cfg.seed = static_cast<std::uint64_t>(number_or(j, "seed", 0.0));
  if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
  if (j.contains("name")) cfg.name = j["name"].get<std::string>();
  return cfg;
}

inline ScenarioConfig parse_scenario_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_scenario(j);
}

}  // namespace fronttrack
