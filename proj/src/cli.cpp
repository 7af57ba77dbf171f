#include "pbg/cli.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "pbg/distribution.hpp"
#include "pbg/markov.hpp"
#include "pbg/steady_state.hpp"
#include "pbg/sweep.hpp"

namespace pbg::cli {

namespace {

const std::map<std::string, AttenuationUnits> kUnits{{"natural", AttenuationUnits::Natural},
                                                     {"db", AttenuationUnits::Decibel}};
const std::map<std::string, AgeRounding> kRounding{{"ceil", AgeRounding::Ceil},
                                                   {"floor", AgeRounding::Floor}};
const std::map<std::string, PolicyKind> kPolicy{{"pbg", PolicyKind::PurifyBeyondGeneration},
                                                {"replace-oldest", PolicyKind::ReplaceOldest}};
const std::map<std::string, OutputFormat> kFormat{{"csv", OutputFormat::Csv},
                                                  {"json", OutputFormat::Json}};

template <class Map>
std::string key_of(const Map& map, typename Map::mapped_type value) {
  for (const auto& [k, v] : map)
    if (v == value) return k;
  return {};
}

template <class Map>
std::vector<std::string> keys(const Map& map) {
  std::vector<std::string> out;
  for (const auto& kv : map) out.push_back(kv.first);
  return out;
}

std::string command_name(Command c) {
  switch (c) {
    case Command::Solve: return "solve";
    case Command::Simulate: return "simulate";
    case Command::Sweep: return "sweep";
    case Command::Cmf: return "cmf";
  }
  return {};
}

// String-valued choices, resolved after parsing.
struct Choices {
  std::string units = "natural";
  std::string rounding = "ceil";
  std::string policy = "pbg";
  std::string format = "csv";
  double gen_prob = 0.0;
};

DiscreteModel model_for(const RunSpec& spec) {
  return model_at(spec.physical, spec.physical.link_length_km, spec.rounding, spec.gen_prob);
}

SimConfig sim_config(const RunSpec& spec, const DiscreteModel& model, PolicyKind policy) {
  return SimConfig{model, policy, spec.warmup + spec.slots, spec.warmup, spec.seed};
}

Table solve_table(const RunSpec& spec) {
  const DiscreteModel model = model_for(spec);
  const StateSpace space = enumerate_states(model);
  const TransitionMatrix q = build_transition_matrix(model, space);
  const SteadyState full = steady_state_full(q);
  const SteadyState reduced = steady_state_reduced(model);
  const Observables obs = observables(reduced, model);

  Table t;
  t.columns = {"length_km", "p_g",        "alpha",           "N",
               "states",    "mean_f1",    "mean_f2",         "mean_pairs",
               "max_solver_diff", "residual_full", "residual_reduced"};
  t.add_row({spec.physical.link_length_km, model.gen_prob(), model.alpha(),
             std::int64_t{model.max_age()}, static_cast<std::int64_t>(space.size()),
             obs.mean_f1, obs.mean_f2, obs.mean_pairs,
             (full.vector() - reduced.vector()).cwiseAbs().maxCoeff(),
             stationarity_residual(q, full.vector()), stationarity_residual(q, reduced.vector())});
  return t;
}

Table cmf_table(const RunSpec& spec) {
  const DiscreteModel model = model_for(spec);
  const FidelityDistribution analytic =
      older_pair_distribution(steady_state_reduced(model), model);
  const FidelityDistribution empirical =
      empirical_distribution(simulate(sim_config(spec, model, spec.policy)), model);

  Table t;
  t.columns = {"fidelity_level", "analytic_cmf", "empirical_cmf"};
  for (std::size_t k = 0; k < analytic.levels.size(); ++k)
    t.add_row({analytic.levels[k], analytic.cmf[k], empirical.cmf[k]});
  return t;
}

Table simulate_table(const RunSpec& spec) {
  const DiscreteModel model = model_for(spec);
  const SimStats stats = simulate(sim_config(spec, model, spec.policy));
  const FidelityDistribution older = empirical_distribution(stats, model);
  const Observables obs = empirical_observables(stats, model);
  std::vector<double> newer_pmf(older.levels.size(), 0.0);
  if (stats.pair_slots > 0) newer_pmf = empirical_newer_distribution(stats, model).pmf;

  Table t;
  t.columns = {"fidelity_level", "older_pmf", "older_cmf", "newer_pmf",
               "mean_f1",        "mean_f2",   "mean_pairs"};
  for (std::size_t k = 0; k < older.levels.size(); ++k)
    t.add_row({older.levels[k], older.pmf[k], older.cmf[k], newer_pmf[k], obs.mean_f1,
               obs.mean_f2, obs.mean_pairs});
  return t;
}

Table sweep_table(const RunSpec& spec) {
  SweepSettings s;
  s.base = spec.physical;
  s.from_km = spec.from_km;
  s.to_km = spec.to_km;
  s.step_km = spec.step_km;
  s.recorded_slots = spec.slots;
  s.warmup_slots = spec.warmup;
  s.seed = spec.seed;
  s.rounding = spec.rounding;
  s.gen_prob = spec.gen_prob;
  s.threads = spec.threads;

  Table t;
  t.columns = {"distance_km",        "p_g",          "alpha",          "N",
               "f1_pur_analytic",    "f2_pur_analytic", "pairs_pur_analytic",
               "f1_pur_sim",         "f2_pur_sim",   "pairs_pur_sim",
               "f1_nopur_sim",       "f2_nopur_sim", "pairs_nopur_sim"};
  for (const SweepRow& r : run_sweep(s)) {
    t.add_row({r.distance_km, r.gen_prob, r.alpha, std::int64_t{r.max_age},
               r.pur_analytic.mean_f1, r.pur_analytic.mean_f2, r.pur_analytic.mean_pairs,
               r.pur_sim.mean_f1, r.pur_sim.mean_f2, r.pur_sim.mean_pairs,
               r.nopur_sim.mean_f1, r.nopur_sim.mean_f2, r.nopur_sim.mean_pairs});
  }
  return t;
}

}  // namespace

ParseOutcome parse_args(int argc, const char* const* argv) {
  RunSpec spec;
  Choices choices;
  CLI::App app{"Steady-state fidelity of stored link-level EPR pairs under purification"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--length-km", spec.physical.link_length_km, "Link length in km")
        ->capture_default_str();
    sub->add_option("--attenuation", spec.physical.attenuation, "Attenuation per km")
        ->capture_default_str();
    sub->add_option("--attenuation-units", choices.units, "natural (p_g = exp(-eta l)) or db")
        ->check(CLI::IsMember(keys(kUnits)))
        ->capture_default_str();
    sub->add_option("--decoherence-time-s", spec.physical.decoherence_time_s,
                    "Decoherence time t_c in seconds")
        ->capture_default_str();
    sub->add_option("--signal-speed", spec.physical.signal_speed_m_per_s, "Signal speed in m/s")
        ->capture_default_str();
    sub->add_option("--f0", spec.physical.initial_fidelity, "Initial fidelity")
        ->capture_default_str();
    sub->add_option("--f-eps", spec.physical.threshold_fidelity, "Threshold fidelity")
        ->capture_default_str();
    sub->add_option("--rounding", choices.rounding, "Purified-age rounding: ceil or floor")
        ->check(CLI::IsMember(keys(kRounding)))
        ->capture_default_str();
    sub->add_option("--gen-prob", choices.gen_prob,
                    "Use this generation probability instead of the attenuation mapping");
    sub->add_option("--format", choices.format, "csv or json")
        ->check(CLI::IsMember(keys(kFormat)))
        ->capture_default_str();
    sub->add_option("--output", spec.output, "Output file (default: standard output)");
    sub->add_option("--threads", spec.threads, "Worker threads")->capture_default_str();
  };
  auto add_sim = [&](CLI::App* sub, bool with_policy) {
    sub->add_option("--slots", spec.slots, "Recorded simulation slots")->capture_default_str();
    sub->add_option("--warmup", spec.warmup, "Warmup slots")->capture_default_str();
    sub->add_option("--seed", spec.seed, "Random seed")->capture_default_str();
    if (with_policy)
      sub->add_option("--policy", choices.policy, "pbg or replace-oldest")
          ->check(CLI::IsMember(keys(kPolicy)))
          ->capture_default_str();
  };

  CLI::App* solve = app.add_subcommand("solve", "Observables from both stationary solvers");
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo observables and distribution");
  CLI::App* sweep = app.add_subcommand("sweep", "Analytic and simulated observables per distance");
  CLI::App* cmf = app.add_subcommand("cmf", "Analytic vs simulated older-pair CMF");
  for (CLI::App* sub : {solve, simulate, sweep, cmf}) add_common(sub);
  add_sim(simulate, true);
  add_sim(cmf, true);
  add_sim(sweep, false);
  sweep->add_option("--from-km", spec.from_km, "First distance")->capture_default_str();
  sweep->add_option("--to-km", spec.to_km, "Last distance")->capture_default_str();
  sweep->add_option("--step-km", spec.step_km, "Distance step")->capture_default_str();

  ParseOutcome outcome;
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream help;
    app.exit(e, help, help);
    outcome.help = help.str();
    return outcome;
  } catch (const CLI::ParseError& e) {
    outcome.exit_code = kExitUsage;
    outcome.diagnostics.push_back(e.what());
    return outcome;
  }

  if (*solve) spec.command = Command::Solve;
  if (*simulate) spec.command = Command::Simulate;
  if (*sweep) spec.command = Command::Sweep;
  if (*cmf) spec.command = Command::Cmf;
  CLI::App* active = app.get_subcommands().front();

  spec.physical.attenuation_units = kUnits.at(choices.units);
  spec.rounding = kRounding.at(choices.rounding);
  spec.policy = kPolicy.at(choices.policy);
  spec.format = kFormat.at(choices.format);
  if (active->count("--gen-prob") > 0) spec.gen_prob = choices.gen_prob;

  outcome.diagnostics = validate(spec);
  if (!outcome.diagnostics.empty()) {
    outcome.exit_code = kExitValidation;
    return outcome;
  }
  outcome.spec = spec;
  return outcome;
}

std::vector<std::string> validate(const RunSpec& spec) {
  std::vector<std::string> out;
  std::vector<double> lengths{spec.physical.link_length_km};
  if (spec.command == Command::Sweep) {
    lengths.clear();
    if (!(spec.step_km > 0.0)) out.push_back("sweep step must be positive");
    if (!(spec.from_km <= spec.to_km)) out.push_back("sweep start must not exceed its end");
    if (out.empty()) lengths = sweep_distances(spec.from_km, spec.to_km, spec.step_km);
    else lengths = {spec.from_km};
  }

  PhysicalConfig probe = spec.physical;
  probe.link_length_km = lengths.empty() ? spec.physical.link_length_km : lengths.front();
  for (const std::string& v : probe.violations()) out.push_back(v);
  if (spec.gen_prob && !(*spec.gen_prob > 0.0 && *spec.gen_prob <= 1.0))
    out.push_back("generation probability must lie in (0, 1]");
  if (spec.threads < 1) out.push_back("threads must be at least 1");
  if (spec.command != Command::Solve && spec.slots < 1)
    out.push_back("slots must be at least 1");

  if (out.empty()) {
    for (double length : lengths) {
      try {
        model_at(spec.physical, length, spec.rounding, spec.gen_prob);
      } catch (const ModelError& e) {
        out.push_back("at " + format_double(length) + " km: " + e.what());
        break;
      }
    }
  }
  return out;
}

nlohmann::ordered_json echo_spec(const RunSpec& spec) {
  const PhysicalConfig& p = spec.physical;
  nlohmann::ordered_json j;
  j["command"] = command_name(spec.command);
  j["length_km"] = p.link_length_km;
  j["attenuation"] = p.attenuation;
  j["attenuation_units"] = key_of(kUnits, p.attenuation_units);
  j["decoherence_time_s"] = p.decoherence_time_s;
  j["signal_speed_m_per_s"] = p.signal_speed_m_per_s;
  j["initial_fidelity"] = p.initial_fidelity;
  j["threshold_fidelity"] = p.threshold_fidelity;
  j["rounding"] = key_of(kRounding, spec.rounding);
  j["gen_prob"] = spec.gen_prob ? nlohmann::ordered_json(*spec.gen_prob) : nullptr;
  if (spec.command == Command::Sweep) {
    j["from_km"] = spec.from_km;
    j["to_km"] = spec.to_km;
    j["step_km"] = spec.step_km;
  }
  if (spec.command != Command::Solve) {
    j["slots"] = spec.slots;
    j["warmup"] = spec.warmup;
    j["seed"] = spec.seed;
  }
  if (spec.command == Command::Simulate || spec.command == Command::Cmf)
    j["policy"] = key_of(kPolicy, spec.policy);
  return j;
}

Table build_table(const RunSpec& spec) {
  switch (spec.command) {
    case Command::Solve: return solve_table(spec);
    case Command::Simulate: return simulate_table(spec);
    case Command::Sweep: return sweep_table(spec);
    case Command::Cmf: return cmf_table(spec);
  }
  throw std::logic_error("unknown command");
}

int run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  Table table;
  try {
    table = build_table(spec);
  } catch (const ModelError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }

  std::ostringstream rendered;
  if (spec.format == OutputFormat::Csv) write_csv(table, rendered);
  else write_json(table, echo_spec(spec), rendered);

  if (spec.output.empty()) {
    out << rendered.str();
    return kExitOk;
  }
  std::ofstream file(spec.output, std::ios::binary);
  if (!file) {
    err << "error: cannot open " << spec.output << '\n';
    return kExitRuntime;
  }
  file << rendered.str();
  return file ? kExitOk : kExitRuntime;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const ParseOutcome parsed = parse_args(argc, argv);
  if (!parsed.help.empty()) {
    out << parsed.help;
    return kExitOk;
  }
  for (const std::string& line : parsed.diagnostics) err << "error: " << line << '\n';
  if (!parsed.spec) return parsed.exit_code;
  return run(*parsed.spec, out, err);
}

}  // namespace pbg::cli
