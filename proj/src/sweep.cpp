#include "pbg/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>

#include "pbg/simulator.hpp"
#include "pbg/steady_state.hpp"

namespace pbg {

std::vector<double> sweep_distances(double from_km, double to_km, double step_km) {
  if (!(step_km > 0.0)) throw ModelError("sweep step must be positive");
  if (!(from_km <= to_km)) throw ModelError("sweep start must not exceed its end");
  const auto count = static_cast<long>(std::floor((to_km - from_km) / step_km + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long k = 0; k < count; ++k) out.push_back(from_km + static_cast<double>(k) * step_km);
  return out;
}

DiscreteModel model_at(const PhysicalConfig& base, double length_km, AgeRounding rounding,
                       std::optional<double> gen_prob) {
  PhysicalConfig cfg = base;
  cfg.link_length_km = length_km;
  DiscreteModel model = derive_discrete_model(cfg, rounding);
  return gen_prob ? model.with_gen_prob(*gen_prob) : model;
}

SweepRow evaluate_sweep_point(const SweepSettings& s, double distance_km, std::uint64_t index) {
  const DiscreteModel model = model_at(s.base, distance_km, s.rounding, s.gen_prob);

  SweepRow row;
  row.distance_km = distance_km;
  row.gen_prob = model.gen_prob();
  row.alpha = model.alpha();
  row.max_age = model.max_age();
  row.pur_analytic = observables(steady_state_reduced(model), model);

  SimConfig sim{model, PolicyKind::PurifyBeyondGeneration, s.warmup_slots + s.recorded_slots,
                s.warmup_slots, derive_seed(s.seed, 2 * index)};
  row.pur_sim = empirical_observables(simulate(sim), model);
  sim.policy = PolicyKind::ReplaceOldest;
  sim.seed = derive_seed(s.seed, 2 * index + 1);
  row.nopur_sim = empirical_observables(simulate(sim), model);
  return row;
}

std::vector<SweepRow> run_sweep_serial(const SweepSettings& settings) {
  const std::vector<double> distances =
      sweep_distances(settings.from_km, settings.to_km, settings.step_km);
  std::vector<SweepRow> rows;
  rows.reserve(distances.size());
  for (std::size_t k = 0; k < distances.size(); ++k)
    rows.push_back(evaluate_sweep_point(settings, distances[k], k));
  return rows;
}

std::vector<SweepRow> run_sweep(const SweepSettings& settings) {
  const std::vector<double> distances =
      sweep_distances(settings.from_km, settings.to_km, settings.step_km);
  std::vector<SweepRow> rows(distances.size());
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto count = static_cast<long>(distances.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(settings.threads, 1))
  for (long k = 0; k < count; ++k) {
    try {
      const auto i = static_cast<std::size_t>(k);
      rows[i] = evaluate_sweep_point(settings, distances[i], i);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

}  // namespace pbg
