#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pbg/distribution.hpp"
#include "pbg/model.hpp"

namespace pbg {

struct SweepSettings {
  PhysicalConfig base;  // link_length_km is overridden per point
  double from_km = 4.0;
  double to_km = 30.0;
  double step_km = 2.0;
  std::uint64_t recorded_slots = 2'000'000;
  std::uint64_t warmup_slots = 100'000;
  std::uint64_t seed = 1;
  AgeRounding rounding = AgeRounding::Ceil;
  std::optional<double> gen_prob;  // overrides the attenuation mapping
  int threads = 1;
};

struct SweepRow {
  double distance_km = 0.0;
  double gen_prob = 0.0;
  double alpha = 0.0;
  int max_age = 0;
  Observables pur_analytic;
  Observables pur_sim;
  Observables nopur_sim;
};

/// from, from+step, ... up to `to` (inclusive within 1e-9 of a step).
std::vector<double> sweep_distances(double from_km, double to_km, double step_km);

/// The model at one link length, honoring the rounding and p_g override.
DiscreteModel model_at(const PhysicalConfig& base, double length_km, AgeRounding rounding,
                       std::optional<double> gen_prob);

SweepRow evaluate_sweep_point(const SweepSettings& settings, double distance_km,
                              std::uint64_t index);

/// Points evaluated concurrently on `settings.threads` workers; rows come back
/// in distance order. Any failing point aborts the whole sweep (rethrown).
std::vector<SweepRow> run_sweep(const SweepSettings& settings);

/// One point after another; reference for run_sweep.
std::vector<SweepRow> run_sweep_serial(const SweepSettings& settings);

}  // namespace pbg
