#pragma once

#include <vector>

#include "pbg/model.hpp"
#include "pbg/steady_state.hpp"

namespace pbg {

/// Discrete fidelity distribution over the model's levels, ordered from the
/// lowest fidelity (age N) up to F_0 (age 0).
struct FidelityDistribution {
  std::vector<double> levels;
  std::vector<double> pmf;
  std::vector<double> cmf;

  /// Builds levels/cmf from per-age mass (index = age). Mass is normalized.
  static FidelityDistribution from_age_mass(const DiscreteModel& model,
                                            const std::vector<double>& mass_by_age);

  /// CMF at the largest level not above `fidelity` (0 below the lowest level).
  double cmf_at(double fidelity) const;
  double mean() const;
};

struct Observables {
  double mean_f1 = 0.0;     // higher-fidelity pair, conditioned on a full memory
  double mean_f2 = 0.0;     // older (or only) pair, over all states
  double mean_pairs = 0.0;  // in [1, 2]
};

FidelityDistribution older_pair_distribution(const SteadyState& p, const DiscreteModel& model);

/// Distribution of the newer pair conditioned on two stored pairs.
FidelityDistribution newer_pair_distribution(const SteadyState& p, const DiscreteModel& model);

Observables observables(const SteadyState& p, const DiscreteModel& model);

}  // namespace pbg
