#include "pbg/distribution.hpp"

#include <cmath>
#include <numeric>

namespace pbg {

FidelityDistribution FidelityDistribution::from_age_mass(const DiscreteModel& model,
                                                         const std::vector<double>& mass_by_age) {
  const int n_age = model.max_age();
  if (mass_by_age.size() != static_cast<std::size_t>(n_age) + 1)
    throw ModelError("mass vector does not match the level table");
  const double total = std::accumulate(mass_by_age.begin(), mass_by_age.end(), 0.0);
  if (!(total > 0.0)) throw ModelError("distribution has no mass");

  FidelityDistribution d;
  d.levels.reserve(mass_by_age.size());
  d.pmf.reserve(mass_by_age.size());
  d.cmf.reserve(mass_by_age.size());
  double running = 0.0;
  for (int age = n_age; age >= 0; --age) {
    const double mass = mass_by_age[age] / total;
    running += mass;
    d.levels.push_back(model.level_table()[age]);
    d.pmf.push_back(mass);
    d.cmf.push_back(running);
  }
  d.cmf.back() = 1.0;
  return d;
}

double FidelityDistribution::cmf_at(double fidelity) const {
  double out = 0.0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (levels[k] <= fidelity + 1e-9) out = cmf[k];
    else break;
  }
  return out;
}

double FidelityDistribution::mean() const {
  double acc = 0.0;
  for (std::size_t k = 0; k < levels.size(); ++k) acc += levels[k] * pmf[k];
  return acc;
}

FidelityDistribution older_pair_distribution(const SteadyState& p, const DiscreteModel& model) {
  std::vector<double> mass(static_cast<std::size_t>(model.max_age()) + 1, 0.0);
  const auto& space = p.space();
  for (std::size_t k = 0; k < space.size(); ++k)
    mass[space.state(k).older] += p.vector()(static_cast<Eigen::Index>(k));
  return FidelityDistribution::from_age_mass(model, mass);
}

FidelityDistribution newer_pair_distribution(const SteadyState& p, const DiscreteModel& model) {
  std::vector<double> mass(static_cast<std::size_t>(model.max_age()) + 1, 0.0);
  const auto& space = p.space();
  for (std::size_t k = 0; k < space.size(); ++k) {
    const LinkState& s = space.state(k);
    if (s.is_pair()) mass[s.newer] += p.vector()(static_cast<Eigen::Index>(k));
  }
  if (!(std::accumulate(mass.begin(), mass.end(), 0.0) > 0.0))
    throw ModelError("no probability on full-memory states");
  return FidelityDistribution::from_age_mass(model, mass);
}

Observables observables(const SteadyState& p, const DiscreteModel& model) {
  const auto& level = model.level_table();
  const auto& space = p.space();
  double total = 0.0, pair = 0.0, f1 = 0.0, f2 = 0.0;
  for (std::size_t k = 0; k < space.size(); ++k) {
    const LinkState& s = space.state(k);
    const double w = p.vector()(static_cast<Eigen::Index>(k));
    total += w;
    f2 += w * level[s.older];
    if (s.is_pair()) {
      pair += w;
      f1 += w * level[s.newer];
    }
  }
  Observables o;
  o.mean_f1 = pair > 0.0 ? f1 / pair : std::nan("");
  o.mean_f2 = f2 / total;
  o.mean_pairs = (total + pair) / total;
  return o;
}

}  // namespace pbg
