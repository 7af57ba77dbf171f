#include "pbg/simulator.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pbg {

namespace {

struct Outcome {
  LinkState next;
  bool generated = false;
  bool attempted = false;
  bool succeeded = false;
};

// The table lookup and the closed-form path give identical values; the
// table only saves the logarithm in long runs.
template <class SuccessFn, class DestFn>
Outcome advance(const LinkState& s, int n_age, double pg, PolicyKind policy, SlotRng& rng,
                SuccessFn&& success, DestFn&& destination) {
  const auto older = [n_age](int a) { return std::min(a + 1, n_age); };
  Outcome out;
  out.generated = rng.bernoulli(pg);
  if (!out.generated) {
    out.next = s.is_pair() ? LinkState::pair(older(s.newer), older(s.older))
                           : LinkState::single(older(s.older));
    return out;
  }
  if (!s.is_pair()) {
    out.next = LinkState::pair(0, older(s.older));
    return out;
  }
  if (policy == PolicyKind::ReplaceOldest) {
    out.next = LinkState::pair(0, older(s.newer));
    return out;
  }
  out.attempted = true;
  out.succeeded = rng.bernoulli(success(s.newer, s.older));
  out.next = out.succeeded ? LinkState::pair(0, destination(s.newer, s.older))
                           : LinkState::single(0);
  return out;
}

void validate(const SimConfig& cfg) {
  if (cfg.total_slots < 1) throw ModelError("simulation needs at least one slot");
  if (cfg.warmup_slots >= cfg.total_slots)
    throw ModelError("warmup slots must be fewer than total slots");
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + (index + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SimStats::SimStats(int max_age)
    : older_age(static_cast<std::size_t>(max_age) + 1, 0),
      newer_age(static_cast<std::size_t>(max_age) + 1, 0) {}

SimStats& SimStats::operator+=(const SimStats& other) {
  if (older_age.size() != other.older_age.size())
    throw ModelError("cannot merge statistics of different models");
  for (std::size_t k = 0; k < older_age.size(); ++k) {
    older_age[k] += other.older_age[k];
    newer_age[k] += other.newer_age[k];
  }
  single_slots += other.single_slots;
  pair_slots += other.pair_slots;
  generations += other.generations;
  purification_attempts += other.purification_attempts;
  successes += other.successes;
  failures += other.failures;
  return *this;
}

LinkState step(const LinkState& state, const DiscreteModel& model, PolicyKind policy,
               SlotRng& rng) {
  const auto& level = model.level_table();
  return advance(
             state, model.max_age(), model.gen_prob(), policy, rng,
             [&](int i, int j) { return purification_success_prob(level[i], level[j]); },
             [&](int i, int j) { return purified_age(model, i, j); })
      .next;
}

SimStats simulate(const SimConfig& cfg) {
  validate(cfg);
  const DiscreteModel& model = cfg.model;
  const int n_age = model.max_age();
  const double pg = model.gen_prob();
  const PurificationTable table(model);
  SlotRng rng(cfg.seed);

  SimStats stats(n_age);
  LinkState state = LinkState::single(0);
  for (std::uint64_t slot = 0; slot < cfg.total_slots; ++slot) {
    const Outcome o = advance(
        state, n_age, pg, cfg.policy, rng,
        [&](int i, int j) { return table.success(i, j); },
        [&](int i, int j) { return table.destination(i, j); });
    state = o.next;
    if (slot < cfg.warmup_slots) continue;
    stats.generations += o.generated;
    stats.purification_attempts += o.attempted;
    stats.successes += o.succeeded;
    stats.failures += o.attempted && !o.succeeded;
    ++stats.older_age[state.older];
    if (state.is_pair()) {
      ++stats.pair_slots;
      ++stats.newer_age[state.newer];
    } else {
      ++stats.single_slots;
    }
  }
  return stats;
}

namespace {

SimConfig replica_config(const SimConfig& cfg, int replicas, int index) {
  const std::uint64_t recorded = cfg.total_slots - cfg.warmup_slots;
  const auto r = static_cast<std::uint64_t>(replicas);
  const auto k = static_cast<std::uint64_t>(index);
  SimConfig part = cfg;
  part.total_slots = cfg.warmup_slots + recorded / r + (k < recorded % r ? 1 : 0);
  part.seed = derive_seed(cfg.seed, k);
  return part;
}

void check_replicas(const SimConfig& cfg, int replicas) {
  validate(cfg);
  if (replicas < 1) throw ModelError("need at least one replica");
  if (static_cast<std::uint64_t>(replicas) > cfg.total_slots - cfg.warmup_slots)
    throw ModelError("more replicas than recorded slots");
}

}  // namespace

SimStats simulate_replicated_serial(const SimConfig& cfg, int replicas) {
  check_replicas(cfg, replicas);
  SimStats total(cfg.model.max_age());
  for (int k = 0; k < replicas; ++k) total += simulate(replica_config(cfg, replicas, k));
  return total;
}

SimStats simulate_replicated(const SimConfig& cfg, int replicas, int threads) {
  check_replicas(cfg, replicas);
  std::vector<SimStats> parts(static_cast<std::size_t>(replicas));
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(threads, 1))
  for (int k = 0; k < replicas; ++k) parts[k] = simulate(replica_config(cfg, replicas, k));

  SimStats total(cfg.model.max_age());
  for (const auto& part : parts) total += part;
  return total;
}

FidelityDistribution empirical_distribution(const SimStats& stats, const DiscreteModel& model) {
  if (stats.recorded() == 0) throw ModelError("no recorded slots");
  std::vector<double> mass(stats.older_age.begin(), stats.older_age.end());
  return FidelityDistribution::from_age_mass(model, mass);
}

FidelityDistribution empirical_newer_distribution(const SimStats& stats,
                                                  const DiscreteModel& model) {
  if (stats.pair_slots == 0) throw ModelError("no full-memory slots recorded");
  std::vector<double> mass(stats.newer_age.begin(), stats.newer_age.end());
  return FidelityDistribution::from_age_mass(model, mass);
}

Observables empirical_observables(const SimStats& stats, const DiscreteModel& model) {
  const std::uint64_t n = stats.recorded();
  if (n == 0) throw ModelError("no recorded slots");
  const auto& level = model.level_table();
  double f1 = 0.0, f2 = 0.0;
  for (std::size_t k = 0; k < level.size(); ++k) {
    f1 += static_cast<double>(stats.newer_age[k]) * level[k];
    f2 += static_cast<double>(stats.older_age[k]) * level[k];
  }
  Observables o;
  o.mean_f1 = stats.pair_slots > 0 ? f1 / static_cast<double>(stats.pair_slots) : std::nan("");
  o.mean_f2 = f2 / static_cast<double>(n);
  o.mean_pairs = static_cast<double>(stats.single_slots + 2 * stats.pair_slots) /
                 static_cast<double>(n);
  return o;
}

std::vector<TransitionSample> sample_transitions(std::span<const LinkState> from,
                                                 const DiscreteModel& model, PolicyKind policy,
                                                 std::uint64_t draws, std::uint64_t seed,
                                                 int threads) {
  const StateSpace space(model.max_age());
  std::vector<TransitionSample> out(from.size());
  const auto count = static_cast<long>(from.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(threads, 1))
  for (long k = 0; k < count; ++k) {
    TransitionSample& sample = out[static_cast<std::size_t>(k)];
    sample.from = from[static_cast<std::size_t>(k)];
    sample.counts.assign(space.size(), 0);
    sample.draws = draws;
    SlotRng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    for (std::uint64_t d = 0; d < draws; ++d)
      ++sample.counts[space.index(step(sample.from, model, policy, rng))];
  }
  return out;
}

}  // namespace pbg
