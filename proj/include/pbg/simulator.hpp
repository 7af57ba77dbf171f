#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "pbg/distribution.hpp"
#include "pbg/markov.hpp"
#include "pbg/model.hpp"

namespace pbg {

enum class PolicyKind {
  PurifyBeyondGeneration,
  ReplaceOldest,  // drop the older pair on generation into a full memory
};

/// Per-slot random source. Bernoulli draws use the top 53 bits of a
/// std::mt19937_64 output, so a seed pins the trajectory on every platform.
class SlotRng {
 public:
  explicit SlotRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

/// Seed for replica `index` derived from a base seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

struct SimConfig {
  DiscreteModel model;
  PolicyKind policy = PolicyKind::PurifyBeyondGeneration;
  std::uint64_t total_slots = 2'100'000;
  std::uint64_t warmup_slots = 100'000;
  std::uint64_t seed = 1;
};

struct SimStats {
  std::vector<std::uint64_t> older_age;  // older/only pair, every recorded slot
  std::vector<std::uint64_t> newer_age;  // newer pair, full-memory slots only
  std::uint64_t single_slots = 0;
  std::uint64_t pair_slots = 0;
  std::uint64_t generations = 0;
  std::uint64_t purification_attempts = 0;
  std::uint64_t successes = 0;
  std::uint64_t failures = 0;

  explicit SimStats(int max_age = 0);

  std::uint64_t recorded() const { return single_slots + pair_slots; }
  SimStats& operator+=(const SimStats& other);
  friend bool operator==(const SimStats&, const SimStats&) = default;
};

/// One slot of the link: a generation draw, then (for PBG on a full memory)
/// a purification draw on the ages as they stood at the start of the slot.
LinkState step(const LinkState& state, const DiscreteModel& model, PolicyKind policy,
               SlotRng& rng);

/// Single trajectory from (-inf, 0); records the state after each slot past warmup.
SimStats simulate(const SimConfig& cfg);

/// Splits the recorded slots of `cfg` over independent replicas (each with its
/// own warmup and derived seed) and merges their counters. Result does not
/// depend on the thread count.
SimStats simulate_replicated(const SimConfig& cfg, int replicas, int threads);

/// Reference for simulate_replicated: same replicas, run one after another.
SimStats simulate_replicated_serial(const SimConfig& cfg, int replicas);

FidelityDistribution empirical_distribution(const SimStats& stats, const DiscreteModel& model);
FidelityDistribution empirical_newer_distribution(const SimStats& stats,
                                                  const DiscreteModel& model);
Observables empirical_observables(const SimStats& stats, const DiscreteModel& model);

/// Destination counts of `draws` independent steps from each of `from`, in
/// StateSpace index order per source state.
struct TransitionSample {
  LinkState from;
  std::vector<std::uint64_t> counts;  // by destination StateSpace index
  std::uint64_t draws = 0;
};

std::vector<TransitionSample> sample_transitions(std::span<const LinkState> from,
                                                 const DiscreteModel& model, PolicyKind policy,
                                                 std::uint64_t draws, std::uint64_t seed,
                                                 int threads);

}  // namespace pbg
