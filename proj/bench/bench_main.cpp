// Timings for the solvers and the parallel kernels against their serial references.
//   pbg_bench [--threads T] [--slots S]

#include "CLI11.hpp"
#include <chrono>
#include <cstdio>
#include <omp.h>

#include "pbg/simulator.hpp"
#include "pbg/steady_state.hpp"
#include "pbg/sweep.hpp"

using namespace pbg;

namespace {

template <class Fn>
double best_of(int reps, Fn&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pbg benchmarks"};
  int threads = omp_get_max_threads();
  std::uint64_t slots = 2'000'000;
  app.add_option("--threads", threads, "Worker threads for the parallel runs")
      ->check(CLI::PositiveNumber);
  app.add_option("--slots", slots, "Recorded slots per simulation")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  PhysicalConfig cfg;
  for (double km : {15.0, 4.0}) {
    cfg.link_length_km = km;
    const DiscreteModel m = derive_discrete_model(cfg);
    const TransitionMatrix q = build_transition_matrix(m, enumerate_states(m));
    const double full = best_of(3, [&] { steady_state_full(q); });
    const double reduced = best_of(3, [&] { steady_state_reduced(m); });
    std::printf("solve  %4.0f km  N=%-4d states=%-6zu full %9.3f ms  reduced %9.3f ms  speedup %.1fx\n",
                km, m.max_age(), q.size(), full * 1e3, reduced * 1e3, full / reduced);
  }

  cfg.link_length_km = 15.0;
  const DiscreteModel m = derive_discrete_model(cfg);
  SimConfig sim{m, PolicyKind::PurifyBeyondGeneration, slots + 100'000, 100'000, 1};
  const int replicas = std::max(threads, 1) * 2;
  const double sim_serial = best_of(1, [&] { simulate_replicated_serial(sim, replicas); });
  const double sim_par = best_of(1, [&] { simulate_replicated(sim, replicas, threads); });
  std::printf("simulate %d replicas, %llu slots  serial %.3f s  parallel(%d) %.3f s  speedup %.2fx\n",
              replicas, static_cast<unsigned long long>(slots), sim_serial, threads, sim_par,
              sim_serial / sim_par);

  SweepSettings sw;
  sw.recorded_slots = slots / 10;
  sw.warmup_slots = 10'000;
  const double sweep_serial = best_of(1, [&] { run_sweep_serial(sw); });
  sw.threads = threads;
  const double sweep_par = best_of(1, [&] { run_sweep(sw); });
  std::printf("sweep 4..30 km, %llu slots/point  serial %.3f s  parallel(%d) %.3f s  speedup %.2fx\n",
              static_cast<unsigned long long>(sw.recorded_slots), sweep_serial, threads, sweep_par,
              sweep_serial / sweep_par);
  return 0;
}
