#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pbg/sweep.hpp"

using namespace pbg;

namespace {

SweepSettings small_settings() {
  SweepSettings s;
  s.recorded_slots = 20000;
  s.warmup_slots = 2000;
  s.seed = 3;
  return s;
}

bool same(const Observables& a, const Observables& b) {
  auto eq = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
  return eq(a.mean_f1, b.mean_f1) && eq(a.mean_f2, b.mean_f2) && eq(a.mean_pairs, b.mean_pairs);
}

}  // namespace

TEST_CASE("distance grid") {
  const auto d = sweep_distances(4, 30, 2);
  REQUIRE(d.size() == 14);
  CHECK(d.front() == 4.0);
  CHECK(d.back() == 30.0);
  CHECK(sweep_distances(0.1, 0.3, 0.1).size() == 3);
  CHECK(sweep_distances(5, 5, 1).size() == 1);
  CHECK_THROWS_AS(sweep_distances(5, 4, 1), ModelError);
  CHECK_THROWS_AS(sweep_distances(4, 5, 0), ModelError);
}

TEST_CASE("model at a distance") {
  PhysicalConfig base;
  const DiscreteModel m = model_at(base, 30, AgeRounding::Ceil, std::nullopt);
  CHECK(m.gen_prob() == doctest::Approx(std::exp(-4.5)));
  CHECK(m.alpha() == doctest::Approx(0.1));
  const DiscreteModel o = model_at(base, 30, AgeRounding::Floor, 0.3);
  CHECK(o.gen_prob() == 0.3);
  CHECK(o.rounding() == AgeRounding::Floor);
}

TEST_CASE("sweep rows") {
  SweepSettings s = small_settings();
  s.from_km = 4;
  s.to_km = 30;
  s.step_km = 13;
  const auto rows = run_sweep_serial(s);
  REQUIRE(rows.size() == 3);
  for (const SweepRow& r : rows) {
    CHECK(r.pur_analytic.mean_pairs >= 1.0);
    CHECK(r.pur_analytic.mean_pairs <= 2.0);
    CHECK(r.nopur_sim.mean_pairs >= r.pur_sim.mean_pairs);
    CHECK(r.pur_analytic.mean_f1 >= r.pur_analytic.mean_f2);
  }
  CHECK(rows[0].pur_analytic.mean_f2 > rows[2].pur_analytic.mean_f2);
  CHECK(rows[1].distance_km == 17.0);
  CHECK(rows[1].max_age == static_cast<int>(std::ceil(std::log(10.0) / (17.0 / 300.0) - 1e-9)));
}

TEST_CASE("parallel sweep matches the serial reference") {
  SweepSettings s = small_settings();
  s.step_km = 6;
  const auto serial = run_sweep_serial(s);
  for (int threads : {1, 2, 5}) {
    s.threads = threads;
    const auto par = run_sweep(s);
    REQUIRE(par.size() == serial.size());
    for (std::size_t k = 0; k < serial.size(); ++k) {
      CHECK(par[k].distance_km == serial[k].distance_km);
      CHECK(same(par[k].pur_analytic, serial[k].pur_analytic));
      CHECK(same(par[k].pur_sim, serial[k].pur_sim));
      CHECK(same(par[k].nopur_sim, serial[k].nopur_sim));
    }
  }
}

TEST_CASE("a failing point aborts the sweep") {
  SweepSettings s = small_settings();
  s.from_km = 4;
  s.to_km = 1e5;  // p_g underflows far out
  s.step_km = 1e5 - 4;
  s.threads = 2;
  CHECK_THROWS_AS(run_sweep(s), ModelError);
  CHECK_THROWS_AS(run_sweep_serial(s), ModelError);
}
