#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "pbg/model.hpp"

using namespace pbg;

namespace {

PhysicalConfig fig2_config() {
  PhysicalConfig cfg;
  cfg.link_length_km = 15.0;
  return cfg;
}

}  // namespace

TEST_CASE("derive_discrete_model at 15 km") {
  const DiscreteModel m = derive_discrete_model(fig2_config());
  CHECK(m.slot_duration() == doctest::Approx(50e-6).epsilon(1e-12));
  CHECK(m.alpha() == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(m.max_age() == 47);
  CHECK(m.gen_prob() == doctest::Approx(std::exp(-2.25)).epsilon(1e-14));
  CHECK(m.gen_prob() == doctest::Approx(0.105399).epsilon(1e-5));
  REQUIRE(m.level_table().size() == 48);
  CHECK(m.level_table().front() == 1.0);
  // Lowest plotted CMF level.
  CHECK(std::abs(m.level_table().back() - 0.547684581107775) < 1e-12);
}

TEST_CASE("decibel attenuation mapping") {
  PhysicalConfig cfg = fig2_config();
  cfg.attenuation_units = AttenuationUnits::Decibel;
  CHECK(generation_probability(cfg) == doctest::Approx(std::pow(10.0, -0.225)).epsilon(1e-14));
}

TEST_CASE("discrete model invariants") {
  const DiscreteModel m = derive_discrete_model(fig2_config());
  const auto& lv = m.level_table();
  for (std::size_t k = 1; k < lv.size(); ++k) CHECK(lv[k] < lv[k - 1]);
  CHECK(lv[m.max_age() - 1] > m.threshold_fidelity());
  const double span = std::log((2 * m.initial_fidelity() - 1) / (2 * m.threshold_fidelity() - 1));
  CHECK(m.alpha() * m.max_age() >= span);
  CHECK(span > m.alpha() * (m.max_age() - 1));
}

TEST_CASE("config validation reports every violation") {
  PhysicalConfig cfg;
  cfg.link_length_km = -1;
  cfg.threshold_fidelity = 0.4;
  cfg.decoherence_time_s = 0;
  CHECK(cfg.violations().size() == 3);
  CHECK_THROWS_AS(derive_discrete_model(cfg), ModelError);

  PhysicalConfig above;
  above.threshold_fidelity = 0.99;
  above.initial_fidelity = 0.95;
  CHECK(above.violations().size() == 1);
}

TEST_CASE("maximum age 0 is rejected") {
  // alpha = 5 per slot, F_eps just under F_0: N would round to 0 only if span < 1e-9;
  // a span that snaps to 0 is the degenerate case.
  CHECK_THROWS_AS(DiscreteModel::from_parameters(0.5, 1.0, 1.0, 1.0 - 1e-13), ModelError);
  CHECK_NOTHROW(DiscreteModel::from_parameters(0.5, 1.0, 1.0, 0.99));
}

TEST_CASE("generation probability must stay below 1 for physical links") {
  PhysicalConfig cfg = fig2_config();
  cfg.attenuation = 1e-320;  // denormal loss: p_g rounds to exactly 1
  CHECK_THROWS_AS(derive_discrete_model(cfg), ModelError);
  PhysicalConfig far = fig2_config();
  far.link_length_km = 1e5;  // p_g underflows to 0
  CHECK_THROWS_AS(derive_discrete_model(far), ModelError);
}

TEST_CASE("continuous decay") {
  CHECK(continuous_fidelity_decay(1.0, 0.0, 1e-3) == 1.0);
  CHECK(continuous_fidelity_decay(0.5, 3.7, 1e-3) == 0.5);
  CHECK(continuous_fidelity_decay(1.0, 1e-3, 1e-3) == doctest::Approx(0.683940).epsilon(1e-6));
  CHECK_THROWS_AS(continuous_fidelity_decay(0.4, 1.0, 1.0), ModelError);
  CHECK_THROWS_AS(continuous_fidelity_decay(0.9, -1.0, 1.0), ModelError);
}

TEST_CASE("fidelity_at_age matches plotted levels") {
  const DiscreteModel m = derive_discrete_model(fig2_config());
  CHECK(fidelity_at_age(m, 0) == 1.0);
  CHECK(std::abs(fidelity_at_age(m, 10) - 0.803265329856317) < 1e-12);
  CHECK(std::abs(fidelity_at_age(m, 20) - 0.683939720585721) < 1e-12);
  CHECK_THROWS_AS(fidelity_at_age(m, 48), ModelError);
  CHECK_THROWS_AS(fidelity_at_age(m, -1), ModelError);
}

TEST_CASE("purification formulas") {
  CHECK(purified_fidelity(1.0, 1.0) == 1.0);
  for (double x : {0.51, 0.7, 0.93, 1.0}) CHECK(purified_fidelity(0.5, x) == doctest::Approx(x));
  CHECK(purified_fidelity(0.803265, 0.683940) == doctest::Approx(0.898325).epsilon(1e-5));
  CHECK(purification_success_prob(1.0, 1.0) == 1.0);
  CHECK(purification_success_prob(0.5, 0.5) == 0.5);
  CHECK(purification_success_prob(0.803265, 0.683940) == doctest::Approx(0.611565).epsilon(1e-5));
  CHECK_THROWS_AS(purified_fidelity(0.0, 0.7), ModelError);
  CHECK_THROWS_AS(purified_fidelity(0.7, 1.2), ModelError);
  CHECK_THROWS_AS(purification_success_prob(-0.1, 0.7), ModelError);
}

TEST_CASE("purified_age examples") {
  const DiscreteModel m = derive_discrete_model(fig2_config());
  CHECK(purified_age(m, 0, 0) == 0);
  // continuous age 4.5467 rounds up
  CHECK(purified_age(m, 10, 20) == 5);
  CHECK(purified_age(m.with_rounding(AgeRounding::Floor), 10, 20) == 4);
  CHECK_THROWS_AS(purified_age(m, 5, 4), ModelError);
  CHECK_THROWS_AS(purified_age(m, 0, 48), ModelError);

  // F_0 < 1: purifying two fresh pairs exceeds F_0 and clamps to age 0.
  const DiscreteModel imperfect = DiscreteModel::from_parameters(0.3, 0.05, 0.9, 0.6);
  CHECK(purified_fidelity(0.9, 0.9) > 0.9);
  CHECK(purified_age(imperfect, 0, 0) == 0);
  CHECK(purified_age(imperfect, 0, 3) == 0);
}

TEST_CASE("snapped rounding") {
  CHECK(detail::snapped_ceil(3.0 + 1e-12) == 3);
  CHECK(detail::snapped_ceil(3.0 - 1e-12) == 3);
  CHECK(detail::snapped_ceil(3.01) == 4);
  CHECK(detail::snapped_floor(2.0 - 1e-12) == 2);
  CHECK(detail::snapped_floor(2.99) == 2);
}

// ---- properties ------------------------------------------------------------

TEST_CASE("property: purification gain and symmetry over a dense grid") {
  constexpr int steps = 200;
  for (int a = 0; a <= steps; ++a) {
    for (int b = 0; b <= steps; ++b) {
      const double f1 = 0.5 + 0.5 * a / steps;
      const double f2 = 0.5 + 0.5 * b / steps;
      if (f1 <= 0.5 || f2 <= 0.5) continue;
      const double fp = purified_fidelity(f1, f2);
      CHECK(fp >= std::max(f1, f2) - 1e-15);
      if (std::max(f1, f2) < 1.0) {
        CHECK(fp > std::max(f1, f2));
      }
      CHECK(fp == purified_fidelity(f2, f1));
      CHECK(purification_success_prob(f1, f2) == purification_success_prob(f2, f1));
      const double ps = purification_success_prob(f1, f2);
      CHECK(ps > 0.0);
      CHECK(ps <= 1.0);
    }
  }
  // Equality cases: the weaker pair at 0.5 or both perfect.
  CHECK(purified_fidelity(0.5, 0.8) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(purified_fidelity(1.0, 1.0) == 1.0);
}

TEST_CASE("property: monotone decay, age improvement, quantization, round trip") {
  std::mt19937_64 gen(20240611);
  std::uniform_real_distribution<double> alpha_dist(0.005, 0.5);
  std::uniform_int_distribution<int> n_dist(1, 60);
  std::uniform_real_distribution<double> f0_dist(0.75, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const double alpha = alpha_dist(gen);
    const int n_target = n_dist(gen);
    const double f0 = trial % 3 == 0 ? f0_dist(gen) : 1.0;
    const double f_eps = 0.5 * (1.0 + (2 * f0 - 1) * std::exp(-alpha * (n_target - 0.5)));
    for (AgeRounding r : {AgeRounding::Ceil, AgeRounding::Floor}) {
      const DiscreteModel m = DiscreteModel::from_parameters(0.3, alpha, f0, f_eps, r);
      REQUIRE(m.max_age() == n_target);
      const auto& lv = m.level_table();
      for (int k = 1; k <= m.max_age(); ++k) CHECK(lv[k] < lv[k - 1]);

      // Round trip: the inverse map of every level is its own age.
      for (int k = 0; k <= m.max_age(); ++k) {
        CHECK(lattice_age(m, lv[k]) == k);
        CHECK(lattice_age(m.with_rounding(AgeRounding::Floor), lv[k]) == k);
      }

      for (int n1 = 0; n1 <= m.max_age(); ++n1) {
        for (int n2 = n1; n2 <= m.max_age(); ++n2) {
          const int np = purified_age(m, n1, n2);
          CHECK(np >= 0);
          CHECK(np <= n1);
          const double fp = purified_fidelity(lv[n1], lv[n2]);
          if (r == AgeRounding::Ceil && np >= 1 && fp <= f0) {
            CHECK(lv[np] <= fp + 1e-12);
            CHECK(fp <= lv[np - 1] + 1e-12);
          }
        }
      }
    }
  }
}
