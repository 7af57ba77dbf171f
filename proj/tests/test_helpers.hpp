#pragma once

#include <cmath>

#include "pbg/model.hpp"

namespace pbg::testing {

/// A model whose maximum age is exactly `max_age` for the given alpha.
inline DiscreteModel model_with(int max_age, double gen_prob, double alpha,
                                double f0 = 1.0, AgeRounding rounding = AgeRounding::Ceil) {
  const double f_eps = 0.5 * (1.0 + (2 * f0 - 1) * std::exp(-alpha * (max_age - 0.5)));
  return DiscreteModel::from_parameters(gen_prob, alpha, f0, f_eps, rounding);
}

inline DiscreteModel fig2_model() {
  PhysicalConfig cfg;
  cfg.link_length_km = 15.0;
  return derive_discrete_model(cfg);
}

}  // namespace pbg::testing
