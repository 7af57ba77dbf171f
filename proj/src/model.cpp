#include "pbg/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pbg {

namespace {

std::string describe(const char* what, double value) {
  std::ostringstream out;
  out << what << " (got " << value << ")";
  return out.str();
}

bool in_open_unit_half(double f) { return f > 0.5 && f <= 1.0; }

}  // namespace

namespace detail {

int snapped_ceil(double x, double tolerance) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= tolerance) return static_cast<int>(nearest);
  return static_cast<int>(std::ceil(x));
}

int snapped_floor(double x, double tolerance) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= tolerance) return static_cast<int>(nearest);
  return static_cast<int>(std::floor(x));
}

}  // namespace detail

std::vector<std::string> PhysicalConfig::violations() const {
  std::vector<std::string> out;
  if (!(link_length_km > 0.0) || !std::isfinite(link_length_km))
    out.push_back(describe("link length must be positive", link_length_km));
  if (!(attenuation > 0.0) || !std::isfinite(attenuation))
    out.push_back(describe("attenuation must be positive", attenuation));
  if (!(decoherence_time_s > 0.0) || !std::isfinite(decoherence_time_s))
    out.push_back(describe("decoherence time must be positive", decoherence_time_s));
  if (!(signal_speed_m_per_s > 0.0) || !std::isfinite(signal_speed_m_per_s))
    out.push_back(describe("signal speed must be positive", signal_speed_m_per_s));
  if (!in_open_unit_half(initial_fidelity))
    out.push_back(describe("initial fidelity must lie in (0.5, 1]", initial_fidelity));
  if (!(threshold_fidelity > 0.5))
    out.push_back(describe("threshold fidelity must exceed 0.5", threshold_fidelity));
  else if (!(threshold_fidelity < initial_fidelity))
    out.push_back(describe("threshold fidelity must be below the initial fidelity",
                           threshold_fidelity));
  return out;
}

DiscreteModel DiscreteModel::from_parameters(double gen_prob, double alpha,
                                             double initial_fidelity,
                                             double threshold_fidelity,
                                             AgeRounding rounding,
                                             double slot_duration_s) {
  if (!(gen_prob > 0.0 && gen_prob <= 1.0))
    throw ModelError(describe("generation probability must lie in (0, 1]", gen_prob));
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw ModelError(describe("decoherence coefficient must be positive", alpha));
  if (!in_open_unit_half(initial_fidelity))
    throw ModelError(describe("initial fidelity must lie in (0.5, 1]", initial_fidelity));
  if (!(threshold_fidelity > 0.5 && threshold_fidelity < initial_fidelity))
    throw ModelError(describe("threshold fidelity must lie in (0.5, F_0)", threshold_fidelity));

  const double span =
      -std::log((2.0 * threshold_fidelity - 1.0) / (2.0 * initial_fidelity - 1.0)) / alpha;
  const int max_age = detail::snapped_ceil(span);
  if (max_age < 1)
    throw ModelError("threshold fidelity is within one slot of the initial fidelity; "
                     "maximum age would be 0");

  DiscreteModel m;
  m.gen_prob_ = gen_prob;
  m.slot_duration_ = slot_duration_s;
  m.alpha_ = alpha;
  m.max_age_ = max_age;
  m.initial_fidelity_ = initial_fidelity;
  m.threshold_fidelity_ = threshold_fidelity;
  m.rounding_ = rounding;
  m.levels_.resize(static_cast<std::size_t>(max_age) + 1);
  for (int age = 0; age <= max_age; ++age)
    m.levels_[age] = 0.5 * (1.0 + (2.0 * initial_fidelity - 1.0) * std::exp(-alpha * age));
  return m;
}

DiscreteModel DiscreteModel::with_rounding(AgeRounding rounding) const {
  DiscreteModel copy = *this;
  copy.rounding_ = rounding;
  return copy;
}

DiscreteModel DiscreteModel::with_gen_prob(double gen_prob) const {
  if (!(gen_prob > 0.0 && gen_prob <= 1.0))
    throw ModelError(describe("generation probability must lie in (0, 1]", gen_prob));
  DiscreteModel copy = *this;
  copy.gen_prob_ = gen_prob;
  return copy;
}

double generation_probability(const PhysicalConfig& cfg) {
  const double loss = cfg.attenuation * cfg.link_length_km;
  return cfg.attenuation_units == AttenuationUnits::Natural ? std::exp(-loss)
                                                            : std::pow(10.0, -loss / 10.0);
}

DiscreteModel derive_discrete_model(const PhysicalConfig& cfg, AgeRounding rounding) {
  if (auto bad = cfg.violations(); !bad.empty()) {
    std::string msg = bad.front();
    for (std::size_t i = 1; i < bad.size(); ++i) msg += "; " + bad[i];
    throw ModelError(msg);
  }
  const double slot = cfg.link_length_km * 1e3 / cfg.signal_speed_m_per_s;
  const double alpha = slot / cfg.decoherence_time_s;
  const double pg = generation_probability(cfg);
  if (!(pg > 0.0 && pg < 1.0))
    throw ModelError(describe("generation probability must lie in (0, 1)", pg));
  return DiscreteModel::from_parameters(pg, alpha, cfg.initial_fidelity,
                                        cfg.threshold_fidelity, rounding, slot);
}

double continuous_fidelity_decay(double f_start, double elapsed_s, double decoherence_time_s) {
  if (!(f_start >= 0.5 && f_start <= 1.0))
    throw ModelError(describe("start fidelity must lie in [0.5, 1]", f_start));
  if (!(elapsed_s >= 0.0)) throw ModelError(describe("elapsed time must be >= 0", elapsed_s));
  if (!(decoherence_time_s > 0.0))
    throw ModelError(describe("decoherence time must be positive", decoherence_time_s));
  return 0.5 * (1.0 + (2.0 * f_start - 1.0) * std::exp(-elapsed_s / decoherence_time_s));
}

double fidelity_at_age(const DiscreteModel& model, int age) {
  if (age < 0 || age > model.max_age())
    throw ModelError("age " + std::to_string(age) + " outside 0.." +
                     std::to_string(model.max_age()));
  return model.level_table()[static_cast<std::size_t>(age)];
}

double purified_fidelity(double f1, double f2) {
  if (!(f1 > 0.0 && f1 <= 1.0)) throw ModelError(describe("fidelity must lie in (0, 1]", f1));
  if (!(f2 > 0.0 && f2 <= 1.0)) throw ModelError(describe("fidelity must lie in (0, 1]", f2));
  const double both = f1 * f2;
  return both / (both + (1.0 - f1) * (1.0 - f2));
}

double purification_success_prob(double f1, double f2) {
  if (!(f1 >= 0.0 && f1 <= 1.0)) throw ModelError(describe("fidelity must lie in [0, 1]", f1));
  if (!(f2 >= 0.0 && f2 <= 1.0)) throw ModelError(describe("fidelity must lie in [0, 1]", f2));
  return f1 * f2 + (1.0 - f1) * (1.0 - f2);
}

double continuous_age(const DiscreteModel& model, double fidelity) {
  return -std::log((2.0 * fidelity - 1.0) / (2.0 * model.initial_fidelity() - 1.0)) /
         model.alpha();
}

int lattice_age(const DiscreteModel& model, double fidelity) {
  const double age = continuous_age(model, fidelity);
  // A one-ulp error in the fidelity moves the age by about 2 eps / (alpha (2F - 1)).
  const double spread = 8.0 * std::numeric_limits<double>::epsilon() /
                        (model.alpha() * (2.0 * fidelity - 1.0));
  const double tol = std::max(detail::kIntegerSnap, spread);
  return model.rounding() == AgeRounding::Ceil ? detail::snapped_ceil(age, tol)
                                               : detail::snapped_floor(age, tol);
}

int purified_age(const DiscreteModel& model, int n1, int n2) {
  if (n1 < 0 || n1 > n2 || n2 > model.max_age())
    throw ModelError("purified_age needs 0 <= n1 <= n2 <= N (got " + std::to_string(n1) +
                     ", " + std::to_string(n2) + ")");
  const auto& level = model.level_table();
  const double fp = purified_fidelity(level[n1], level[n2]);
  const int rounded = lattice_age(model, fp);
  return rounded > 0 ? rounded : 0;
}

}  // namespace pbg
