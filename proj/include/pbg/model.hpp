#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pbg {

/// Thrown when physical or discrete parameters violate their invariants.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class AttenuationUnits { Natural, Decibel };

/// How a continuous purified age is mapped to a lattice age.
/// Ceil lower-bounds the purified fidelity; Floor upper-bounds it.
enum class AgeRounding { Ceil, Floor };

/// Raw link parameters. Lengths in kilometers, times in seconds.
struct PhysicalConfig {
  double link_length_km = 15.0;
  double attenuation = 0.15;  // per km
  AttenuationUnits attenuation_units = AttenuationUnits::Natural;
  double decoherence_time_s = 1e-3;
  double signal_speed_m_per_s = 3e8;
  double initial_fidelity = 1.0;
  double threshold_fidelity = 0.55;

  /// One message per violated invariant; empty when valid.
  std::vector<std::string> violations() const;
};

/// Parameters of the age-lattice Markov chain. Immutable after construction.
class DiscreteModel {
 public:
  /// Builds a model with N = max age reaching threshold_fidelity.
  /// gen_prob may be 1 here (deterministic generation, used by simulations).
  static DiscreteModel from_parameters(double gen_prob, double alpha,
                                       double initial_fidelity,
                                       double threshold_fidelity,
                                       AgeRounding rounding = AgeRounding::Ceil,
                                       double slot_duration_s = 0.0);

  double gen_prob() const { return gen_prob_; }
  double slot_duration() const { return slot_duration_; }
  double alpha() const { return alpha_; }
  int max_age() const { return max_age_; }
  double initial_fidelity() const { return initial_fidelity_; }
  double threshold_fidelity() const { return threshold_fidelity_; }
  AgeRounding rounding() const { return rounding_; }
  const std::vector<double>& level_table() const { return levels_; }

  DiscreteModel with_rounding(AgeRounding rounding) const;
  DiscreteModel with_gen_prob(double gen_prob) const;

 private:
  DiscreteModel() = default;

  double gen_prob_ = 0.0;
  double slot_duration_ = 0.0;
  double alpha_ = 0.0;
  int max_age_ = 0;
  double initial_fidelity_ = 1.0;
  double threshold_fidelity_ = 0.0;
  AgeRounding rounding_ = AgeRounding::Ceil;
  std::vector<double> levels_;
};

/// Slot duration l/c, alpha = dt/t_c, p_g from attenuation, N from the
/// threshold fidelity. Throws ModelError on invalid configs.
DiscreteModel derive_discrete_model(const PhysicalConfig& cfg,
                                    AgeRounding rounding = AgeRounding::Ceil);

/// Generation probability over the link for the configured attenuation units.
double generation_probability(const PhysicalConfig& cfg);

/// Fidelity after `elapsed` seconds of decoherence toward 1/2.
double continuous_fidelity_decay(double f_start, double elapsed_s,
                                 double decoherence_time_s);

double fidelity_at_age(const DiscreteModel& model, int age);

/// Fidelity of the surviving pair after a successful purification.
double purified_fidelity(double f1, double f2);

double purification_success_prob(double f1, double f2);

/// Continuous age whose lattice fidelity equals `fidelity`; may be negative
/// when fidelity exceeds F_0.
double continuous_age(const DiscreteModel& model, double fidelity);

/// Continuous age rounded per the model. Near-integers snap first; the snap
/// widens past 1e-9 only where the fidelity itself cannot resolve the age.
int lattice_age(const DiscreteModel& model, double fidelity);

/// Lattice age of the pair produced by purifying pairs of ages n1 <= n2.
int purified_age(const DiscreteModel& model, int n1, int n2);

namespace detail {

// Values within 1e-9 of an integer snap to it before rounding.
inline constexpr double kIntegerSnap = 1e-9;

int snapped_ceil(double x, double tolerance = kIntegerSnap);
int snapped_floor(double x, double tolerance = kIntegerSnap);

}  // namespace detail

}  // namespace pbg
