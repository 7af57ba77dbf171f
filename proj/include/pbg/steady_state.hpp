#pragma once

#include <Eigen/Dense>

#include <stdexcept>

#include "pbg/markov.hpp"
#include "pbg/model.hpp"

namespace pbg {

/// A solve that did not produce a stationary vector (singular system,
/// non-convergence, residual out of tolerance). Distinct from ModelError,
/// which flags invalid input.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Stationary probabilities in StateSpace order.
class SteadyState {
 public:
  SteadyState(int max_age, Eigen::VectorXd prob);

  int max_age() const { return space_.max_age(); }
  const StateSpace& space() const { return space_; }
  const Eigen::VectorXd& vector() const { return prob_; }

  double at(const LinkState& s) const { return prob_(static_cast<Eigen::Index>(space_.index(s))); }

  /// p_{-inf}: single-pair states, indexed by age.
  Eigen::VectorXd singles() const;
  /// p_m: states (m, j), j = m..N.
  Eigen::VectorXd block(int m) const;

  double total_single() const;
  double total_pair() const;

 private:
  StateSpace space_;
  Eigen::VectorXd prob_;
};

struct PowerIterationOptions {
  double tolerance = 1e-12;
  long max_iterations = 1'000'000;
};

/// Infinity norm of p^T Q - p^T.
double stationarity_residual(const TransitionMatrix& q, const Eigen::VectorXd& p);

/// Throws ModelError unless rows sum to 1 within 1e-12 and entries lie in [0, 1].
void validate_stochastic(const TransitionMatrix& q);

/// Direct solve of p^T Q = p^T with one balance equation replaced by the
/// normalization; falls back to power iteration when the factorization fails
/// or the residual exceeds 1e-9.
SteadyState steady_state_full(const TransitionMatrix& q);

SteadyState steady_state_power(const TransitionMatrix& q, PowerIterationOptions opts = {});

/// Reduced method: solves for p_0 (N+1 unknowns) and reconstructs every
/// other block from it.
SteadyState steady_state_reduced(const DiscreteModel& model);

/// Intermediate quantities of the reduced method, exposed for tests.
struct ReducedSystem {
  Eigen::VectorXd phi;    // failure mass reaching (-inf, 0), per unit of p_0
  Eigen::VectorXd rho;    // p_{-inf} / p_{-inf,0}
  Eigen::MatrixXd psi;    // p_0^T psi = 0
  Eigen::VectorXd beta;   // p_0^T beta = 1
};

ReducedSystem build_reduced_system(const DiscreteModel& model);

}  // namespace pbg
