#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstddef>
#include <vector>

#include "pbg/model.hpp"

namespace pbg {

/// Memory occupancy in ages. `older` is always set; `newer` is kNone when only
/// one pair is stored (the "-inf" slot).
struct LinkState {
  static constexpr int kNone = -1;

  int newer = kNone;
  int older = 0;

  static constexpr LinkState single(int age) { return {kNone, age}; }
  static constexpr LinkState pair(int newer_age, int older_age) {
    return {newer_age, older_age};
  }

  constexpr bool is_pair() const { return newer != kNone; }
  friend constexpr bool operator==(const LinkState&, const LinkState&) = default;
};

/// Canonical ordering: singles (0..N), then pairs row by row (0,0..N), (1,1..N), ...
class StateSpace {
 public:
  explicit StateSpace(int max_age);

  int max_age() const { return max_age_; }
  std::size_t size() const { return states_.size(); }
  const LinkState& state(std::size_t index) const { return states_[index]; }
  const std::vector<LinkState>& states() const { return states_; }

  std::size_t index(const LinkState& s) const;
  /// Offset of block S_m = {(m, j) : j >= m} inside the state vector.
  std::size_t block_offset(int m) const;

  static std::size_t count(int max_age);

 private:
  int max_age_;
  std::vector<LinkState> states_;
};

StateSpace enumerate_states(const DiscreteModel& model);

/// Success probability and destination age for every pair state (i <= j).
class PurificationTable {
 public:
  explicit PurificationTable(const DiscreteModel& model);

  double success(int i, int j) const { return success_[slot(i, j)]; }
  int destination(int i, int j) const { return destination_[slot(i, j)]; }
  int max_age() const { return max_age_; }

 private:
  std::size_t slot(int i, int j) const {
    return static_cast<std::size_t>(i) * (max_age_ + 1) + static_cast<std::size_t>(j);
  }

  int max_age_;
  std::vector<double> success_;
  std::vector<int> destination_;
};

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Row-stochastic transition matrix over StateSpace indices. Stored sparse:
/// every row has at most three nonzeros.
struct TransitionMatrix {
  int max_age = 0;
  SparseRowMatrix q;

  std::size_t size() const { return static_cast<std::size_t>(q.rows()); }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(q); }
};

TransitionMatrix build_transition_matrix(const DiscreteModel& model, const StateSpace& space);

/// The sub-matrices of the block form of Q.
struct TransitionBlocks {
  int max_age = 0;
  double gen_prob = 0.0;
  std::vector<Eigen::MatrixXd> forward;  // X_m, m = 0..N-1, (N-m+1) x (N-m)
  Eigen::MatrixXd generation;            // X_{-inf}, (N+1) x (N+1)
  std::vector<Eigen::VectorXd> failure;  // f_m, m = 0..N, length N-m+1
  std::vector<Eigen::MatrixXd> success;  // D_m, m = 0..N, (N-m+1) x (N+1)
};

TransitionBlocks assemble_blocks(const DiscreteModel& model);

/// Places the blocks into the full matrix layout (the inverse of assemble_blocks).
TransitionMatrix assemble_from_blocks(const TransitionBlocks& blocks);

}  // namespace pbg
