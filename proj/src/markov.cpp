#include "pbg/markov.hpp"

#include <algorithm>
#include <cassert>
#include <vector>

namespace pbg {

StateSpace::StateSpace(int max_age) : max_age_(max_age) {
  if (max_age < 1) throw ModelError("state space needs max age >= 1");
  states_.reserve(count(max_age));
  for (int j = 0; j <= max_age; ++j) states_.push_back(LinkState::single(j));
  for (int i = 0; i <= max_age; ++i)
    for (int j = i; j <= max_age; ++j) states_.push_back(LinkState::pair(i, j));
}

std::size_t StateSpace::count(int max_age) {
  const auto n = static_cast<std::size_t>(max_age) + 1;
  return n + n * (n + 1) / 2;
}

std::size_t StateSpace::block_offset(int m) const {
  const auto n = static_cast<std::size_t>(max_age_) + 1;
  const auto mm = static_cast<std::size_t>(m);
  // sum_{r < m} (n - r)
  return n + mm * n - mm * (mm - 1) / 2;
}

std::size_t StateSpace::index(const LinkState& s) const {
  if (!s.is_pair()) return static_cast<std::size_t>(s.older);
  return block_offset(s.newer) + static_cast<std::size_t>(s.older - s.newer);
}

StateSpace enumerate_states(const DiscreteModel& model) { return StateSpace(model.max_age()); }

PurificationTable::PurificationTable(const DiscreteModel& model)
    : max_age_(model.max_age()) {
  const auto n = static_cast<std::size_t>(max_age_) + 1;
  success_.assign(n * n, 0.0);
  destination_.assign(n * n, 0);
  const auto& level = model.level_table();
  for (int i = 0; i <= max_age_; ++i) {
    for (int j = i; j <= max_age_; ++j) {
      success_[slot(i, j)] = purification_success_prob(level[i], level[j]);
      destination_[slot(i, j)] = purified_age(model, i, j);
    }
  }
}

TransitionMatrix build_transition_matrix(const DiscreteModel& model, const StateSpace& space) {
  const int n_age = model.max_age();
  const double pg = model.gen_prob();
  const PurificationTable pur(model);
  auto clamp = [n_age](int a) { return std::min(a + 1, n_age); };

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(space.size() * 3);
  for (std::size_t row = 0; row < space.size(); ++row) {
    const LinkState s = space.state(row);
    auto add = [&](const LinkState& to, double w) {
      if (w != 0.0) entries.emplace_back(static_cast<int>(row), static_cast<int>(space.index(to)), w);
    };
    if (!s.is_pair()) {
      add(LinkState::single(clamp(s.older)), 1.0 - pg);
      add(LinkState::pair(0, clamp(s.older)), pg);
    } else {
      const double ps = pur.success(s.newer, s.older);
      add(LinkState::pair(clamp(s.newer), clamp(s.older)), 1.0 - pg);
      add(LinkState::pair(0, pur.destination(s.newer, s.older)), pg * ps);
      add(LinkState::single(0), pg * (1.0 - ps));
    }
  }
  TransitionMatrix out;
  out.max_age = n_age;
  out.q.resize(static_cast<Eigen::Index>(space.size()), static_cast<Eigen::Index>(space.size()));
  out.q.setFromTriplets(entries.begin(), entries.end());
  out.q.makeCompressed();
  return out;
}

TransitionBlocks assemble_blocks(const DiscreteModel& model) {
  const int n_age = model.max_age();
  const double pg = model.gen_prob();
  const PurificationTable pur(model);

  TransitionBlocks b;
  b.max_age = n_age;
  b.gen_prob = pg;

  for (int m = 0; m < n_age; ++m) {
    const int rows = n_age - m + 1;
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(rows, rows - 1);
    x.topRows(rows - 1).setIdentity();
    x(rows - 1, rows - 2) = 1.0;
    b.forward.push_back((1.0 - pg) * x);
  }

  // Same shifted/saturating pattern as X_0 behind a zero column, scaled by p_g.
  b.generation = Eigen::MatrixXd::Zero(n_age + 1, n_age + 1);
  for (int j = 0; j <= n_age; ++j) b.generation(j, std::min(j + 1, n_age)) = pg;

  for (int m = 0; m <= n_age; ++m) {
    const int rows = n_age - m + 1;
    Eigen::VectorXd f(rows);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows, n_age + 1);
    for (int l = 0; l < rows; ++l) {
      const double ps = pur.success(m, m + l);
      f(l) = pg * (1.0 - ps);
      d(l, pur.destination(m, m + l)) = pg * ps;
    }
    b.failure.push_back(std::move(f));
    b.success.push_back(std::move(d));
  }
  return b;
}

TransitionMatrix assemble_from_blocks(const TransitionBlocks& b) {
  const int n_age = b.max_age;
  const StateSpace space(n_age);
  const auto n = static_cast<Eigen::Index>(space.size());
  const auto singles = static_cast<Eigen::Index>(n_age + 1);

  std::vector<Eigen::Triplet<double>> entries;
  auto place = [&](Eigen::Index row0, Eigen::Index col0, const Eigen::MatrixXd& block) {
    for (Eigen::Index r = 0; r < block.rows(); ++r)
      for (Eigen::Index c = 0; c < block.cols(); ++c)
        if (block(r, c) != 0.0)
          entries.emplace_back(static_cast<int>(row0 + r), static_cast<int>(col0 + c), block(r, c));
  };

  // Block row S_{-inf}: [0 | X_0] then X_{-inf}.
  place(0, 1, b.forward.at(0));
  place(0, singles, b.generation);

  for (int m = 0; m <= n_age; ++m) {
    const auto row0 = static_cast<Eigen::Index>(space.block_offset(m));
    place(row0, 0, b.failure.at(m));
    place(row0, singles, b.success.at(m));
    if (m < n_age) {
      place(row0, static_cast<Eigen::Index>(space.block_offset(m + 1)), b.forward.at(m));
    } else {
      Eigen::MatrixXd stay(1, 1);
      stay(0, 0) = 1.0 - b.gen_prob;
      place(row0, row0, stay);
    }
  }

  TransitionMatrix out;
  out.max_age = n_age;
  out.q.resize(n, n);
  out.q.setFromTriplets(entries.begin(), entries.end());
  out.q.makeCompressed();
  return out;
}

}  // namespace pbg
