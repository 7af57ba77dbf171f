#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "pbg/markov.hpp"
#include "test_helpers.hpp"

using namespace pbg;
using pbg::testing::fig2_model;
using pbg::testing::model_with;

TEST_CASE("state enumeration order and size") {
  const StateSpace s1(1);
  REQUIRE(s1.size() == 5);
  CHECK(s1.state(0) == LinkState::single(0));
  CHECK(s1.state(1) == LinkState::single(1));
  CHECK(s1.state(2) == LinkState::pair(0, 0));
  CHECK(s1.state(3) == LinkState::pair(0, 1));
  CHECK(s1.state(4) == LinkState::pair(1, 1));

  const StateSpace s47 = enumerate_states(fig2_model());
  CHECK(s47.size() == 1224);
  CHECK(s47.index(LinkState::pair(0, 0)) == 48);
  CHECK(s47.index(LinkState::pair(47, 47)) == 1223);
  for (std::size_t k = 0; k < s47.size(); ++k) {
    CHECK(s47.index(s47.state(k)) == k);
    const LinkState& st = s47.state(k);
    if (st.is_pair()) CHECK(st.newer <= st.older);
  }
}

TEST_CASE("N=1 transitions") {
  const DiscreteModel m = model_with(1, 0.4, 0.3);
  const StateSpace space(1);
  const Eigen::MatrixXd q = build_transition_matrix(m, space).dense();
  const auto at = [&](LinkState a, LinkState b) {
    return q(static_cast<Eigen::Index>(space.index(a)), static_cast<Eigen::Index>(space.index(b)));
  };
  CHECK(at(LinkState::single(1), LinkState::single(1)) == doctest::Approx(0.6));
  CHECK(at(LinkState::single(1), LinkState::pair(0, 1)) == doctest::Approx(0.4));
  CHECK(at(LinkState::single(0), LinkState::single(1)) == doctest::Approx(0.6));
  CHECK(at(LinkState::single(0), LinkState::pair(0, 1)) == doctest::Approx(0.4));

  const auto& lv = m.level_table();
  const double ps = purification_success_prob(lv[1], lv[1]);
  const int np = purified_age(m, 1, 1);
  CHECK(at(LinkState::pair(1, 1), LinkState::pair(1, 1)) == doctest::Approx(0.6));
  CHECK(at(LinkState::pair(1, 1), LinkState::pair(0, np)) == doctest::Approx(0.4 * ps));
  CHECK(at(LinkState::pair(1, 1), LinkState::single(0)) == doctest::Approx(0.4 * (1 - ps)));
}

TEST_CASE("worked transition at (10, 20)") {
  const DiscreteModel m = fig2_model();
  const StateSpace space = enumerate_states(m);
  const Eigen::MatrixXd q = build_transition_matrix(m, space).dense();
  const auto row = static_cast<Eigen::Index>(space.index(LinkState::pair(10, 20)));
  const double pg = m.gen_prob();
  CHECK(q(row, static_cast<Eigen::Index>(space.index(LinkState::pair(0, 5)))) ==
        doctest::Approx(pg * 0.611565).epsilon(1e-5));
  CHECK(q(row, 0) == doctest::Approx(pg * 0.388435).epsilon(1e-5));
  CHECK(q(row, static_cast<Eigen::Index>(space.index(LinkState::pair(11, 21)))) ==
        doctest::Approx(1 - pg));
}

TEST_CASE("perfect purification sends no mass to the failure branch") {
  // F_0 = 1: (0, 0) purifies with p_s = 1.
  const DiscreteModel m = model_with(4, 0.5, 0.2);
  const StateSpace space(4);
  const TransitionMatrix q = build_transition_matrix(m, space);
  const auto row = static_cast<Eigen::Index>(space.index(LinkState::pair(0, 0)));
  CHECK(q.q.coeff(row, 0) == 0.0);
  int nnz = 0;
  for (SparseRowMatrix::InnerIterator it(q.q, row); it; ++it) ++nnz;
  CHECK(nnz == 2);
}

TEST_CASE("blocks: shapes and row sums") {
  const DiscreteModel m = model_with(6, 0.37, 0.11);
  const TransitionBlocks b = assemble_blocks(m);
  const double pg = m.gen_prob();
  REQUIRE(b.forward.size() == 6);
  for (int k = 0; k < 6; ++k) {
    CHECK(b.forward[k].rows() == 7 - k);
    CHECK(b.forward[k].cols() == 6 - k);
    for (Eigen::Index r = 0; r < b.forward[k].rows(); ++r)
      CHECK(b.forward[k].row(r).sum() == doctest::Approx(1 - pg));
  }
  CHECK(b.generation.rows() == 7);
  CHECK(b.generation.col(0).sum() == 0.0);
  for (Eigen::Index r = 0; r < 7; ++r) CHECK(b.generation.row(r).sum() == doctest::Approx(pg));
  for (int k = 0; k <= 6; ++k) {
    CHECK(b.failure[k].size() == 7 - k);
    for (Eigen::Index r = 0; r < b.success[k].rows(); ++r) {
      int nnz = 0;
      for (Eigen::Index c = 0; c < b.success[k].cols(); ++c) nnz += b.success[k](r, c) != 0.0;
      CHECK(nnz == 1);
      CHECK(b.success[k].row(r).sum() + b.failure[k](r) == doctest::Approx(pg));
    }
  }
}

TEST_CASE("block assembly reproduces the direct build exactly") {
  for (int n : {1, 2, 5, 13, 47}) {
    const DiscreteModel m = model_with(n, 0.23, 0.05);
    const Eigen::MatrixXd direct = build_transition_matrix(m, StateSpace(n)).dense();
    const Eigen::MatrixXd blocks = assemble_from_blocks(assemble_blocks(m)).dense();
    CHECK((direct - blocks).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("property: row-stochastic, sparse, ordered support") {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<int> n_dist(1, 60);
  std::uniform_real_distribution<double> pg_dist(0.001, 0.999);
  std::uniform_real_distribution<double> alpha_dist(0.005, 0.5);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = n_dist(gen);
    const DiscreteModel m = model_with(n, pg_dist(gen), alpha_dist(gen));
    const StateSpace space(n);
    const TransitionMatrix q = build_transition_matrix(m, space);
    for (Eigen::Index r = 0; r < q.q.outerSize(); ++r) {
      double sum = 0.0;
      int nnz = 0;
      for (SparseRowMatrix::InnerIterator it(q.q, r); it; ++it) {
        CHECK(it.value() >= 0.0);
        CHECK(it.value() <= 1.0);
        sum += it.value();
        ++nnz;
        const LinkState to = space.state(static_cast<std::size_t>(it.col()));
        const LinkState from = space.state(static_cast<std::size_t>(r));
        // Generation into a full memory lands on (0, .) or resets to (-inf, 0).
        if (from.is_pair() && to.is_pair() && to.newer == 0) CHECK(to.older <= from.newer);
      }
      CHECK(std::abs(sum - 1.0) <= 1e-12);
      CHECK(nnz <= 3);
    }
  }
}
