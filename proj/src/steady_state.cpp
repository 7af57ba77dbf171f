#include "pbg/steady_state.hpp"

#include <Eigen/QR>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace pbg {

namespace {

constexpr double kRowSumTolerance = 1e-12;
constexpr double kResidualTolerance = 1e-9;
constexpr double kReducedTolerance = 1e-10;

void clear_negative_noise(Eigen::VectorXd& p) {
  for (Eigen::Index k = 0; k < p.size(); ++k)
    if (p(k) < 0.0 && p(k) > -1e-14) p(k) = 0.0;
}

// Scale applied by the product X_0 ... X_{m-1} (and 1/p_g for the last block).
std::vector<double> transfer_scale(int n_age, double pg) {
  std::vector<double> c(static_cast<std::size_t>(n_age) + 1);
  double h = 1.0;
  for (int m = 0; m < n_age; ++m) {
    c[m] = h;
    h *= 1.0 - pg;
  }
  c[n_age] = h / pg;
  return c;
}

}  // namespace

SteadyState::SteadyState(int max_age, Eigen::VectorXd prob)
    : space_(max_age), prob_(std::move(prob)) {
  if (static_cast<std::size_t>(prob_.size()) != space_.size())
    throw ModelError("steady-state vector size does not match the state space");
}

Eigen::VectorXd SteadyState::singles() const { return prob_.head(max_age() + 1); }

Eigen::VectorXd SteadyState::block(int m) const {
  return prob_.segment(static_cast<Eigen::Index>(space_.block_offset(m)), max_age() - m + 1);
}

double SteadyState::total_single() const { return singles().sum(); }

double SteadyState::total_pair() const { return prob_.sum() - total_single(); }

double stationarity_residual(const TransitionMatrix& q, const Eigen::VectorXd& p) {
  const Eigen::VectorXd moved = q.q.transpose() * p;
  return (moved - p).cwiseAbs().maxCoeff();
}

void validate_stochastic(const TransitionMatrix& q) {
  if (q.q.rows() != q.q.cols() || q.q.rows() == 0)
    throw ModelError("transition matrix must be square and nonempty");
  for (Eigen::Index r = 0; r < q.q.outerSize(); ++r) {
    double sum = 0.0;
    for (SparseRowMatrix::InnerIterator it(q.q, r); it; ++it) {
      if (!(it.value() >= 0.0 && it.value() <= 1.0))
        throw ModelError("transition entry outside [0, 1] in row " + std::to_string(r));
      sum += it.value();
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance)
      throw ModelError("row " + std::to_string(r) + " does not sum to 1");
  }
}

SteadyState steady_state_power(const TransitionMatrix& q, PowerIterationOptions opts) {
  validate_stochastic(q);
  const Eigen::Index n = q.q.rows();
  Eigen::VectorXd p = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  Eigen::VectorXd next(n);
  for (long it = 0; it < opts.max_iterations; ++it) {
    next.noalias() = q.q.transpose() * p;
    next /= next.sum();
    const double change = (next - p).cwiseAbs().maxCoeff();
    p.swap(next);
    if (change <= opts.tolerance) return SteadyState(q.max_age, std::move(p));
  }
  throw SolverError("power iteration did not converge in " +
                    std::to_string(opts.max_iterations) + " iterations");
}

SteadyState steady_state_full(const TransitionMatrix& q) {
  validate_stochastic(q);
  const Eigen::Index n = q.q.rows();

  // (I - Q)^T p = 0 with the last equation replaced by sum(p) = 1.
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(q.q.nonZeros() + 2 * n));
  for (Eigen::Index r = 0; r < q.q.outerSize(); ++r) {
    for (SparseRowMatrix::InnerIterator it(q.q, r); it; ++it) {
      const Eigen::Index row = it.col();
      if (row == n - 1) continue;
      entries.emplace_back(static_cast<int>(row), static_cast<int>(r), -it.value());
    }
  }
  for (Eigen::Index k = 0; k < n - 1; ++k) entries.emplace_back(static_cast<int>(k), static_cast<int>(k), 1.0);
  for (Eigen::Index k = 0; k < n; ++k) entries.emplace_back(static_cast<int>(n - 1), static_cast<int>(k), 1.0);

  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());
  a.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(a);
  if (lu.info() == Eigen::Success) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;
    Eigen::VectorXd p = lu.solve(rhs);
    if (lu.info() == Eigen::Success && p.allFinite()) {
      clear_negative_noise(p);
      if (stationarity_residual(q, p) <= kResidualTolerance && std::abs(p.sum() - 1.0) <= 1e-10)
        return SteadyState(q.max_age, std::move(p));
    }
  }

  SteadyState fallback = steady_state_power(q);
  if (stationarity_residual(q, fallback.vector()) > kResidualTolerance)
    throw SolverError("stationary solve failed: direct factorization unusable and power "
                      "iteration residual above tolerance");
  return fallback;
}

ReducedSystem build_reduced_system(const DiscreteModel& model) {
  const int n_age = model.max_age();
  const double pg = model.gen_prob();
  const Eigen::Index dim = n_age + 1;
  const PurificationTable pur(model);
  const std::vector<double> c = transfer_scale(n_age, pg);

  // Row k of (X_0...X_{m-1}) hits local index min(k, N-m) of block m.
  auto local = [n_age](Eigen::Index k, int m) {
    return static_cast<int>(std::min<Eigen::Index>(k, n_age - m));
  };

  ReducedSystem sys;
  sys.phi = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    double acc = 0.0;
    for (int m = 0; m <= n_age; ++m) {
      const int j = m + local(k, m);
      acc += c[m] * pg * (1.0 - pur.success(m, j));
    }
    sys.phi(k) = acc;
  }

  sys.rho.resize(dim);
  for (int j = 0; j <= n_age; ++j) sys.rho(j) = j < n_age ? c[j] : c[n_age];

  // rho^T X_{-inf}
  Eigen::VectorXd gen_row = Eigen::VectorXd::Zero(dim);
  for (int j = 0; j <= n_age; ++j) gen_row(std::min(j + 1, n_age)) += pg * sys.rho(j);

  sys.psi = Eigen::MatrixXd::Identity(dim, dim);
  sys.psi.noalias() -= sys.phi * gen_row.transpose();
  for (Eigen::Index k = 0; k < dim; ++k) {
    for (int m = 0; m <= n_age; ++m) {
      const int j = m + local(k, m);
      sys.psi(k, pur.destination(m, j)) -= c[m] * pg * pur.success(m, j);
    }
  }

  double block_mass = 0.0;
  for (int m = 0; m <= n_age; ++m) block_mass += c[m];
  sys.beta = sys.phi * sys.rho.sum() + Eigen::VectorXd::Constant(dim, block_mass);
  return sys;
}

SteadyState steady_state_reduced(const DiscreteModel& model) {
  const int n_age = model.max_age();
  const double pg = model.gen_prob();
  const Eigen::Index dim = n_age + 1;
  const ReducedSystem sys = build_reduced_system(model);

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sys.psi);
  if (qr.rank() < dim - 1)
    throw SolverError("reduced system is rank deficient by more than one (rank " +
                      std::to_string(qr.rank()) + " of " + std::to_string(dim) + ")");
  const Eigen::Index replaced = qr.colsPermutation().indices()(dim - 1);

  Eigen::MatrixXd square = sys.psi;
  square.col(replaced) = sys.beta;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  rhs(replaced) = 1.0;
  const Eigen::VectorXd p0 = square.transpose().fullPivLu().solve(rhs);

  const double homogeneous = (sys.psi.transpose() * p0).cwiseAbs().maxCoeff();
  const double normalization = std::abs(sys.beta.dot(p0) - 1.0);
  if (!p0.allFinite() || homogeneous > kReducedTolerance || normalization > kReducedTolerance)
    throw SolverError("reduced system residual above tolerance");

  const StateSpace space(n_age);
  const std::vector<double> c = transfer_scale(n_age, pg);
  Eigen::VectorXd p(static_cast<Eigen::Index>(space.size()));

  const double single0 = p0.dot(sys.phi);
  p.head(dim) = single0 * sys.rho;

  for (int m = 0; m <= n_age; ++m) {
    const auto off = static_cast<Eigen::Index>(space.block_offset(m));
    const int width = n_age - m + 1;
    // Shift by m with saturation at the last slot, then scale.
    for (int l = 0; l < width - 1; ++l) p(off + l) = c[m] * p0(l);
    p(off + width - 1) = c[m] * p0.tail(dim - (width - 1)).sum();
  }

  clear_negative_noise(p);
  return SteadyState(n_age, std::move(p));
}

}  // namespace pbg
