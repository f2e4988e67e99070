#include "wrof/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace wrof {

namespace {

/**
 * Generic dense two-phase primal simplex for min cᵀx, Ax = b, x ≥ 0.
 *
 * Bland's rule for entering and leaving variables. Deliberately shares no
 * code with the transport module's network solver.
 */
class DenseSimplex {
 public:
  DenseSimplex(Eigen::MatrixXd a, Eigen::VectorXd b, Eigen::VectorXd c)
      : rows_(a.rows()), nv_(a.cols()), c_(std::move(c)) {
    for (Eigen::Index r = 0; r < rows_; ++r)
      if (b[r] < 0.0) {
        a.row(r) = -a.row(r);
        b[r] = -b[r];
      }
    tableau_.resize(rows_, nv_ + rows_);
    tableau_.leftCols(nv_) = a;
    tableau_.rightCols(rows_) = Eigen::MatrixXd::Identity(rows_, rows_);
    rhs_ = b;
    basis_.resize(static_cast<size_t>(rows_));
    for (Eigen::Index r = 0; r < rows_; ++r) basis_[static_cast<size_t>(r)] = nv_ + r;
  }

  double solve() {
    phase1();
    drop_artificials();
    phase2();
    double value = 0.0;
    for (Eigen::Index r = 0; r < rows_; ++r) {
      const Eigen::Index j = basis_[static_cast<size_t>(r)];
      if (j < nv_) value += c_[j] * rhs_[r];
    }
    return value;
  }

 private:
  void run(Eigen::RowVectorXd& d, Eigen::Index limit_cols) {
    const double tol = 1e-9 * (1.0 + d.cwiseAbs().maxCoeff());
    const long max_iter = 2000 + 50L * (rows_ + limit_cols);
    for (long it = 0; it < max_iter; ++it) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < limit_cols; ++j)
        if (d[j] < -tol && !is_basic(j)) {
          enter = j;
          break;
        }
      if (enter < 0) return;
      Eigen::Index leave = -1;
      double best_ratio = 0.0;
      for (Eigen::Index r = 0; r < rows_; ++r) {
        const double coef = tableau_(r, enter);
        if (coef <= 1e-11) continue;
        const double ratio = rhs_[r] / coef;
        if (leave < 0 || ratio < best_ratio - 1e-14 ||
            (ratio <= best_ratio + 1e-14 &&
             basis_[static_cast<size_t>(r)] < basis_[static_cast<size_t>(leave)])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave < 0) throw Error(Errc::SolverFailure, "LP unbounded");
      pivot(leave, enter, d);
    }
    throw Error(Errc::SolverFailure, "dense simplex iteration cap reached");
  }

  void pivot(Eigen::Index row, Eigen::Index col, Eigen::RowVectorXd& d) {
    const double p = tableau_(row, col);
    tableau_.row(row) /= p;
    rhs_[row] /= p;
    for (Eigen::Index r = 0; r < rows_; ++r) {
      if (r == row) continue;
      const double f = tableau_(r, col);
      if (f != 0.0) {
        tableau_.row(r) -= f * tableau_.row(row);
        rhs_[r] -= f * rhs_[row];
        if (rhs_[r] < 0.0) rhs_[r] = 0.0;
      }
    }
    const double fd = d[col];
    if (fd != 0.0) d -= fd * tableau_.row(row);
    basis_[static_cast<size_t>(row)] = col;
  }

  bool is_basic(Eigen::Index j) const {
    return std::find(basis_.begin(), basis_.end(), j) != basis_.end();
  }

  void phase1() {
    Eigen::RowVectorXd d = Eigen::RowVectorXd::Zero(nv_ + rows_);
    for (Eigen::Index j = 0; j < nv_ + rows_; ++j)
      if (j >= nv_) d[j] = 1.0;
    for (Eigen::Index r = 0; r < rows_; ++r) d -= tableau_.row(r);  // artificials basic
    run(d, nv_);
    double infeas = 0.0;
    for (Eigen::Index r = 0; r < rows_; ++r)
      if (basis_[static_cast<size_t>(r)] >= nv_) infeas += rhs_[r];
    if (infeas > 1e-7) throw Error(Errc::SolverFailure, "LP infeasible");
  }

  // Pivot zero-valued artificials out of the basis; redundant rows stay with
  // an artificial basic at zero and never change again.
  void drop_artificials() {
    for (Eigen::Index r = 0; r < rows_; ++r) {
      if (basis_[static_cast<size_t>(r)] < nv_) continue;
      for (Eigen::Index j = 0; j < nv_; ++j)
        if (std::abs(tableau_(r, j)) > 1e-9 && !is_basic(j)) {
          Eigen::RowVectorXd dummy = Eigen::RowVectorXd::Zero(nv_ + rows_);
          pivot(r, j, dummy);
          break;
        }
    }
  }

  void phase2() {
    Eigen::RowVectorXd d = Eigen::RowVectorXd::Zero(nv_ + rows_);
    d.head(nv_) = c_.transpose();
    for (Eigen::Index r = 0; r < rows_; ++r) {
      const Eigen::Index j = basis_[static_cast<size_t>(r)];
      if (d[j] != 0.0) d -= d[j] * tableau_.row(r);
    }
    run(d, nv_);
  }

  Eigen::Index rows_, nv_;
  Eigen::VectorXd c_;
  Eigen::MatrixXd tableau_;
  Eigen::VectorXd rhs_;
  std::vector<Eigen::Index> basis_;
};

PointMatrix dedupe_rows(const PointMatrix& pts) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    bool dup = false;
    for (Eigen::Index k : keep)
      if ((pts.row(i).array() == pts.row(k).array()).all()) {
        dup = true;
        break;
      }
    if (!dup) keep.push_back(i);
  }
  PointMatrix out(static_cast<Eigen::Index>(keep.size()), pts.cols());
  for (size_t r = 0; r < keep.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = pts.row(keep[r]);
  return out;
}

Eigen::RowVectorXd threshold_point(const Eigen::RowVectorXd& x, const Eigen::RowVectorXd& y,
                                   double lambda) {
  const double r = (x - y).norm();
  if (r <= lambda) return y;
  return x + (lambda / r) * (y - x);
}

double joint_lp(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double lambda,
                const PointMatrix& mid) {
  const Eigen::Index n = mu.size(), m = nu.size(), k = mid.rows();
  const Eigen::Index nv = k * (n + m);
  const Eigen::Index rows = n + m + k;
  if (rows * (nv + rows) > 20000000)
    throw Error(Errc::BudgetExceeded, "joint LP too large for the dense oracle");

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, nv);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(nv);
  auto x1 = [&](Eigen::Index i, Eigen::Index z) { return i * k + z; };
  auto x2 = [&](Eigen::Index z, Eigen::Index j) { return n * k + z * m + j; };

  for (Eigen::Index i = 0; i < n; ++i) {
    b[i] = mu.weights()[i];
    for (Eigen::Index z = 0; z < k; ++z) {
      a(i, x1(i, z)) = 1.0;
      c[x1(i, z)] = 0.5 * (mu.points().row(i) - mid.row(z)).squaredNorm();
    }
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    b[n + j] = nu.weights()[j];
    for (Eigen::Index z = 0; z < k; ++z) {
      a(n + j, x2(z, j)) = 1.0;
      c[x2(z, j)] = lambda * (mid.row(z) - nu.points().row(j)).norm();
    }
  }
  for (Eigen::Index z = 0; z < k; ++z) {
    for (Eigen::Index i = 0; i < n; ++i) a(n + m + z, x1(i, z)) = 1.0;
    for (Eigen::Index j = 0; j < m; ++j) a(n + m + z, x2(z, j)) = -1.0;
  }
  return DenseSimplex(std::move(a), std::move(b), std::move(c)).solve();
}

PointMatrix candidate_support(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                              double lambda) {
  const Eigen::Index n = mu.size(), m = nu.size();
  PointMatrix mid(n * m + n + m, mu.dim());
  Eigen::Index row = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      mid.row(row++) = threshold_point(mu.point(i), nu.point(j), lambda);
  mid.middleRows(row, n) = mu.points();
  mid.middleRows(row + n, m) = nu.points();
  return dedupe_rows(mid);
}

void check_budget(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.size() * nu.size() > 10000)
    throw Error(Errc::BudgetExceeded, "oracle budget is 1e4 candidate pairs");
}

}  // namespace

double brute_force_wrof(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double lambda) {
  if (!(lambda > 0.0)) throw Error(Errc::NonPositiveLambda, "lambda must be positive");
  if (mu.dim() != nu.dim())
    throw Error(Errc::DimensionMismatch, "measures have different dimensions");
  check_budget(mu, nu);
  return joint_lp(mu, nu, lambda, candidate_support(mu, nu, lambda));
}

double brute_force_wrof_augmented(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                  double lambda, int extra_per_pair, std::uint64_t seed) {
  if (!(lambda > 0.0)) throw Error(Errc::NonPositiveLambda, "lambda must be positive");
  check_budget(mu, nu);
  PointMatrix base = candidate_support(mu, nu, lambda);
  const Eigen::Index n = mu.size(), m = nu.size();
  PointMatrix mid(base.rows() + n * m * extra_per_pair, mu.dim());
  mid.topRows(base.rows()) = base;
  std::mt19937_64 rng(seed);
  auto uniform01 = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  Eigen::Index row = base.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      for (int e = 0; e < extra_per_pair; ++e) {
        const double t = uniform01();
        mid.row(row++) = mu.point(i) + t * (nu.point(j) - mu.point(i));
      }
  return joint_lp(mu, nu, lambda, dedupe_rows(mid));
}

namespace {

bool is_uniform(const DiscreteMeasure& m) {
  const double w = 1.0 / static_cast<double>(m.size());
  return (m.weights().array() - w).abs().maxCoeff() <= 1e-12;
}

double permutation_minimum(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           const CostKind& kind) {
  const Eigen::Index n = mu.size();
  std::vector<Eigen::Index> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      total += cost(kind, mu.point(i), nu.point(perm[static_cast<size_t>(i)]));
    best = std::min(best, total / static_cast<double>(n));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Enumerate all potential bases (cell subsets of size n+m−1) of the
// transportation polytope and keep the best feasible vertex.
double basis_enumeration(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         const CostKind& kind) {
  const Eigen::Index n = mu.size(), m = nu.size();
  const Eigen::Index cells = n * m;
  const Eigen::Index pick = std::min(cells, n + m - 1);
  std::vector<int> mask(static_cast<size_t>(cells), 0);
  std::fill(mask.begin(), mask.begin() + static_cast<size_t>(pick), 1);
  std::sort(mask.begin(), mask.end());  // lowest lexicographic combination first

  Eigen::MatrixXd costs(n, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) costs(i, j) = cost(kind, mu.point(i), nu.point(j));

  double best = std::numeric_limits<double>::infinity();
  do {
    std::vector<Eigen::Index> chosen;
    for (Eigen::Index cell = 0; cell < cells; ++cell)
      if (mask[static_cast<size_t>(cell)]) chosen.push_back(cell);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + m, pick);
    for (size_t s = 0; s < chosen.size(); ++s) {
      a(chosen[s] / m, static_cast<Eigen::Index>(s)) = 1.0;
      a(n + chosen[s] % m, static_cast<Eigen::Index>(s)) = 1.0;
    }
    Eigen::VectorXd rhs(n + m);
    rhs.head(n) = mu.weights();
    rhs.tail(m) = nu.weights();
    Eigen::VectorXd flow = a.colPivHouseholderQr().solve(rhs);
    if ((a * flow - rhs).cwiseAbs().maxCoeff() > 1e-9) continue;
    if (flow.minCoeff() < -1e-10) continue;
    double total = 0.0;
    for (size_t s = 0; s < chosen.size(); ++s)
      total += std::max(flow[static_cast<Eigen::Index>(s)], 0.0) *
               costs(chosen[s] / m, chosen[s] % m);
    best = std::min(best, total);
  } while (std::next_permutation(mask.begin(), mask.end()));
  if (!std::isfinite(best)) throw Error(Errc::SolverFailure, "no feasible vertex found");
  return best;
}

}  // namespace

double enumerate_transport(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           const CostKind& kind) {
  if (mu.dim() != nu.dim())
    throw Error(Errc::DimensionMismatch, "measures have different dimensions");
  if (mu.size() == nu.size() && mu.size() <= 5 && is_uniform(mu) && is_uniform(nu))
    return permutation_minimum(mu, nu, kind);
  if (mu.size() * nu.size() <= 12) return basis_enumeration(mu, nu, kind);
  throw Error(Errc::BudgetExceeded, "instance too large for exhaustive enumeration");
}

OracleReport certify_wrof(const std::string& instance_id, const DiscreteMeasure& mu,
                          const DiscreteMeasure& nu, double lambda, double main_value) {
  OracleReport report;
  report.instance_id = instance_id;
  report.candidate_support_size = candidate_support(mu, nu, lambda).rows();
  report.oracle_value = brute_force_wrof(mu, nu, lambda);
  report.main_value = main_value;
  report.gap = std::abs(main_value - report.oracle_value) / (1.0 + std::abs(report.oracle_value));
  return report;
}

}  // namespace wrof
