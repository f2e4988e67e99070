#include "wrof/transport.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <vector>

namespace wrof {

CostKind CostKind::huber(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw Error(Errc::NonPositiveLambda, "Huber cost requires lambda > 0");
  return {Tag::Huber, lambda};
}

double cost(const CostKind& kind, const Eigen::RowVectorXd& x, const Eigen::RowVectorXd& y) {
  if (x.size() != y.size())
    throw Error(Errc::DimensionMismatch, "cost arguments have different dimensions");
  const double r = (x - y).norm();
  switch (kind.tag) {
    case CostKind::Tag::Quadratic:
      return 0.5 * r * r;
    case CostKind::Tag::Euclidean:
      return r;
    case CostKind::Tag::Huber: {
      const double l = kind.lambda;
      return r <= l ? 0.5 * r * r : l * r - 0.5 * l * l;
    }
  }
  return 0.0;
}

namespace {

double cost_rr(const CostKind& kind, double r) {
  switch (kind.tag) {
    case CostKind::Tag::Quadratic:
      return 0.5 * r * r;
    case CostKind::Tag::Euclidean:
      return r;
    case CostKind::Tag::Huber:
      return r <= kind.lambda ? 0.5 * r * r : kind.lambda * r - 0.5 * kind.lambda * kind.lambda;
  }
  return 0.0;
}

/**
 * Transportation simplex on the dense bipartite graph.
 *
 * Basis is a spanning tree of n+m−1 cells. Entering variable: lowest (i,j)
 * with negative reduced cost (Bland). Leaving: lexicographically smallest
 * minimizer in the pivot cycle.
 */
class TransportSimplex {
 public:
  TransportSimplex(const Eigen::VectorXd& a, const Eigen::VectorXd& b, Eigen::MatrixXd cost)
      : n_(a.size()), m_(b.size()), a_(a), b_(b), c_(std::move(cost)) {
    basic_.assign(static_cast<size_t>(n_ * m_), false);
    flow_.assign(static_cast<size_t>(n_ * m_), 0.0);
  }

  void solve() {
    northwest_init();
    const double tol = 1e-12 * (1.0 + c_.cwiseAbs().maxCoeff());
    const long max_iter = 200000 + 2000 * (n_ + m_);
    u_.resize(n_);
    v_.resize(m_);
    for (long it = 0; it < max_iter; ++it) {
      compute_duals();
      Eigen::Index ei = -1, ej = -1;
      for (Eigen::Index i = 0; i < n_ && ei < 0; ++i)
        for (Eigen::Index j = 0; j < m_; ++j)
          if (!basic_[idx(i, j)] && c_(i, j) - u_[i] - v_[j] < -tol) {
            ei = i;
            ej = j;
            break;
          }
      if (ei < 0) return;  // optimal
      pivot(ei, ej);
    }
    throw Error(Errc::SolverFailure, "transportation simplex iteration cap reached");
  }

  const std::vector<double>& flow() const { return flow_; }
  const Eigen::VectorXd& u() const { return u_; }
  const Eigen::VectorXd& v() const { return v_; }

 private:
  size_t idx(Eigen::Index i, Eigen::Index j) const { return static_cast<size_t>(i * m_ + j); }

  void northwest_init() {
    Eigen::VectorXd ra = a_, rb = b_;
    Eigen::Index i = 0, j = 0;
    while (true) {
      const double t = std::min(ra[i], rb[j]);
      basic_[idx(i, j)] = true;
      flow_[idx(i, j)] = t;
      ra[i] -= t;
      rb[j] -= t;
      if (i == n_ - 1 && j == m_ - 1) break;
      if (i < n_ - 1 && (ra[i] <= rb[j] || j == m_ - 1))
        ++i;
      else
        ++j;
    }
  }

  // Tree node ids: sources 0..n−1, targets n..n+m−1.
  void build_adjacency(std::vector<std::vector<Eigen::Index>>& adj) const {
    adj.assign(static_cast<size_t>(n_ + m_), {});
    for (Eigen::Index i = 0; i < n_; ++i)
      for (Eigen::Index j = 0; j < m_; ++j)
        if (basic_[idx(i, j)]) {
          adj[static_cast<size_t>(i)].push_back(n_ + j);
          adj[static_cast<size_t>(n_ + j)].push_back(i);
        }
  }

  void compute_duals() {
    std::vector<std::vector<Eigen::Index>> adj;
    build_adjacency(adj);
    std::vector<char> seen(static_cast<size_t>(n_ + m_), 0);
    std::deque<Eigen::Index> queue{0};
    u_[0] = 0.0;
    seen[0] = 1;
    while (!queue.empty()) {
      const Eigen::Index node = queue.front();
      queue.pop_front();
      for (Eigen::Index nb : adj[static_cast<size_t>(node)]) {
        if (seen[static_cast<size_t>(nb)]) continue;
        seen[static_cast<size_t>(nb)] = 1;
        if (node < n_)
          v_[nb - n_] = c_(node, nb - n_) - u_[node];
        else
          u_[nb] = c_(nb, node - n_) - v_[node - n_];
        queue.push_back(nb);
      }
    }
    for (char s : seen)
      if (!s) throw Error(Errc::SolverFailure, "basis tree disconnected");
  }

  void pivot(Eigen::Index ei, Eigen::Index ej) {
    // Tree path from target node ej back to source node ei closes the cycle.
    std::vector<std::vector<Eigen::Index>> adj;
    build_adjacency(adj);
    std::vector<Eigen::Index> parent(static_cast<size_t>(n_ + m_), -2);
    std::deque<Eigen::Index> queue{ei};
    parent[static_cast<size_t>(ei)] = -1;
    while (!queue.empty()) {
      const Eigen::Index node = queue.front();
      queue.pop_front();
      if (node == n_ + ej) break;
      for (Eigen::Index nb : adj[static_cast<size_t>(node)])
        if (parent[static_cast<size_t>(nb)] == -2) {
          parent[static_cast<size_t>(nb)] = node;
          queue.push_back(nb);
        }
    }
    if (parent[static_cast<size_t>(n_ + ej)] == -2)
      throw Error(Errc::SolverFailure, "pivot cycle not found");

    // Cells along the cycle, alternating signs; entering cell takes +θ.
    std::vector<std::pair<Eigen::Index, Eigen::Index>> cycle;  // (i, j)
    std::vector<int> sign;
    cycle.emplace_back(ei, ej);
    sign.push_back(+1);
    Eigen::Index node = n_ + ej;
    int s = -1;
    while (parent[static_cast<size_t>(node)] != -1) {
      const Eigen::Index par = parent[static_cast<size_t>(node)];
      if (node < n_)
        cycle.emplace_back(node, par - n_);
      else
        cycle.emplace_back(par, node - n_);
      sign.push_back(s);
      s = -s;
      node = par;
    }

    double theta = std::numeric_limits<double>::infinity();
    size_t leave = 0;  // 0 means unset; entering cell is index 0 and has sign +1
    for (size_t k = 1; k < cycle.size(); ++k) {
      if (sign[k] > 0) continue;
      const double f = flow_[idx(cycle[k].first, cycle[k].second)];
      if (leave == 0 || f < theta || (f == theta && cycle[k] < cycle[leave])) {
        theta = f;
        leave = k;
      }
    }
    if (leave == 0) throw Error(Errc::SolverFailure, "unbounded pivot cycle");

    for (size_t k = 0; k < cycle.size(); ++k) {
      const size_t cell = idx(cycle[k].first, cycle[k].second);
      flow_[cell] += sign[k] * theta;
      if (flow_[cell] < 0.0) flow_[cell] = 0.0;
    }
    basic_[idx(cycle[leave].first, cycle[leave].second)] = false;
    flow_[idx(cycle[leave].first, cycle[leave].second)] = 0.0;
    basic_[idx(ei, ej)] = true;
  }

  Eigen::Index n_, m_;
  Eigen::VectorXd a_, b_;
  Eigen::MatrixXd c_;
  std::vector<char> basic_;
  std::vector<double> flow_;
  Eigen::VectorXd u_, v_;
};

}  // namespace

TransportPlan solve_transport(const DiscreteMeasure& source, const DiscreteMeasure& target,
                              const CostKind& kind) {
  if (source.dim() != target.dim())
    throw Error(Errc::DimensionMismatch, "source and target have different dimensions");
  const Eigen::Index n = source.size(), m = target.size();

  Eigen::MatrixXd c(n, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      c(i, j) = cost_rr(kind, (source.points().row(i) - target.points().row(j)).norm());

  TransportSimplex simplex(source.weights(), target.weights(), c);
  simplex.solve();

  TransportPlan plan;
  plan.cost = kind;
  double value = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      const double f = simplex.flow()[static_cast<size_t>(i * m + j)];
      if (f > 0.0) {
        plan.entries.push_back({i, j, f});
        value += f * c(i, j);
      }
    }
  plan.value = value;
  // One dual degree of freedom: pin target_potential[0] = 0.
  const double shift = simplex.v()[0];
  plan.source_potential = simplex.u().array() + shift;
  plan.target_potential = simplex.v().array() - shift;
  return plan;
}

Eigen::VectorXd c_transform(const Eigen::VectorXd& phi, const CostKind& kind,
                            const PointMatrix& source_points, const PointMatrix& target_points,
                            std::vector<Eigen::Index>* argmin) {
  if (phi.size() != target_points.rows())
    throw Error(Errc::DimensionMismatch, "phi length must match target point count");
  if (source_points.cols() != target_points.cols())
    throw Error(Errc::DimensionMismatch, "point sets have different dimensions");
  Eigen::VectorXd out(source_points.rows());
  if (argmin) argmin->assign(static_cast<size_t>(source_points.rows()), 0);
  for (Eigen::Index i = 0; i < source_points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index best_j = 0;
    for (Eigen::Index j = 0; j < target_points.rows(); ++j) {
      const double val =
          cost_rr(kind, (source_points.row(i) - target_points.row(j)).norm()) - phi[j];
      if (val < best) {
        best = val;
        best_j = j;
      }
    }
    out[i] = best;
    if (argmin) (*argmin)[static_cast<size_t>(i)] = best_j;
  }
  return out;
}

double w1(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  return solve_transport(a, b, CostKind::euclidean()).value;
}

double w2_squared(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  return 2.0 * solve_transport(a, b, CostKind::quadratic()).value;
}

double lipschitz_ratio(const Eigen::VectorXd& phi, const PointMatrix& points) {
  if (points.rows() < 2)
    throw Error(Errc::FewerThanTwoPoints, "lipschitz_ratio needs at least two points");
  if (phi.size() != points.rows())
    throw Error(Errc::DimensionMismatch, "phi length must match point count");
  double best = 0.0;
  for (Eigen::Index p = 0; p < points.rows(); ++p)
    for (Eigen::Index q = p + 1; q < points.rows(); ++q) {
      const double dist = (points.row(p) - points.row(q)).norm();
      if (dist > 0.0) best = std::max(best, std::abs(phi[p] - phi[q]) / dist);
    }
  return best;
}

PlanCheck validate_plan(const TransportPlan& plan, const DiscreteMeasure& source,
                        const DiscreteMeasure& target) {
  PlanCheck check;
  Eigen::VectorXd row = Eigen::VectorXd::Zero(source.size());
  Eigen::VectorXd col = Eigen::VectorXd::Zero(target.size());
  for (const PlanEntry& e : plan.entries) {
    row[e.source] += e.mass;
    col[e.target] += e.mass;
    const double c = cost(plan.cost, source.point(e.source), target.point(e.target));
    check.support_slack_err =
        std::max(check.support_slack_err,
                 std::abs(plan.source_potential[e.source] + plan.target_potential[e.target] - c));
  }
  check.marginal_err = std::max((row - source.weights()).cwiseAbs().maxCoeff(),
                                (col - target.weights()).cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < source.size(); ++i)
    for (Eigen::Index j = 0; j < target.size(); ++j) {
      const double slack = plan.source_potential[i] + plan.target_potential[j] -
                           cost(plan.cost, source.point(i), target.point(j));
      check.slack_violation = std::max(check.slack_violation, slack);
    }
  const double dual = plan.source_potential.dot(source.weights()) +
                      plan.target_potential.dot(target.weights());
  check.duality_gap_rel = std::abs(plan.value - dual) / (1.0 + std::abs(plan.value));
  return check;
}

}  // namespace wrof
