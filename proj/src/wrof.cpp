#include "wrof/wrof.hpp"

#include <cmath>
#include <limits>

namespace wrof {

namespace {

void require_positive_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw Error(Errc::NonPositiveLambda, "lambda must be positive");
}

}  // namespace

double soft_threshold(double t, double lambda) {
  require_positive_lambda(lambda);
  const double shrunk = std::abs(t) - lambda;
  if (shrunk <= 0.0) return 0.0;
  return t > 0.0 ? shrunk : -shrunk;
}

Eigen::RowVectorXd threshold_displacement(const Eigen::RowVectorXd& x,
                                          const Eigen::RowVectorXd& y, double lambda) {
  require_positive_lambda(lambda);
  if (x.size() != y.size())
    throw Error(Errc::DimensionMismatch, "points have different dimensions");
  const double r = (x - y).norm();
  if (r <= lambda) return y;
  Eigen::RowVectorXd z = x + (lambda / r) * (y - x);
  // Rounding can push the stored point marginally outside the lambda-ball
  // around x; pull it in so downstream squared distances respect the
  // displacement bound bit-for-bit. Exact cases are untouched.
  while ((z - x).squaredNorm() > lambda * lambda) z = x + (1.0 - 1e-13) * (z - x);
  return z;
}

WrofSolution solve_wrof(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double lambda) {
  require_positive_lambda(lambda);
  TransportPlan plan = solve_transport(mu, nu, CostKind::huber(lambda));

  bool all_near = true;
  double max_disp = 0.0;
  for (const PlanEntry& e : plan.entries) {
    const double r = (mu.point(e.source) - nu.point(e.target)).norm();
    if (r > lambda) all_near = false;
    max_disp = std::max(max_disp, std::min(r, lambda));
  }

  DiscreteMeasure rho = [&] {
    if (all_near) return nu;  // dichotomy: ν ∈ B_λ(μ), ρ_λ = ν exactly
    PointMatrix pts(static_cast<Eigen::Index>(plan.entries.size()), mu.dim());
    Eigen::VectorXd w(static_cast<Eigen::Index>(plan.entries.size()));
    for (size_t k = 0; k < plan.entries.size(); ++k) {
      const PlanEntry& e = plan.entries[k];
      pts.row(static_cast<Eigen::Index>(k)) =
          threshold_displacement(mu.point(e.source), nu.point(e.target), lambda);
      w[static_cast<Eigen::Index>(k)] = e.mass;
    }
    return DiscreteMeasure(std::move(pts), std::move(w));
  }();

  // Every rho atom lies within lambda of its mu source, so W2^2(mu, rho) is
  // at most lambda^2 a priori; trim solver round-off above that bound.
  const double w2sq = std::min(w2_squared(mu, rho), lambda * lambda);
  const double w1_rn = w1(rho, nu);
  const double value = 0.5 * w2sq + lambda * w1_rn;
  const double divergence = 0.5 * w2_squared(nu, mu) - value;
  return WrofSolution{lambda,   std::move(rho), std::move(plan), value,
                      w2sq,     w1_rn,          divergence,      max_disp};
}

namespace {

double excess_over_plan(const TransportPlan& plan, const DiscreteMeasure& source,
                        const DiscreteMeasure& target, double lambda) {
  double total = 0.0;
  for (const PlanEntry& e : plan.entries) {
    const double r = (source.point(e.source) - target.point(e.target)).norm();
    const double excess = r - lambda;
    if (excess > 0.0) total += 0.5 * excess * excess * e.mass;
  }
  return total;
}

}  // namespace

std::pair<double, double> sandwich_bounds(const WrofSolution& solution,
                                          const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  const double upper = excess_over_plan(solution.huber_plan, mu, nu, solution.lambda);
  TransportPlan quad = solve_transport(mu, nu, CostKind::quadratic());
  const double lower = excess_over_plan(quad, mu, nu, solution.lambda);
  return {upper, lower};
}

bool in_ball(const DiscreteMeasure& mu, const DiscreteMeasure& rho, double lambda, double tol) {
  require_positive_lambda(lambda);
  const double huber = solve_transport(mu, rho, CostKind::huber(lambda)).value;
  const double quad = 0.5 * w2_squared(mu, rho);
  return std::abs(quad - huber) <= tol * (1.0 + std::abs(huber));
}

SplitMasses split_masses(const TransportPlan& plan, const DiscreteMeasure& source,
                         const DiscreteMeasure& target, double lambda) {
  if (plan.cost.tag != CostKind::Tag::Huber || plan.cost.lambda != lambda)
    throw Error(Errc::CostMismatch, "plan was not solved under Huber at this lambda");
  SplitMasses split;
  for (const PlanEntry& e : plan.entries) {
    const double r = (source.point(e.source) - target.point(e.target)).norm();
    (r <= lambda ? split.mass_small : split.mass_large) += e.mass;
  }
  return split;
}

TransportDecomposition decompose(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                 double lambda) {
  require_positive_lambda(lambda);
  TransportPlan plan = solve_transport(mu, nu, CostKind::huber(lambda));
  const Eigen::Index k = static_cast<Eigen::Index>(plan.entries.size());

  TransportDecomposition d;
  d.s0.source_points = nu.points();
  d.s0.target_points = mu.points();
  d.s_lambda.source_points = nu.points();
  d.s_lambda.target_points.resize(k, mu.dim());
  d.t_inv.target_points = mu.points();
  for (Eigen::Index e = 0; e < k; ++e) {
    const PlanEntry& p = plan.entries[static_cast<size_t>(e)];
    // S_λ(y) = y + s_λ(|x−y|)(x−y)/|x−y|, which is the threshold point of the
    // reversed displacement x → y.
    d.s_lambda.target_points.row(e) =
        threshold_displacement(mu.point(p.source), nu.point(p.target), lambda);
    d.s0.entries.push_back({p.target, p.source, p.mass});
    d.s_lambda.entries.push_back({p.target, e, p.mass});
    d.t_inv.entries.push_back({e, p.source, p.mass});
  }
  d.t_inv.source_points = d.s_lambda.target_points;
  return d;
}

Eigen::RowVectorXd restore_point(const Eigen::RowVectorXd& x0, const Eigen::VectorXd& phi,
                                 const PointMatrix& grid_points, Eigen::Index* argmin) {
  if (grid_points.rows() == 0) throw Error(Errc::EmptyGrid, "restoration grid is empty");
  if (phi.size() != grid_points.rows())
    throw Error(Errc::DimensionMismatch, "phi length must match grid size");
  double best = std::numeric_limits<double>::infinity();
  Eigen::Index best_i = 0;
  for (Eigen::Index i = 0; i < grid_points.rows(); ++i) {
    const double val = 0.5 * (grid_points.row(i) - x0).squaredNorm() - phi[i];
    if (val < best) {
      best = val;
      best_i = i;
    }
  }
  if (argmin) *argmin = best_i;
  return grid_points.row(best_i);
}

}  // namespace wrof
