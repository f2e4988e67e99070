#pragma once

#include <vector>

#include "wrof/measure.hpp"

namespace wrof {

/** \brief Ground cost: quadratic ½r², Euclidean r, or Huber at scale λ. */
struct CostKind {
  enum class Tag { Quadratic, Euclidean, Huber };
  Tag tag = Tag::Quadratic;
  double lambda = 0.0;  // Huber only

  static CostKind quadratic() { return {Tag::Quadratic, 0.0}; }
  static CostKind euclidean() { return {Tag::Euclidean, 0.0}; }
  static CostKind huber(double lambda);

  bool operator==(const CostKind&) const = default;
};

/// Pointwise cost c(x, y). Huber: ½r² for r ≤ λ, λr − λ²/2 beyond.
double cost(const CostKind& kind, const Eigen::RowVectorXd& x, const Eigen::RowVectorXd& y);

struct PlanEntry {
  Eigen::Index source = 0;
  Eigen::Index target = 0;
  double mass = 0.0;
};

/**
 * \brief Exact optimal coupling with dual potentials.
 *
 * Duals are normalized so target_potential[0] == 0. On an optimal plan,
 * source_potential[i] + target_potential[j] == c(x_i, y_j) on support and
 * <= c elsewhere.
 */
struct TransportPlan {
  std::vector<PlanEntry> entries;
  double value = 0.0;
  Eigen::VectorXd source_potential;
  Eigen::VectorXd target_potential;
  CostKind cost;
};

/// Exact optimal transport via transportation simplex (Bland pivoting).
TransportPlan solve_transport(const DiscreteMeasure& source, const DiscreteMeasure& target,
                              const CostKind& kind);

/// φᶜ(x_i) = min_j c(x_i, y_j) − φ_j; ties break to the lowest target index.
Eigen::VectorXd c_transform(const Eigen::VectorXd& phi, const CostKind& kind,
                            const PointMatrix& source_points, const PointMatrix& target_points,
                            std::vector<Eigen::Index>* argmin = nullptr);

double w1(const DiscreteMeasure& a, const DiscreteMeasure& b);
double w2_squared(const DiscreteMeasure& a, const DiscreteMeasure& b);

/// Max of |φ(p)−φ(q)| / |p−q| over distinct point pairs.
double lipschitz_ratio(const Eigen::VectorXd& phi, const PointMatrix& points);

/** \brief Feasibility and optimality residuals of a plan. */
struct PlanCheck {
  double marginal_err = 0.0;        // worst row/column sum deviation
  double slack_violation = 0.0;     // max (φ_i + ψ_j − c_ij)+ over all pairs
  double support_slack_err = 0.0;   // max |φ_i + ψ_j − c_ij| over entries
  double duality_gap_rel = 0.0;     // |primal − dual| / (1 + |primal|)
};

PlanCheck validate_plan(const TransportPlan& plan, const DiscreteMeasure& source,
                        const DiscreteMeasure& target);

}  // namespace wrof
