#pragma once

#include "wrof/transport.hpp"

namespace wrof {

/// s_λ(t) = sign(t)(|t|−λ)₊.
double soft_threshold(double t, double lambda);

/// y if |x−y| ≤ λ, else x + λ(y−x)/|y−x|; the result lies on [x, y].
Eigen::RowVectorXd threshold_displacement(const Eigen::RowVectorXd& x,
                                          const Eigen::RowVectorXd& y, double lambda);

/** \brief Plan mass at scale ≤ λ vs > λ (μᵃ(Ω), μᵇ(Ω)). */
struct SplitMasses {
  double mass_small = 0.0;
  double mass_large = 0.0;
};

/**
 * \brief Minimizer of ½W₂²(μ,ρ) + λW₁(ρ,ν) with certificates.
 *
 * rho is the pushforward of μ under the thresholded displacement along the
 * optimal Huber plan; value equals the Huber transport cost between μ and ν.
 */
struct WrofSolution {
  double lambda = 0.0;
  DiscreteMeasure rho;
  TransportPlan huber_plan;
  double value = 0.0;
  double w2sq_mu_rho = 0.0;
  double w1_rho_nu = 0.0;
  double divergence = 0.0;       // D_λ(ν, ρ_λ) = ½W₂²(ν,μ) − value
  double max_displacement = 0.0; // L∞ move from μ to rho along the plan
};

WrofSolution solve_wrof(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double lambda);

/// (upper, lower): ∫½(|x−y|−λ)²₊ over the Huber plan resp. the W₂ plan.
std::pair<double, double> sandwich_bounds(const WrofSolution& solution,
                                          const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// ρ ∈ B_λ(μ) iff ½W₂²(μ,ρ) equals the Huber(λ) transport cost.
bool in_ball(const DiscreteMeasure& mu, const DiscreteMeasure& rho, double lambda,
             double tol = 1e-8);

SplitMasses split_masses(const TransportPlan& plan, const DiscreteMeasure& source,
                         const DiscreteMeasure& target, double lambda);

/** \brief Mass-preserving correspondence between two point lists. */
struct Pairing {
  PointMatrix source_points;
  PointMatrix target_points;
  std::vector<PlanEntry> entries;
};

/**
 * \brief S₀ = T_λ⁻¹ ∘ S_λ at plan level.
 *
 * s0 sends ν to μ under the Huber plan; s_lambda soft-thresholds each s0
 * displacement (its target marginal is rho); t_inv completes each thresholded
 * move back to the μ atom. Entries are aligned index-for-index across the
 * three pairings.
 */
struct TransportDecomposition {
  Pairing s0;
  Pairing s_lambda;
  Pairing t_inv;
};

TransportDecomposition decompose(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                 double lambda);

/// argmin over the grid of ½|x−x₀|² − φ(x); ties break to the lowest index.
Eigen::RowVectorXd restore_point(const Eigen::RowVectorXd& x0, const Eigen::VectorXd& phi,
                                 const PointMatrix& grid_points,
                                 Eigen::Index* argmin = nullptr);

}  // namespace wrof
