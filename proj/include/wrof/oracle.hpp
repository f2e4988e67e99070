#pragma once

#include <cstdint>
#include <string>

#include "wrof/transport.hpp"

namespace wrof {

/** \brief Result of certifying one instance against the brute-force oracle. */
struct OracleReport {
  std::string instance_id;
  double oracle_value = 0.0;
  double main_value = 0.0;
  double gap = 0.0;  // relative difference
  Eigen::Index candidate_support_size = 0;

  bool certified(double tol = 1e-7) const { return gap <= tol; }
};

/**
 * \brief Direct minimization of ½W₂²(μ,ρ) + λW₁(ρ,ν) over a candidate middle
 * support, as one joint LP.
 *
 * The candidate support contains every pairwise threshold point plus the
 * atoms of μ and ν. Since c_{2,λ}(x,y) = inf_z ½|x−z|² + λ|z−y| attains its
 * infimum at the threshold point of (x, y), this support contains an optimal
 * one. The LP is solved by a generic dense simplex independent of the
 * transport module's network solver.
 */
double brute_force_wrof(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double lambda);

/// Same LP with extra random points on each [x, y] segment added to the
/// candidate support; used to probe that the support is rich enough.
double brute_force_wrof_augmented(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                  double lambda, int extra_per_pair, std::uint64_t seed);

/// Exhaustive optimum for small instances: permutations in the uniform
/// equal-count case, full basis enumeration otherwise (n·m ≤ 12).
double enumerate_transport(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           const CostKind& kind);

OracleReport certify_wrof(const std::string& instance_id, const DiscreteMeasure& mu,
                          const DiscreteMeasure& nu, double lambda, double main_value);

}  // namespace wrof
