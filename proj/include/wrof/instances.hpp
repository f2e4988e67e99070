#pragma once

#include <cstdint>

#include "wrof/measure.hpp"

namespace wrof {

/** \brief Seeded random test instance: two measures and a scale. */
struct RandomInstance {
  DiscreteMeasure mu;
  DiscreteMeasure nu;
  double lambda;
  int dim;
};

struct InstanceParams {
  int max_atoms = 30;
  int max_dim = 3;
  double lambda_min = 0.05;
  double lambda_max = 1.0;
};

/**
 * \brief Deterministic instance generator.
 *
 * Stream: mt19937_64 seeded with seed XOR (index+1)·0x9E3779B97F4A7C15;
 * uniform doubles are (engine() >> 11) · 2⁻⁵³, drawn in the order
 * d, n, m, μ points (row-major), μ weights, ν points, ν weights, λ.
 * Atoms are uniform in [0,1]^d; weights uniform in (0,1] then normalized.
 */
RandomInstance make_instance(std::uint64_t seed, std::uint64_t index,
                             const InstanceParams& params = {});

/// Pairs of well-separated clusters, each holding one μ atom and one ν atom
/// at distance in (λ, 2λ]; every optimal plan pairs within clusters.
RandomInstance make_separated_cluster_instance(std::uint64_t seed, std::uint64_t index,
                                               int clusters, double lambda);

}  // namespace wrof
