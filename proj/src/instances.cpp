#include "wrof/instances.hpp"

#include <random>

namespace wrof {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(seed ^ ((index + 1) * 0x9E3779B97F4A7C15ull));
}

DiscreteMeasure draw_measure(std::mt19937_64& rng, int n, int d) {
  PointMatrix pts(n, d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) pts(i, k) = uniform01(rng);
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w[i] = 1.0 - uniform01(rng);  // in (0, 1]
  return DiscreteMeasure(std::move(pts), std::move(w));
}

}  // namespace

RandomInstance make_instance(std::uint64_t seed, std::uint64_t index,
                             const InstanceParams& params) {
  std::mt19937_64 rng = stream_for(seed, index);
  const int d = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(params.max_dim));
  const int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(params.max_atoms));
  const int m = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(params.max_atoms));
  DiscreteMeasure mu = draw_measure(rng, n, d);
  DiscreteMeasure nu = draw_measure(rng, m, d);
  const double lambda =
      params.lambda_min + (params.lambda_max - params.lambda_min) * uniform01(rng);
  return RandomInstance{std::move(mu), std::move(nu), lambda, d};
}

RandomInstance make_separated_cluster_instance(std::uint64_t seed, std::uint64_t index,
                                               int clusters, double lambda) {
  std::mt19937_64 rng = stream_for(seed, index);
  const int d = 1 + static_cast<int>(rng() % 2);  // 1D or 2D
  const double spacing = 10.0;                    // dwarfs any intra-cluster move
  PointMatrix mu_pts(clusters, d), nu_pts(clusters, d);
  Eigen::VectorXd w(clusters);
  for (int c = 0; c < clusters; ++c) {
    Eigen::RowVectorXd center = Eigen::RowVectorXd::Zero(d);
    center[0] = spacing * static_cast<double>(c);
    for (int k = 0; k < d; ++k) center[k] += 0.1 * uniform01(rng);
    Eigen::RowVectorXd dir(d);
    for (int k = 0; k < d; ++k) dir[k] = uniform01(rng) - 0.5;
    if (dir.norm() == 0.0) dir[0] = 1.0;
    dir /= dir.norm();
    // Offset strictly above λ so every displacement is in the far branch.
    const double r = lambda * (1.05 + 0.9 * uniform01(rng));
    mu_pts.row(c) = center;
    nu_pts.row(c) = center + r * dir;
    w[c] = 0.5 + uniform01(rng);
  }
  DiscreteMeasure mu(mu_pts, w);
  DiscreteMeasure nu(std::move(nu_pts), w);
  return RandomInstance{std::move(mu), std::move(nu), lambda, d};
}

}  // namespace wrof
