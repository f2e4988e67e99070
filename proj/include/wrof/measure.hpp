#pragma once

#include <Eigen/Dense>

#include "wrof/error.hpp"

namespace wrof {

// Atoms are stored as rows so a single point is a contiguous slice.
using PointMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/** \brief Axis-aligned compact box; used for validation and diam(Ω). */
struct BoxDomain {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  BoxDomain(Eigen::VectorXd lo, Eigen::VectorXd hi);
  int dim() const { return static_cast<int>(lower.size()); }
};

/// Euclidean length of the box diagonal.
double diameter(const BoxDomain& domain);

/**
 * \brief Discrete probability measure: weighted finite point cloud in R^d.
 *
 * Canonical form after construction: zero-weight atoms dropped, atoms with
 * bitwise-equal coordinates merged, atoms sorted lexicographically by
 * coordinates, weights normalized to sum 1.
 */
class DiscreteMeasure {
 public:
  DiscreteMeasure(PointMatrix points, Eigen::VectorXd weights);

  int dim() const { return static_cast<int>(points_.cols()); }
  Eigen::Index size() const { return points_.rows(); }
  const PointMatrix& points() const { return points_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  Eigen::RowVectorXd point(Eigen::Index i) const { return points_.row(i); }

  /// Exact (bitwise) equality of canonical forms.
  bool operator==(const DiscreteMeasure& other) const;
  bool operator!=(const DiscreteMeasure& other) const { return !(*this == other); }

  static DiscreteMeasure dirac(const Eigen::RowVectorXd& x);

 private:
  PointMatrix points_;
  Eigen::VectorXd weights_;
};

DiscreteMeasure new_measure(const PointMatrix& points, const Eigen::VectorXd& weights);

/**
 * \brief One atom per positive pixel, at the pixel center mapped into the box.
 *
 * Row 0 of the grid is the top row of the image; weights proportional to
 * intensity.
 */
DiscreteMeasure from_grayscale_grid(const Eigen::MatrixXd& values, const BoxDomain& domain);

/// Smallest axis-aligned box containing the atoms of both measures.
BoxDomain bounding_box(const DiscreteMeasure& a, const DiscreteMeasure& b);

}  // namespace wrof
