#include "wrof/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace wrof {

BoxDomain::BoxDomain(Eigen::VectorXd lo, Eigen::VectorXd hi)
    : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.size() != upper.size())
    throw Error(Errc::DimensionMismatch, "box bounds have different dimensions");
  if (lower.size() == 0) throw Error(Errc::DimensionMismatch, "empty box");
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]))
      throw Error(Errc::NonFiniteCoordinate, "box bound not finite");
    if (lower[i] > upper[i])
      throw Error(Errc::DimensionMismatch, "box lower bound exceeds upper bound");
  }
}

double diameter(const BoxDomain& domain) { return (domain.upper - domain.lower).norm(); }

namespace {

// Lexicographic order on coordinate rows.
bool lex_less(const PointMatrix& pts, Eigen::Index a, Eigen::Index b) {
  for (Eigen::Index k = 0; k < pts.cols(); ++k) {
    if (pts(a, k) < pts(b, k)) return true;
    if (pts(a, k) > pts(b, k)) return false;
  }
  return false;
}

bool rows_equal(const PointMatrix& pts, Eigen::Index a, Eigen::Index b) {
  for (Eigen::Index k = 0; k < pts.cols(); ++k)
    if (pts(a, k) != pts(b, k)) return false;
  return true;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(PointMatrix points, Eigen::VectorXd weights) {
  if (points.rows() != weights.size())
    throw Error(Errc::DimensionMismatch, "points and weights have different lengths");
  if (points.cols() < 1) throw Error(Errc::DimensionMismatch, "points must have dim >= 1");
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index k = 0; k < points.cols(); ++k)
      if (!std::isfinite(points(i, k)))
        throw Error(Errc::NonFiniteCoordinate, "coordinate not finite");
    if (!std::isfinite(weights[i]) || weights[i] < 0.0)
      throw Error(Errc::NegativeWeight, "weights must be nonnegative and finite");
  }

  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    if (weights[i] > 0.0) keep.push_back(i);
  if (keep.empty()) throw Error(Errc::EmptyMeasure, "no atom with positive weight");

  std::sort(keep.begin(), keep.end(),
            [&](Eigen::Index a, Eigen::Index b) { return lex_less(points, a, b); });

  // Merge bitwise-equal coordinates (exact equality by design).
  std::vector<Eigen::Index> reps;
  std::vector<double> mass;
  for (Eigen::Index i : keep) {
    if (!reps.empty() && rows_equal(points, reps.back(), i)) {
      mass.back() += weights[i];
    } else {
      reps.push_back(i);
      mass.push_back(weights[i]);
    }
  }

  points_.resize(static_cast<Eigen::Index>(reps.size()), points.cols());
  weights_.resize(static_cast<Eigen::Index>(reps.size()));
  for (size_t r = 0; r < reps.size(); ++r) {
    points_.row(static_cast<Eigen::Index>(r)) = points.row(reps[r]);
    weights_[static_cast<Eigen::Index>(r)] = mass[r];
  }
  weights_ /= weights_.sum();
}

bool DiscreteMeasure::operator==(const DiscreteMeasure& other) const {
  if (dim() != other.dim() || size() != other.size()) return false;
  for (Eigen::Index i = 0; i < size(); ++i) {
    if (weights_[i] != other.weights_[i]) return false;
    for (Eigen::Index k = 0; k < points_.cols(); ++k)
      if (points_(i, k) != other.points_(i, k)) return false;
  }
  return true;
}

DiscreteMeasure DiscreteMeasure::dirac(const Eigen::RowVectorXd& x) {
  PointMatrix pts(1, x.size());
  pts.row(0) = x;
  Eigen::VectorXd w(1);
  w[0] = 1.0;
  return DiscreteMeasure(std::move(pts), std::move(w));
}

DiscreteMeasure new_measure(const PointMatrix& points, const Eigen::VectorXd& weights) {
  return DiscreteMeasure(points, weights);
}

DiscreteMeasure from_grayscale_grid(const Eigen::MatrixXd& values, const BoxDomain& domain) {
  if (domain.dim() != 2)
    throw Error(Errc::DimensionMismatch, "image ingestion needs a 2D domain");
  const Eigen::Index h = values.rows(), w = values.cols();
  if (h == 0 || w == 0) throw Error(Errc::AllZeroImage, "empty grid");
  std::vector<Eigen::RowVector2d> pts;
  std::vector<double> mass;
  const double dx = (domain.upper[0] - domain.lower[0]) / static_cast<double>(w);
  const double dy = (domain.upper[1] - domain.lower[1]) / static_cast<double>(h);
  for (Eigen::Index r = 0; r < h; ++r) {
    for (Eigen::Index c = 0; c < w; ++c) {
      const double v = values(r, c);
      if (!std::isfinite(v) || v < 0.0)
        throw Error(Errc::NegativeWeight, "intensities must be nonnegative and finite");
      if (v > 0.0) {
        const double x = domain.lower[0] + (static_cast<double>(c) + 0.5) * dx;
        const double y = domain.upper[1] - (static_cast<double>(r) + 0.5) * dy;
        pts.emplace_back(x, y);
        mass.push_back(v);
      }
    }
  }
  if (pts.empty()) throw Error(Errc::AllZeroImage, "no positive intensity");
  PointMatrix p(static_cast<Eigen::Index>(pts.size()), 2);
  Eigen::VectorXd wv(static_cast<Eigen::Index>(pts.size()));
  for (size_t i = 0; i < pts.size(); ++i) {
    p.row(static_cast<Eigen::Index>(i)) = pts[i];
    wv[static_cast<Eigen::Index>(i)] = mass[i];
  }
  return DiscreteMeasure(std::move(p), std::move(wv));
}

BoxDomain bounding_box(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.dim() != b.dim())
    throw Error(Errc::DimensionMismatch, "measures have different dimensions");
  Eigen::VectorXd lo = a.points().colwise().minCoeff().transpose();
  Eigen::VectorXd hi = a.points().colwise().maxCoeff().transpose();
  lo = lo.cwiseMin(b.points().colwise().minCoeff().transpose());
  hi = hi.cwiseMax(b.points().colwise().maxCoeff().transpose());
  return BoxDomain(lo, hi);
}

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::EmptyMeasure: return "EmptyMeasure";
    case Errc::NonFiniteCoordinate: return "NonFiniteCoordinate";
    case Errc::NegativeWeight: return "NegativeWeight";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::AllZeroImage: return "AllZeroImage";
    case Errc::NonPositiveLambda: return "NonPositiveLambda";
    case Errc::FewerThanTwoPoints: return "FewerThanTwoPoints";
    case Errc::SolverFailure: return "SolverFailure";
    case Errc::CostMismatch: return "CostMismatch";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::EmptyGrid: return "EmptyGrid";
    case Errc::AtomBudgetExceeded: return "AtomBudgetExceeded";
    case Errc::EmptySuite: return "EmptySuite";
    case Errc::ParseError: return "ParseError";
  }
  return "UnknownError";
}

}  // namespace wrof
