#pragma once

#include <Eigen/Dense>

#include "lid/geometry.hpp"

namespace lid {

// Which branch of the moving-center distance produced the value.
enum class AdjustedCase {
  CoincidentSample,   // v = x
  StationaryCenter,   // x = q
  TargetIsQuery,      // v = q
  BoundaryCenter,     // |q - x| = r (within tolerance)
  InteriorCenter,     // |q - x| < r
  ClampedDegenerate,  // tangent degeneracy or non-finite/negative branch value
};

struct AdjustedDistance {
  double t = 0.0;  // finite, >= 0, same units as the coordinates
  AdjustedCase kind = AdjustedCase::CoincidentSample;

  bool clamped() const { return kind == AdjustedCase::ClampedDegenerate; }
};

// Relative tolerance classifying |q - x| as on the boundary sphere.
inline constexpr double kBoundaryRelTol = 1e-9;
// Degenerate distance terms are floored at this fraction of r so that
// estimator pair counts stay exact.
inline constexpr double kClampFraction = 1e-9;

// The moving-center adjusted distance: the radius t at which a ball expanding
// from x - its center sliding linearly to q as the radius grows to r - first
// reaches v. Solves t = |phi(t) - v| with phi(t) = (t/r) q + (1 - t/r) x.
//
// Requires |q - x| <= r (1 + 1e-9) and |q - v| <= r (1 + 1e-9). Degenerate
// configurations (tangency on the boundary branch, non-finite or non-positive
// branch values) yield t = 1e-9 r with kind = ClampedDegenerate rather than
// an error, so that estimation can proceed over the remaining pairs.
AdjustedDistance adjusted_distance(RowRef q, RowRef x, RowRef v, double r);

// Point reflection of x through q: 2q - x.
Eigen::RowVectorXd reflect(RowRef q, RowRef x);

}  // namespace lid
