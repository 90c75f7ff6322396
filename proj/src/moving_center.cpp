#include "lid/moving_center.hpp"

#include <cmath>
#include <stdexcept>

namespace lid {

namespace {

bool same_point(RowRef a, RowRef b) { return (a.array() == b.array()).all(); }

AdjustedDistance clamp_degenerate(double r) {
  return {kClampFraction * r, AdjustedCase::ClampedDegenerate};
}

}  // namespace

AdjustedDistance adjusted_distance(RowRef q, RowRef x, RowRef v, double r) {
  if (!(r > 0.0)) {
    throw std::invalid_argument("adjusted_distance: radius must be positive");
  }
  if (x.size() != q.size() || v.size() != q.size()) {
    throw std::invalid_argument("adjusted_distance: dimension mismatch");
  }

  // Case ladder; order fixes precedence among the special cases.
  if (same_point(v, x)) return {0.0, AdjustedCase::CoincidentSample};
  if (same_point(x, q)) return {(q - v).norm(), AdjustedCase::StationaryCenter};

  const double qx = (q - x).norm();
  const double qv = (q - v).norm();
  const double limit = r * (1.0 + kBoundaryRelTol);
  if (qx > limit || qv > limit) {
    throw std::invalid_argument(
        "adjusted_distance: point lies outside the neighborhood ball");
  }

  if (same_point(v, q)) return {r * qx / (r + qx), AdjustedCase::TargetIsQuery};

  const double vx2 = (v - x).squaredNorm();
  const double dot = (q - x).dot(v - x);

  double t;
  AdjustedCase kind;
  if (std::abs(qx - r) <= kBoundaryRelTol * r) {
    // Center on the boundary sphere. With |q - v| <= r the dot product is
    // bounded below by |v - x|^2 / 2; anything at or under half that bound
    // means v sits (numerically) outside the ball tangent to x.
    if (dot <= 0.25 * vx2) return clamp_degenerate(r);
    t = r * vx2 / (2.0 * dot);
    kind = AdjustedCase::BoundaryCenter;
  } else {
    const double z = r * r - qx * qx;  // > 0 on this branch
    const double b = r * dot / z;      // u . (q - x)
    const double c = r * r * vx2 / z;  // r u . (v - x), always > 0
    const double root = std::sqrt(b * b + c);
    // Same quadratic root either way; the division form avoids cancellation
    // when b is large and positive.
    t = b >= 0.0 ? c / (root + b) : root - b;
    kind = AdjustedCase::InteriorCenter;
  }

  if (!std::isfinite(t) || !(t > 0.0)) return clamp_degenerate(r);
  return {t, kind};
}

Eigen::RowVectorXd reflect(RowRef q, RowRef x) { return 2.0 * q - x; }

}  // namespace lid
