#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lid/geometry.hpp"

namespace lid {

enum class Method { Tle, TleC, TleN, TleCn, Mle, Mom, Ed, Ged, Lcd, Lpca };
enum class GedPairStrategy { MaxOverPairs, HalfToFull };

// Lowercase command-line/config token for a method ("tle-c", "mle", ...).
std::string_view method_token(Method method);
std::optional<Method> method_from_token(std::string_view token);

std::string_view ged_strategy_token(GedPairStrategy strategy);
std::optional<GedPairStrategy> ged_strategy_from_token(std::string_view token);

// Which estimator to run and with what parameters. k is the neighborhood
// size; theta the LPCA eigenvalue threshold relative to the largest
// eigenvalue. Defaults follow the usual benchmark parameterization.
struct EstimatorSpec {
  Method method = Method::Tle;
  int k = 100;
  double theta = 0.025;
  GedPairStrategy ged_pair_strategy = GedPairStrategy::MaxOverPairs;
};

enum class EstimateStatus {
  Ok,
  DegenerateZeroSum,  // value is the +inf sentinel, unusable
  Clamped,            // usable value, but clamped_pairs terms hit the floor
};

struct Estimate {
  double value = std::numeric_limits<double>::infinity();
  EstimateStatus status = EstimateStatus::DegenerateZeroSum;
  std::int64_t clamped_pairs = 0;

  // True when the estimate carries a usable (finite, positive) value.
  bool usable() const { return status != EstimateStatus::DegenerateZeroSum; }
};

// MLE (Hill-type) estimator over central neighbor distances, sorted
// ascending: -(mean of ln(r_i / r_k))^{-1}. Zero distances (duplicate
// points) are floored at 1e-9 r_k and counted; all-equal distances
// degenerate to a zero log-sum.
Estimate estimate_mle(std::span<const double> distances);

// Method-of-moments estimator under the power-law tail model F(t) = (t/w)^m:
// with mu the sample mean and w = r_k, the first moment inverts to
// m = mu / (w - mu).
Estimate estimate_mom(std::span<const double> distances);

// Expansion dimension from the half-to-full neighbor pair, with neighbor
// counts standing in for ball volumes: ln(k / ceil(k/2)) / ln(r_k / r_ceil(k/2)).
Estimate estimate_ed(std::span<const double> distances);

// Generalized expansion dimension. MaxOverPairs takes the worst expansion
// rate over all (i, k) pairs; HalfToFull reproduces estimate_ed.
Estimate estimate_ged(std::span<const double> distances,
                      GedPairStrategy strategy = GedPairStrategy::MaxOverPairs);

// The tight local estimator family over moving-center adjusted distances.
// variant selects which measurement origins enter the sum:
//   Tle   - reflected origins, no central    (origins V and 2q-V)
//   TleC  - reflected + central              (origins V* = V + {q}, reflected)
//   TleN  - neither                          (origins V)
//   TleCn - central only                     (origins V*)
// For every origin x and every target v in V \ {x} the sum collects
// ln(d_{q,r}(x,v)/r), plus ln(d_{q,r}(2q-x,v)/r) for the reflected variants;
// the normalizer is the exact term count (k(k-1) pairs, k^2 with the central
// origin, doubled when reflected). Degenerate adjusted distances enter at
// the 1e-9 r floor and are counted in clamped_pairs.
Estimate estimate_tle(const Neighborhood& neigh, Method variant);

// Local correlation dimension: a Takens-style log-mean estimator over all
// k(k-1)/2 pairwise distances within the neighborhood, normalized by their
// maximum. Deliberately ignores the clipping of the sample to the ball.
Estimate estimate_lcd(const Neighborhood& neigh);

// Local PCA dimension: the number of covariance eigenvalues of the centered
// neighbors that reach theta times the largest eigenvalue. Integer-valued.
Estimate estimate_lpca(const Neighborhood& neigh, double theta);

// Dispatch on spec.method over an existing neighborhood.
Estimate estimate_neighborhood(const Neighborhood& neigh, const EstimatorSpec& spec);

// Per-point estimates for a set of query indices (default: every point).
struct EstimateBatch {
  Method method = Method::Tle;
  int k = 0;
  std::vector<Index> point_ids;
  std::vector<Estimate> estimates;
};

// Builds each query's neighborhood with self-exclusion and applies the
// estimator. Per-point failures (e.g. a degenerate neighborhood) become
// DegenerateZeroSum entries; the batch itself never aborts. Queries are
// evaluated concurrently (threads <= 0 picks the default), with results
// bit-identical to a sequential loop.
EstimateBatch estimate_batch(const PointSet& points, const EstimatorSpec& spec,
                             std::span<const Index> queries = {},
                             int threads = 0);

}  // namespace lid
