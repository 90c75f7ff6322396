#include "lid/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lid/moving_center.hpp"
#include "lid/parallel.hpp"

namespace lid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Estimate degenerate(std::int64_t clamped = 0) {
  return {kInf, EstimateStatus::DegenerateZeroSum, clamped};
}

Estimate from_value(double value, std::int64_t clamped) {
  if (!std::isfinite(value) || !(value > 0.0)) return degenerate(clamped);
  return {value, clamped > 0 ? EstimateStatus::Clamped : EstimateStatus::Ok,
          clamped};
}

void check_distances(std::span<const double> d, int min_k) {
  if (std::ssize(d) < min_k) {
    throw std::invalid_argument("estimator: needs at least " +
                                std::to_string(min_k) + " distances");
  }
  if (!std::is_sorted(d.begin(), d.end())) {
    throw std::invalid_argument("estimator: distances must be sorted ascending");
  }
  if (d.front() < 0.0 || !std::isfinite(d.back())) {
    throw std::invalid_argument("estimator: distances must be finite and non-negative");
  }
}

}  // namespace

std::string_view method_token(Method method) {
  switch (method) {
    case Method::Tle: return "tle";
    case Method::TleC: return "tle-c";
    case Method::TleN: return "tle-n";
    case Method::TleCn: return "tle-cn";
    case Method::Mle: return "mle";
    case Method::Mom: return "mom";
    case Method::Ed: return "ed";
    case Method::Ged: return "ged";
    case Method::Lcd: return "lcd";
    case Method::Lpca: return "lpca";
  }
  return "?";
}

std::optional<Method> method_from_token(std::string_view token) {
  for (Method m : {Method::Tle, Method::TleC, Method::TleN, Method::TleCn,
                   Method::Mle, Method::Mom, Method::Ed, Method::Ged,
                   Method::Lcd, Method::Lpca}) {
    if (method_token(m) == token) return m;
  }
  return std::nullopt;
}

std::string_view ged_strategy_token(GedPairStrategy strategy) {
  return strategy == GedPairStrategy::MaxOverPairs ? "max-over-pairs"
                                                   : "half-to-full";
}

std::optional<GedPairStrategy> ged_strategy_from_token(std::string_view token) {
  if (token == "max-over-pairs") return GedPairStrategy::MaxOverPairs;
  if (token == "half-to-full") return GedPairStrategy::HalfToFull;
  return std::nullopt;
}

Estimate estimate_mle(std::span<const double> distances) {
  check_distances(distances, 2);
  const double w = distances.back();
  if (!(w > 0.0)) {
    throw std::invalid_argument("estimate_mle: largest distance must be positive");
  }
  const double floor = kClampFraction * w;
  double sum = 0.0;
  std::int64_t clamped = 0;
  for (double ri : distances) {
    double t = ri;
    if (!(t > 0.0)) {  // duplicate of the query
      t = floor;
      ++clamped;
    }
    sum += std::log(t / w);
  }
  const double mean = sum / static_cast<double>(distances.size());
  if (!(mean < 0.0)) return degenerate(clamped);
  return from_value(-1.0 / mean, clamped);
}

Estimate estimate_mom(std::span<const double> distances) {
  check_distances(distances, 2);
  const double w = distances.back();
  if (!(w > 0.0)) {
    throw std::invalid_argument("estimate_mom: largest distance must be positive");
  }
  double mu = 0.0;
  for (double ri : distances) mu += ri;
  mu /= static_cast<double>(distances.size());
  if (!(w - mu > 0.0)) return degenerate();
  return from_value(mu / (w - mu), 0);
}

Estimate estimate_ed(std::span<const double> distances) {
  check_distances(distances, 2);
  const auto k = std::ssize(distances);
  const auto half = (k + 1) / 2;  // ceil(k/2), 1-based rank
  const double r_half = distances[half - 1];
  const double w = distances.back();
  if (!(r_half > 0.0) || r_half >= w) return degenerate();
  const double value = std::log(static_cast<double>(k) / static_cast<double>(half)) /
                       std::log(w / r_half);
  return from_value(value, 0);
}

Estimate estimate_ged(std::span<const double> distances, GedPairStrategy strategy) {
  if (strategy == GedPairStrategy::HalfToFull) return estimate_ed(distances);
  check_distances(distances, 2);
  const auto k = std::ssize(distances);
  const double w = distances.back();
  double best = 0.0;
  for (std::ptrdiff_t i = 1; i < k; ++i) {
    const double ri = distances[i - 1];
    if (!(ri > 0.0) || ri >= w) continue;  // zero or tied radii carry no expansion
    const double rate = std::log(static_cast<double>(k) / static_cast<double>(i)) /
                        std::log(w / ri);
    best = std::max(best, rate);
  }
  return from_value(best, 0);
}

Estimate estimate_tle(const Neighborhood& neigh, Method variant) {
  const bool reflected = variant == Method::Tle || variant == Method::TleC;
  const bool central = variant == Method::TleC || variant == Method::TleCn;
  if (!reflected && !central && variant != Method::TleN) {
    throw std::invalid_argument("estimate_tle: not a TLE variant");
  }
  const Index k = neigh.neighbors.rows();
  if (k < 2) throw std::invalid_argument("estimate_tle: needs k >= 2");
  const double r = neigh.radius;
  if (!(r > 0.0)) throw std::invalid_argument("estimate_tle: radius must be positive");

  // Centers: the neighbors, plus the query itself for central variants.
  // Targets are always drawn from the neighbor sample V ("for all samples
  // v in V \ {x}"); the query is a measurement origin, never a target.
  const Index m = k + (central ? 1 : 0);
  PointMatrix centers(m, neigh.neighbors.cols());
  centers.topRows(k) = neigh.neighbors;
  if (central) centers.row(k) = neigh.query;

  PointMatrix mirrored;  // moving-center starts reflected through q
  if (reflected) {
    mirrored.resize(m, centers.cols());
    for (Index i = 0; i < m; ++i) {
      mirrored.row(i) = 2.0 * neigh.query - centers.row(i);
    }
  }

  const double floor = kClampFraction * r;
  double sum = 0.0;
  std::int64_t clamped = 0;
  auto term = [&](RowRef x, RowRef v) {
    const AdjustedDistance a = adjusted_distance(neigh.query, x, v, r);
    if (a.kind == AdjustedCase::CoincidentSample ||
        a.kind == AdjustedCase::ClampedDegenerate) {
      ++clamped;
      return floor;
    }
    return a.t;
  };

  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < k; ++j) {
      if (j == i) continue;
      const double t1 = term(centers.row(i), neigh.neighbors.row(j));
      if (reflected) {
        const double t2 = term(mirrored.row(i), neigh.neighbors.row(j));
        sum += std::log(t1 / r) + std::log(t2 / r);
      } else {
        sum += std::log(t1 / r);
      }
    }
  }

  // Pair count: k(k-1) neighbor pairs, plus k pairs from the central origin.
  const double pairs = static_cast<double>(k) *
                       static_cast<double>(central ? k : k - 1);
  const double normalizer = (reflected ? 2.0 : 1.0) * pairs;
  const double mean = sum / normalizer;
  if (!std::isfinite(mean) || !(mean < 0.0)) return degenerate(clamped);
  return from_value(-1.0 / mean, clamped);
}

Estimate estimate_lcd(const Neighborhood& neigh) {
  const Index k = neigh.neighbors.rows();
  if (k < 3) throw std::invalid_argument("estimate_lcd: needs k >= 3");
  const Eigen::MatrixXd pd = pairwise_distances(neigh);
  const double d_max = pd.maxCoeff();
  if (!(d_max > 0.0)) return degenerate();

  const double floor = kClampFraction * d_max;
  double sum = 0.0;
  std::int64_t clamped = 0;
  std::int64_t pairs = 0;
  for (Index i = 0; i < k; ++i) {
    for (Index j = i + 1; j < k; ++j) {
      double t = pd(i, j);
      if (!(t > 0.0)) {  // duplicate neighbors
        t = floor;
        ++clamped;
      }
      sum += std::log(t / d_max);
      ++pairs;
    }
  }
  const double mean = sum / static_cast<double>(pairs);
  if (!(mean < 0.0)) return degenerate(clamped);
  return from_value(-1.0 / mean, clamped);
}

Estimate estimate_lpca(const Neighborhood& neigh, double theta) {
  if (!(theta > 0.0) || !(theta < 1.0)) {
    throw std::invalid_argument("estimate_lpca: theta must lie in (0,1)");
  }
  const Index k = neigh.neighbors.rows();
  if (k < 2) throw std::invalid_argument("estimate_lpca: needs k >= 2");

  const Eigen::RowVectorXd mean = neigh.neighbors.colwise().mean();
  const PointMatrix centered = neigh.neighbors.rowwise() - mean;
  const Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(k - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.compute(cov, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) return degenerate();
  const Eigen::VectorXd lambda = solver.eigenvalues();  // ascending
  const double largest = lambda[lambda.size() - 1];
  if (!(largest > 0.0)) return degenerate();

  const double cut = theta * largest;
  Index count = 0;
  for (Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] >= cut) ++count;
  }
  return from_value(static_cast<double>(count), 0);
}

Estimate estimate_neighborhood(const Neighborhood& neigh, const EstimatorSpec& spec) {
  switch (spec.method) {
    case Method::Tle:
    case Method::TleC:
    case Method::TleN:
    case Method::TleCn:
      return estimate_tle(neigh, spec.method);
    case Method::Mle:
      return estimate_mle(neigh.distances);
    case Method::Mom:
      return estimate_mom(neigh.distances);
    case Method::Ed:
      return estimate_ed(neigh.distances);
    case Method::Ged:
      return estimate_ged(neigh.distances, spec.ged_pair_strategy);
    case Method::Lcd:
      return estimate_lcd(neigh);
    case Method::Lpca:
      return estimate_lpca(neigh, spec.theta);
  }
  throw std::invalid_argument("estimate_neighborhood: unknown method");
}

EstimateBatch estimate_batch(const PointSet& points, const EstimatorSpec& spec,
                             std::span<const Index> queries, int threads) {
  const int min_k = spec.method == Method::Lcd ? 3 : 2;
  if (spec.k < min_k) {
    throw std::invalid_argument("estimate_batch: k must be >= " +
                                std::to_string(min_k) + " for " +
                                std::string(method_token(spec.method)));
  }
  if (spec.k >= points.size()) {
    throw std::invalid_argument("estimate_batch: k must be smaller than the sample size");
  }
  if (spec.method == Method::Lpca && (!(spec.theta > 0.0) || !(spec.theta < 1.0))) {
    throw std::invalid_argument("estimate_batch: theta must lie in (0,1)");
  }

  EstimateBatch batch;
  batch.method = spec.method;
  batch.k = spec.k;
  if (queries.empty()) {
    batch.point_ids.resize(points.size());
    for (Index i = 0; i < points.size(); ++i) batch.point_ids[i] = i;
  } else {
    for (Index q : queries) {
      if (q < 0 || q >= points.size()) {
        throw std::invalid_argument("estimate_batch: query index out of range");
      }
    }
    batch.point_ids.assign(queries.begin(), queries.end());
  }

  batch.estimates.resize(batch.point_ids.size());
  parallel_for(batch.point_ids.size(), threads, [&](std::size_t i) {
    try {
      const Neighborhood nb = knn(points, batch.point_ids[i], spec.k);
      batch.estimates[i] = estimate_neighborhood(nb, spec);
    } catch (const std::exception&) {
      // Per-point degeneracies (e.g. all-coincident neighborhoods) are
      // recorded as statuses; the batch completes.
      batch.estimates[i] = degenerate();
    }
  });
  return batch;
}

}  // namespace lid
