#include "lid/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace lid {

namespace {

// Torus neighborhoods wider than this cannot be unwrapped into a single
// chart; per-coordinate shifts become ambiguous at half the period.
constexpr double kTorusChartLimit = 0.5;

// Chart representative of `point` as seen from `center`: every coordinate is
// shifted by an integer so it lies within half a period of the center. The
// shifted values are exact in double precision for coordinates in [0,1).
Eigen::RowVectorXd unwrap_to_chart(const Eigen::RowVectorXd& center,
                                   const Eigen::RowVectorXd& point) {
  Eigen::RowVectorXd out(point.size());
  for (Index j = 0; j < point.size(); ++j) {
    out[j] = point[j] + std::round(center[j] - point[j]);
  }
  return out;
}

Neighborhood knn_impl(const PointSet& points, const Eigen::RowVectorXd& query,
                      int k, Index exclude) {
  const Index n = points.size();
  const Index dim = points.dim();
  if (query.size() != dim) {
    throw std::invalid_argument("knn: query dimension " +
                                std::to_string(query.size()) +
                                " does not match point set dimension " +
                                std::to_string(dim));
  }
  const Index available = n - (exclude >= 0 ? 1 : 0);
  if (k < 1) throw std::invalid_argument("knn: k must be >= 1");
  if (k > available) {
    throw std::invalid_argument(
        "knn: insufficient sample, k=" + std::to_string(k) + " but only " +
        std::to_string(available) + " points are available");
  }

  // (squared distance, index); squared distances order identically to
  // distances and save n square roots.
  std::vector<std::pair<double, Index>> order;
  order.reserve(static_cast<std::size_t>(available));
  Eigen::RowVectorXd chart(dim);
  for (Index i = 0; i < n; ++i) {
    if (i == exclude) continue;
    double d2;
    if (points.metric == Metric::FlatTorus) {
      chart = unwrap_to_chart(query, points.coords.row(i));
      d2 = (query - chart).squaredNorm();
    } else {
      d2 = (query - points.coords.row(i)).squaredNorm();
    }
    order.emplace_back(d2, i);
  }

  std::nth_element(order.begin(), order.begin() + (k - 1), order.end());
  std::sort(order.begin(), order.begin() + k);

  Neighborhood nb;
  nb.query = query;
  nb.neighbors.resize(k, dim);
  nb.indices.resize(k);
  nb.distances.resize(k);
  for (int i = 0; i < k; ++i) {
    const Index src = order[i].second;
    nb.indices[i] = src;
    if (points.metric == Metric::FlatTorus) {
      nb.neighbors.row(i) = unwrap_to_chart(query, points.coords.row(src));
    } else {
      nb.neighbors.row(i) = points.coords.row(src);
    }
    nb.distances[i] = std::sqrt(order[i].first);
  }
  nb.radius = nb.distances.back();

  if (!(nb.radius > 0.0)) {
    throw std::runtime_error(
        "knn: degenerate neighborhood, all selected neighbors coincide with "
        "the query");
  }
  if (points.metric == Metric::FlatTorus && nb.radius >= kTorusChartLimit) {
    throw std::runtime_error(
        "knn: torus neighborhood radius " + std::to_string(nb.radius) +
        " reaches half the period; the local chart is invalid (reduce k or "
        "increase n)");
  }
  return nb;
}

}  // namespace

PointSet make_point_set(PointMatrix coords, Metric metric, std::string label) {
  if (coords.rows() < 1 || coords.cols() < 1) {
    throw std::invalid_argument("PointSet: need at least one point and one dimension");
  }
  if (!coords.allFinite()) {
    throw std::invalid_argument("PointSet: coordinates must be finite");
  }
  if (metric == Metric::FlatTorus) {
    if ((coords.array() < 0.0).any() || (coords.array() >= 1.0).any()) {
      throw std::invalid_argument("PointSet: FlatTorus coordinates must lie in [0,1)");
    }
  }
  return PointSet{std::move(coords), metric, std::move(label)};
}

Neighborhood knn(const PointSet& points, const Eigen::RowVectorXd& query, int k) {
  return knn_impl(points, query, k, -1);
}

Neighborhood knn(const PointSet& points, Index query_index, int k) {
  if (query_index < 0 || query_index >= points.size()) {
    throw std::invalid_argument("knn: query index out of range");
  }
  return knn_impl(points, points.coords.row(query_index), k, query_index);
}

Eigen::MatrixXd pairwise_distances(const Neighborhood& neigh) {
  const Index k = neigh.neighbors.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(k, k);
  for (Index i = 0; i < k; ++i) {
    for (Index j = i + 1; j < k; ++j) {
      const double d = (neigh.neighbors.row(i) - neigh.neighbors.row(j)).norm();
      out(i, j) = d;
      out(j, i) = d;
    }
  }
  return out;
}

}  // namespace lid
