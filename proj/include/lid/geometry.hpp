#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace lid {

using Index = Eigen::Index;

// Points are stored one per row; RowMajor keeps each point contiguous.
using PointMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowRef = Eigen::Ref<const Eigen::RowVectorXd>;

enum class Metric { Euclidean, FlatTorus };

// Immutable set of n points in R^D. FlatTorus is the unit torus [0,1)^D with
// per-coordinate wraparound (period 1); its coordinates must lie in [0,1).
// Safe to share across concurrent workers once constructed.
struct PointSet {
  PointMatrix coords;
  Metric metric = Metric::Euclidean;
  std::string label;

  Index size() const { return coords.rows(); }
  Index dim() const { return coords.cols(); }
};

// Validates the PointSet invariants (n >= 1, D >= 1, finite coordinates,
// torus coordinates in [0,1)) and throws std::invalid_argument on violation.
PointSet make_point_set(PointMatrix coords, Metric metric = Metric::Euclidean,
                        std::string label = {});

// The k nearest neighbors of a query point, sorted by (distance, point
// index). Neighbor coordinates are expressed in a local Euclidean chart
// around the query: the stored rows verbatim for the Euclidean metric, and
// unwrapped by per-coordinate integer shifts for FlatTorus, so that all
// downstream vector algebra is plain Euclidean.
struct Neighborhood {
  Eigen::RowVectorXd query;
  PointMatrix neighbors;          // k x D, chart coordinates
  std::vector<Index> indices;     // source row of each neighbor
  std::vector<double> distances;  // ascending; distances[i] = |neighbors[i] - query|
  double radius = 0.0;            // distances.back()
};

// Exact brute-force kNN for an arbitrary query location (no self-exclusion).
Neighborhood knn(const PointSet& points, const Eigen::RowVectorXd& query, int k);

// Exact brute-force kNN for a point of the set; the query row itself is
// excluded. Throws if k exceeds the available sample (k >= n after
// exclusion), if the resulting radius is zero (all selected neighbors
// coincide with the query), or - for FlatTorus - if the radius reaches 0.5,
// beyond which the local chart is no longer meaningful.
Neighborhood knn(const PointSet& points, Index query_index, int k);

// Distances between all neighbor pairs in the chart: symmetric with zero
// diagonal, entry (i,j) = |v_i - v_j|.
Eigen::MatrixXd pairwise_distances(const Neighborhood& neigh);

}  // namespace lid
