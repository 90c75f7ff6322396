#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lid/csv.hpp"
#include "lid/geometry.hpp"
#include "lid/random.hpp"
#include "oracles.hpp"

using namespace lid;

namespace {

PointSet gaussian_cloud(Index n, int d, std::uint64_t seed) {
  Rng rng(seed);
  PointMatrix coords(n, d);
  for (Index i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) coords(i, j) = rng.normal();
  }
  return make_point_set(std::move(coords));
}

}  // namespace

TEST_CASE("knn on a 1-d set with self-exclusion") {
  PointMatrix coords(3, 1);
  coords << 0.0, 1.0, 3.0;
  const PointSet ps = make_point_set(coords);

  const Neighborhood nb = knn(ps, Index{0}, 2);
  REQUIRE(nb.distances.size() == 2);
  CHECK(nb.distances[0] == doctest::Approx(1.0));
  CHECK(nb.distances[1] == doctest::Approx(3.0));
  CHECK(nb.neighbors(0, 0) == doctest::Approx(1.0));
  CHECK(nb.neighbors(1, 0) == doctest::Approx(3.0));
  CHECK(nb.radius == doctest::Approx(3.0));
}

TEST_CASE("flat torus wraparound and chart unwrapping") {
  PointMatrix coords(2, 1);
  coords << 0.95, 0.05;
  const PointSet ps = make_point_set(coords, Metric::FlatTorus);

  const Neighborhood nb = knn(ps, Index{1}, 1);  // query at 0.05
  CHECK(nb.distances[0] == doctest::Approx(0.10).epsilon(1e-12));
  CHECK(nb.neighbors(0, 0) == doctest::Approx(-0.05).epsilon(1e-12));
}

TEST_CASE("torus unwrapped coordinates differ from stored ones by integers") {
  Rng rng(77);
  PointMatrix coords(60, 3);
  for (Index i = 0; i < coords.rows(); ++i) {
    for (Index j = 0; j < 3; ++j) coords(i, j) = rng.uniform();
  }
  const PointSet ps = make_point_set(coords, Metric::FlatTorus);
  for (Index q = 0; q < 10; ++q) {
    const Neighborhood nb = knn(ps, q, 5);
    for (std::size_t i = 0; i < nb.indices.size(); ++i) {
      for (Index j = 0; j < 3; ++j) {
        const double shift = nb.neighbors(static_cast<Index>(i), j) -
                             ps.coords(nb.indices[i], j);
        CHECK(std::abs(shift - std::round(shift)) <= 1e-12);
        CHECK(std::abs(nb.neighbors(static_cast<Index>(i), j) - nb.query[j]) <= 0.5);
      }
    }
  }
}

TEST_CASE("knn matches a full-sort brute-force oracle") {
  const PointSet ps = gaussian_cloud(100, 4, 42);
  for (Index q : {Index{0}, Index{17}, Index{99}}) {
    const Neighborhood nb = knn(ps, q, 10);
    const auto oracle = test::full_sort_knn_oracle(ps, ps.coords.row(q), q);
    for (int i = 0; i < 10; ++i) {
      CHECK(nb.indices[static_cast<std::size_t>(i)] == oracle[static_cast<std::size_t>(i)].second);
      CHECK(nb.distances[static_cast<std::size_t>(i)] ==
            doctest::Approx(oracle[static_cast<std::size_t>(i)].first).epsilon(1e-12));
    }
  }
}

TEST_CASE("knn ties break toward the lower point index") {
  PointMatrix coords(5, 1);
  coords << 0.0, 1.0, -1.0, 1.0, 2.0;  // rows 1, 2, 3 all at distance 1
  const PointSet ps = make_point_set(coords);
  const Neighborhood nb = knn(ps, Index{0}, 3);
  CHECK(nb.indices == std::vector<Index>{1, 2, 3});
}

TEST_CASE("knn is invariant under row permutation up to the index tie-break") {
  const PointSet ps = gaussian_cloud(60, 3, 7);
  PointMatrix shuffled = ps.coords;
  // reverse the rows
  for (Index i = 0; i < ps.size(); ++i) shuffled.row(i) = ps.coords.row(ps.size() - 1 - i);
  const PointSet rev = make_point_set(shuffled);

  const Eigen::RowVectorXd query = Eigen::RowVectorXd::Zero(3);
  const Neighborhood a = knn(ps, query, 8);
  const Neighborhood b = knn(rev, query, 8);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(a.distances[i] == doctest::Approx(b.distances[i]).epsilon(1e-15));
    CHECK(a.indices[i] == ps.size() - 1 - b.indices[i]);
  }
}

TEST_CASE("Euclidean knn distances are invariant under rigid motion") {
  const PointSet ps = gaussian_cloud(80, 5, 11);
  const Eigen::MatrixXd rot = test::random_rotation(5, 3);
  Eigen::RowVectorXd shift(5);
  shift << 0.3, -1.2, 4.0, 0.01, -7.5;
  const PointSet moved = test::similarity_transform(ps, rot, 1.0, shift);

  const Neighborhood a = knn(ps, Index{5}, 12);
  const Neighborhood b = knn(moved, Index{5}, 12);
  CHECK(a.indices == b.indices);
  for (std::size_t i = 0; i < a.distances.size(); ++i) {
    CHECK(b.distances[i] == doctest::Approx(a.distances[i]).epsilon(1e-9));
  }
}

TEST_CASE("knn input validation") {
  const PointSet ps = gaussian_cloud(10, 2, 1);
  CHECK_THROWS_AS(knn(ps, Index{0}, 10), std::invalid_argument);  // k >= n after exclusion
  CHECK_THROWS_AS(knn(ps, Index{0}, 0), std::invalid_argument);
  Eigen::RowVectorXd bad(3);
  bad << 0, 0, 0;
  CHECK_THROWS_AS(knn(ps, bad, 2), std::invalid_argument);
  CHECK_NOTHROW(knn(ps, Index{0}, 9));
}

TEST_CASE("duplicate points are permitted and their zero distances propagate") {
  PointMatrix coords(4, 2);
  coords << 0, 0, 0, 0, 1, 0, 2, 0;
  const PointSet ps = make_point_set(coords);
  const Neighborhood nb = knn(ps, Index{0}, 2);
  CHECK(nb.distances[0] == 0.0);  // the duplicate
  CHECK(nb.distances[1] == doctest::Approx(1.0));
  CHECK(nb.radius > 0.0);
}

TEST_CASE("all-coincident neighborhoods are rejected") {
  PointMatrix coords(3, 1);
  coords << 0.5, 0.5, 0.5;
  const PointSet ps = make_point_set(coords);
  CHECK_THROWS_AS(knn(ps, Index{0}, 2), std::runtime_error);
}

TEST_CASE("torus chart guard rejects very wide neighborhoods") {
  // Two antipodal 2-d clusters (distance ~ 0.5*sqrt(2)); k spans both.
  Rng rng(5);
  PointMatrix coords(20, 2);
  for (Index i = 0; i < 10; ++i) {
    coords(i, 0) = 0.001 * rng.uniform();
    coords(i, 1) = 0.001 * rng.uniform();
  }
  for (Index i = 10; i < 20; ++i) {
    coords(i, 0) = 0.5 + 0.001 * rng.uniform();
    coords(i, 1) = 0.5 + 0.001 * rng.uniform();
  }
  const PointSet ps = make_point_set(coords, Metric::FlatTorus);
  CHECK_THROWS_AS(knn(ps, Index{0}, 15), std::runtime_error);
  CHECK_NOTHROW(knn(ps, Index{0}, 9));
}

TEST_CASE("point set validation") {
  PointMatrix coords(2, 2);
  coords << 0.1, 0.2, 0.3, 1.0;
  CHECK_THROWS_AS(make_point_set(coords, Metric::FlatTorus), std::invalid_argument);
  coords(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(make_point_set(coords), std::invalid_argument);
}

TEST_CASE("pairwise distances: 3-4-5 triangle and symmetry") {
  PointMatrix coords(3, 2);
  coords << 0, 0, 3, 4, 10, 10;
  const PointSet ps = make_point_set(coords);
  const Neighborhood nb = knn(ps, Index{2}, 2);

  const Eigen::MatrixXd pd = pairwise_distances(nb);
  CHECK(pd(0, 1) == doctest::Approx(5.0));
  CHECK(pd(1, 0) == doctest::Approx(5.0));
  CHECK(pd(0, 0) == 0.0);
  CHECK(pd(1, 1) == 0.0);
  CHECK((pd - pd.transpose()).norm() == 0.0);
}

TEST_CASE("pairwise distances match an independent double loop") {
  const PointSet ps = gaussian_cloud(30, 4, 99);
  const Neighborhood nb = knn(ps, Index{0}, 20);
  const Eigen::MatrixXd pd = pairwise_distances(nb);
  for (Index i = 0; i < 20; ++i) {
    for (Index j = 0; j < 20; ++j) {
      double d2 = 0.0;
      for (Index c = 0; c < 4; ++c) {
        const double delta = nb.neighbors(i, c) - nb.neighbors(j, c);
        d2 += delta * delta;
      }
      CHECK(pd(i, j) == doctest::Approx(std::sqrt(d2)).epsilon(1e-12));
    }
  }
}

TEST_CASE("dataset CSV round-trips with and without header") {
  const PointSet ps = gaussian_cloud(25, 3, 4);
  for (bool header : {false, true}) {
    std::ostringstream out;
    write_pointset_csv(out, ps, header);
    std::istringstream in(out.str());
    const PointSet back = read_pointset_csv(in, header);
    REQUIRE(back.size() == ps.size());
    REQUIRE(back.dim() == ps.dim());
    CHECK((back.coords - ps.coords).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("dataset CSV rejects ragged rows") {
  std::istringstream in("1.0,2.0\n3.0\n");
  CHECK_THROWS_AS(read_pointset_csv(in, false), std::runtime_error);
}
