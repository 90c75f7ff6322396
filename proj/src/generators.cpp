#include "lid/generators.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "lid/random.hpp"

namespace lid {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct FamilyInfo {
  Family family;
  const char* token;
  int d;  // 0 for parametric families
  int D;
};

constexpr FamilyInfo kFamilies[] = {
    {Family::Gaussian, "gaussian", 0, 0},
    {Family::UniformCube, "uniform", 0, 0},
    {Family::Torus, "torus", 0, 0},
    {Family::M1, "m1", 10, 11},
    {Family::M2, "m2", 3, 5},
    {Family::M3, "m3", 4, 6},
    {Family::M4, "m4", 4, 8},
    {Family::M5, "m5", 2, 3},
    {Family::M6, "m6", 6, 36},
    {Family::M7, "m7", 2, 3},
    {Family::M8, "m8", 12, 72},
    {Family::M9, "m9", 20, 20},
    {Family::M10a, "m10a", 10, 11},
    {Family::M10b, "m10b", 17, 18},
    {Family::M10c, "m10c", 24, 25},
    {Family::M11, "m11", 2, 3},
    {Family::M12, "m12", 20, 20},
    {Family::M13, "m13", 1, 13},
};

const FamilyInfo& info(Family family) {
  for (const auto& fi : kFamilies) {
    if (fi.family == family) return fi;
  }
  throw std::invalid_argument("unknown family");
}

// Fixed affine embedding of the 3-cube into R^5 (m2). Seed-independent so
// the manifold is the same surface in every run.
// clang-format off
constexpr double kAffine3to5[5][3] = {
    { 1.0,  0.4, -0.3},
    {-0.5,  1.1,  0.2},
    { 0.7, -0.6,  1.0},
    { 0.2,  0.8,  0.5},
    {-0.4,  0.3,  0.9},
};
constexpr double kAffine3to5Offset[5] = {0.5, -1.0, 0.25, 0.0, 2.0};
// clang-format on

// Fixed full-rank map for m9: identity plus a strictly diagonally dominant
// off-diagonal pattern, so the image is all of R^20.
double affine20(int i, int j) {
  return (i == j ? 1.0 : 0.0) + 0.1 / (1.0 + std::abs(i - j));
}

void validate(const GeneratorSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("generate: n must be >= 1");
  const FamilyInfo& fi = info(spec.family);
  if (fi.d == 0) {
    if (spec.d < 1) {
      throw std::invalid_argument("generate: parametric families need d >= 1");
    }
  } else if (spec.d != 0 && spec.d != fi.d) {
    throw std::invalid_argument(
        "generate: dimension of " + std::string(fi.token) +
        " is fixed at d=" + std::to_string(fi.d) + " and cannot be overridden");
  }
}

// Points are filled row by row, coordinate by coordinate, so the stream
// consumption (and thus the output) is set by the spec alone.
PointMatrix gaussian_matrix(Rng& rng, Index n, int d) {
  PointMatrix x(n, d);
  for (Index i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) x(i, j) = rng.normal();
  }
  return x;
}

PointMatrix uniform_matrix(Rng& rng, Index n, int d) {
  PointMatrix x(n, d);
  for (Index i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) x(i, j) = rng.uniform();
  }
  return x;
}

// Torus of revolution in R^3: ring angle psi, tube angle phi.
void torus3(double psi, double phi, double ring, double tube, double* out) {
  out[0] = (ring + tube * std::cos(phi)) * std::cos(psi);
  out[1] = (ring + tube * std::cos(phi)) * std::sin(psi);
  out[2] = tube * std::sin(phi);
}

// Trigonometric moment block (cos t, sin t, cos 2t, sin 2t, ...), `pairs`
// harmonics: a smooth embedding of the circle.
void moment_block(double t, int pairs, double* out) {
  for (int h = 1; h <= pairs; ++h) {
    out[2 * (h - 1)] = std::cos(h * t);
    out[2 * (h - 1) + 1] = std::sin(h * t);
  }
}

PointMatrix generate_m(Rng& rng, Family family, Index n) {
  const FamilyInfo& fi = info(family);
  PointMatrix x(n, fi.D);
  for (Index i = 0; i < n; ++i) {
    double* row = x.row(i).data();
    switch (family) {
      case Family::M1: {  // uniform on the unit 10-sphere in R^11
        Eigen::RowVectorXd g(11);
        for (int j = 0; j < 11; ++j) g[j] = rng.normal();
        x.row(i) = g / g.norm();
        break;
      }
      case Family::M2: {  // affine 3-space in R^5
        double p[3];
        for (double& pj : p) pj = rng.uniform();
        for (int r = 0; r < 5; ++r) {
          row[r] = kAffine3to5Offset[r];
          for (int c = 0; c < 3; ++c) row[r] += kAffine3to5[r][c] * p[c];
        }
        break;
      }
      case Family::M3: {  // product of two revolution tori, second squashed
        const double a1 = rng.uniform(0.0, kTwoPi);
        const double a2 = rng.uniform(0.0, kTwoPi);
        const double a3 = rng.uniform(0.0, kTwoPi);
        const double a4 = rng.uniform(0.0, kTwoPi);
        torus3(a1, a2, 2.0, 1.0, row);
        torus3(a3, a4, 2.0, 0.25, row + 3);
        break;
      }
      case Family::M4: {  // Clifford 4-torus in R^8
        for (int p = 0; p < 4; ++p) {
          const double t = rng.uniform(0.0, kTwoPi);
          row[2 * p] = std::cos(t);
          row[2 * p + 1] = std::sin(t);
        }
        break;
      }
      case Family::M5: {  // helicoid strip (the 2-d helix)
        const double u = rng.uniform(0.0, 4.0 * std::numbers::pi);
        const double v = rng.uniform(0.3, 1.0);
        row[0] = v * std::cos(u);
        row[1] = v * std::sin(u);
        row[2] = 0.3 * u;
        break;
      }
      case Family::M6: {  // 6-torus, three harmonics per angle, in R^36
        for (int p = 0; p < 6; ++p) {
          moment_block(rng.uniform(0.0, kTwoPi), 3, row + 6 * p);
        }
        break;
      }
      case Family::M7: {  // swiss roll
        const double t = rng.uniform(1.5 * std::numbers::pi, 4.5 * std::numbers::pi);
        const double h = rng.uniform(0.0, 21.0);
        row[0] = t * std::cos(t);
        row[1] = h;
        row[2] = t * std::sin(t);
        break;
      }
      case Family::M8: {  // 12-torus, three harmonics per angle, in R^72
        for (int p = 0; p < 12; ++p) {
          moment_block(rng.uniform(0.0, kTwoPi), 3, row + 6 * p);
        }
        break;
      }
      case Family::M9: {  // full-rank affine image of the 20-cube
        double p[20];
        for (double& pj : p) pj = rng.uniform();
        for (int r = 0; r < 20; ++r) {
          double acc = 0.0;
          for (int c = 0; c < 20; ++c) acc += affine20(r, c) * p[c];
          row[r] = acc;
        }
        break;
      }
      case Family::M10a:
      case Family::M10b:
      case Family::M10c: {  // hypercube with one ambient coordinate frozen
        for (int j = 0; j < fi.d; ++j) row[j] = rng.uniform();
        row[fi.d] = 0.0;
        break;
      }
      case Family::M11: {  // Moebius band, ten half-twist pairs
        const double u = rng.uniform(0.0, kTwoPi);
        const double w = rng.uniform(-1.0, 1.0);
        const double ring = 1.0 + 0.5 * w * std::cos(5.0 * u);
        row[0] = ring * std::cos(u);
        row[1] = ring * std::sin(u);
        row[2] = 0.5 * w * std::sin(5.0 * u);
        break;
      }
      case Family::M12: {  // isotropic Gaussian in R^20
        for (int j = 0; j < 20; ++j) row[j] = rng.normal();
        break;
      }
      case Family::M13: {  // closed moment curve in R^13
        const double t = rng.uniform(0.0, kTwoPi);
        moment_block(t, 6, row);
        row[12] = std::cos(7.0 * t);
        break;
      }
      default:
        throw std::invalid_argument("generate_m: not an m-family member");
    }
  }
  return x;
}

}  // namespace

std::string_view family_token(Family family) { return info(family).token; }

std::optional<Family> family_from_token(std::string_view token) {
  for (const auto& fi : kFamilies) {
    if (fi.token == token) return fi.family;
  }
  if (token == "uniform-cube") return Family::UniformCube;
  return std::nullopt;
}

bool is_m_family(Family family) { return info(family).d != 0; }

std::optional<ManifoldDims> m_family_dims(Family family) {
  const FamilyInfo& fi = info(family);
  if (fi.d == 0) return std::nullopt;
  return ManifoldDims{fi.d, fi.D};
}

PointSet generate(const GeneratorSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  const std::string label{family_token(spec.family)};
  switch (spec.family) {
    case Family::Gaussian:
      return make_point_set(gaussian_matrix(rng, spec.n, spec.d),
                            Metric::Euclidean, label);
    case Family::UniformCube:
      return make_point_set(uniform_matrix(rng, spec.n, spec.d),
                            Metric::Euclidean, label);
    case Family::Torus:
      return make_point_set(uniform_matrix(rng, spec.n, spec.d),
                            Metric::FlatTorus, label);
    default:
      return make_point_set(generate_m(rng, spec.family, spec.n),
                            Metric::Euclidean, label);
  }
}

int ground_truth_id(const GeneratorSpec& spec) {
  const FamilyInfo& fi = info(spec.family);
  return fi.d != 0 ? fi.d : spec.d;
}

int ambient_dim(const GeneratorSpec& spec) {
  const FamilyInfo& fi = info(spec.family);
  return fi.D != 0 ? fi.D : spec.d;
}

}  // namespace lid
