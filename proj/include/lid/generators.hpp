#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "lid/geometry.hpp"

namespace lid {

// Synthetic families: parametric i.i.d. sets (dimension chosen by the
// caller) and the m-family manifold benchmark with fixed dimensions.
enum class Family {
  Gaussian,
  UniformCube,
  Torus,
  M1, M2, M3, M4, M5, M6, M7, M8,
  M9, M10a, M10b, M10c, M11, M12, M13,
};

std::string_view family_token(Family family);
std::optional<Family> family_from_token(std::string_view token);
bool is_m_family(Family family);

struct ManifoldDims {
  int intrinsic;
  int ambient;
};

// Fixed (d, D) of an m-family manifold; nullopt for parametric families.
std::optional<ManifoldDims> m_family_dims(Family family);

struct GeneratorSpec {
  Family family = Family::Gaussian;
  int d = 0;  // intrinsic dimension; must match the table (or be 0) for m*
  Index n = 0;
  std::uint64_t seed = 0;
};

// Deterministic sample of spec.n points; a pure function of spec. The exact
// parametrizations of the manifold families are documented in
// docs/manifolds.md.
PointSet generate(const GeneratorSpec& spec);

// The theoretical local intrinsic dimension of the family (table d for the
// m-family, spec.d for parametric families).
int ground_truth_id(const GeneratorSpec& spec);

// Dimension of the space the generated points live in.
int ambient_dim(const GeneratorSpec& spec);

}  // namespace lid
