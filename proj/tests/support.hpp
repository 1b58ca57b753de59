#ifndef PARETOHJ_TESTS_SUPPORT_HPP
#define PARETOHJ_TESTS_SUPPORT_HPP

// Seeded generators, densities and frozen values shared by the tests.

#include <cmath>
#include <cstdint>
#include <vector>

#include "paretohj/core.hpp"
#include "paretohj/density.hpp"
#include "paretohj/rng.hpp"

namespace paretohj::testing {

// Max-node errors of the f = 1 solution against sqrt(x y), recorded from the
// first run and cross-checked in the solver tests against a long double solve.
inline constexpr double kErrorN65 = 0.037735099913177084;
inline constexpr double kErrorN129 = 0.026327448674142918;
inline constexpr double kErrorN257 = 0.018475927786723766;

/// Index in [0, n).
inline std::size_t draw_index(CounterRng& rng, std::size_t n) {
  return static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
}

/// Uniform cloud in [0,1]^d; continuous coordinates, so a.s. distinct.
inline PointCloud random_cloud(CounterRng& rng, int d, std::size_t n) {
  PointCloud cloud(d);
  cloud.reserve(n);
  Eigen::VectorXd p(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (int a = 0; a < d; ++a) p[a] = rng.uniform();
    cloud.push_back(p);
  }
  return cloud;
}

/// Cloud snapped to a coarse lattice with some exact copies appended at
/// random positions, so ties on single axes and full duplicates are common.
inline PointCloud tied_cloud(CounterRng& rng, int d, std::size_t n) {
  const int levels = 2 + static_cast<int>(draw_index(rng, 12));
  std::vector<Eigen::VectorXd> pts;
  Eigen::VectorXd p(d);
  for (std::size_t i = 0; i < n; ++i) {
    if (!pts.empty() && rng.uniform() < 0.15) {
      pts.push_back(pts[draw_index(rng, pts.size())]);
      continue;
    }
    for (int a = 0; a < d; ++a) p[a] = std::floor(rng.uniform() * levels) / (levels - 1);
    pts.push_back(p);
  }
  // Shuffle so copies are not adjacent to their originals.
  for (std::size_t i = pts.size(); i > 1; --i) std::swap(pts[i - 1], pts[draw_index(rng, i)]);
  PointCloud cloud(d);
  for (const auto& q : pts) cloud.push_back(q);
  return cloud;
}

/// Alternates between continuous and tied clouds.
inline PointCloud mixed_cloud(CounterRng& rng, int d, std::size_t n, int trial) {
  return trial % 2 == 0 ? random_cloud(rng, d, n) : tied_cloud(rng, d, n);
}

/// 2 x on [0,1].
inline PiecewiseLinear1d ramp() {
  PiecewiseLinear1d axis;
  axis.knots = {0.0, 1.0};
  axis.values = {0.0, 2.0};
  return axis;
}

inline PiecewiseLinear1d bump() {
  PiecewiseLinear1d axis;
  axis.knots = {0.0, 0.5, 1.0};
  axis.values = {0.5, 1.5, 0.5};
  return axis;
}

/// The densities every solver-level invariant is checked on.
inline std::vector<DensitySpec> suite_densities() {
  std::vector<Eigen::VectorXd> means3{Eigen::Vector3d(0.4, 0.5, 0.5), Eigen::Vector3d(0.7, 0.3, 0.6)};
  return {DensitySpec::unit_cube(2),
          DensitySpec::uniform_box(Eigen::Vector2d(0.2, 0.1), Eigen::Vector2d(0.9, 0.7)),
          figure_region_density(),
          figure_multimodal_density(),
          DensitySpec::piecewise_constant(2, 2, {4, 0, 0, 0}),
          DensitySpec::piecewise_constant(2, 4, {0.5, 1, 1.5, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0.5, 1, 1.5, 1}),
          DensitySpec::product({ramp(), ramp()}),
          DensitySpec::product({bump(), ramp()}),
          DensitySpec::unit_cube(3),
          DensitySpec::product({bump(), ramp(), bump()}),
          DensitySpec::gaussian_mixture(3, {0.6, 0.4}, means3, {0.15, 0.2})};
}

}  // namespace paretohj::testing

#endif  // PARETOHJ_TESTS_SUPPORT_HPP
