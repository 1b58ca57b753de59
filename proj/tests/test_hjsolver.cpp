#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "paretohj/hjsolver.hpp"
#include "paretohj/oracle.hpp"
#include "support.hpp"

using namespace paretohj;
using testing::bump;
using testing::kErrorN129;
using testing::kErrorN257;
using testing::kErrorN65;
using testing::ramp;
using testing::suite_densities;

namespace {

GridFunction solve_spec(const DensitySpec& spec, int n) {
  return solve_hj(sample_density_to_grid(spec, Grid(spec.dimension(), n)));
}

template <typename Exact>
double max_error(const GridFunction& u, Exact&& exact) {
  double worst = 0.0;
  for (std::size_t i = 0; i < u.grid.node_count(); ++i) {
    worst = std::max(worst, std::abs(u[i] - exact(u.grid.node_point(i))));
  }
  return worst;
}

double sqrt_xy(const Eigen::VectorXd& x) { return std::sqrt(x[0] * x[1]); }

}  // namespace

TEST_CASE("root map on worked inputs") {
  CHECK(solve_p(0.0, {1.0, 3.0}) == 3.0);
  CHECK(solve_p(1.0, {0.0, 0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-14));
  const double p = solve_p(4.0, {1.0, 3.0});
  CHECK(p == doctest::Approx(2.0 + std::sqrt(5.0)).epsilon(1e-15));
  CHECK((p - 1.0) * (p - 3.0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(solve_p(0.5, {0.25}) == 0.75);
}

TEST_CASE("root map rejects negative or non-finite input") {
  CHECK_THROWS_AS(solve_p(-1.0, {0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(solve_p(1.0, {0.0, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(solve_p(std::nan(""), {0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(solve_p(1.0, {0.0, std::numeric_limits<double>::infinity(), 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(solve_p<double>(1.0, std::span<const double>()), std::invalid_argument);
}

TEST_CASE("property: root map solves the product equation inside its bracket") {
  CounterRng rng(51, "hj-root");
  for (int trial = 0; trial < 20000; ++trial) {
    const int d = 2 + trial % 4;
    std::vector<double> a(static_cast<std::size_t>(d));
    for (double& v : a) v = rng.uniform() < 0.2 ? 0.0 : rng.uniform();
    const double a0 = std::pow(10.0, -6.0 + 7.0 * rng.uniform());
    const double p = solve_p<double>(a0, a);
    const double m = *std::max_element(a.begin(), a.end());
    CHECK(p >= m);
    CHECK(p <= m + std::pow(a0, 1.0 / d) * (1.0 + 1e-12));
    double prod = 1.0;
    for (double v : a) prod *= p - v;
    CHECK(std::abs(prod - a0) <= 1e-10 * a0);
  }
}

TEST_CASE("property: root map is monotone in every argument") {
  CounterRng rng(52, "hj-root-monotone");
  for (int trial = 0; trial < 5000; ++trial) {
    const int d = 2 + trial % 3;
    std::vector<double> a(static_cast<std::size_t>(d));
    for (double& v : a) v = rng.uniform();
    const double a0 = rng.uniform();
    const double p = solve_p<double>(a0, a);
    CHECK(solve_p<double>(a0 * 1.5, a) >= p);
    auto raised = a;
    raised[testing::draw_index(rng, a.size())] += 0.1 * rng.uniform();
    CHECK(solve_p<double>(a0, raised) >= p * (1.0 - 1e-15));
  }
}

TEST_CASE("zero density gives the zero solution") {
  for (int d : {2, 3}) {
    const Grid g(d, 9);
    CHECK(solve_hj(GridFunction(g)).values.isZero(0.0));
  }
}

TEST_CASE("negative density is rejected") {
  GridFunction f(Grid(2, 5));
  f.values.setOnes();
  f[7] = -1e-3;
  CHECK_THROWS_AS(solve_hj(f), std::invalid_argument);
}

TEST_CASE("uniform density: frozen errors and refinement") {
  const double e65 = max_error(solve_spec(DensitySpec::unit_cube(2), 65), sqrt_xy);
  const double e129 = max_error(solve_spec(DensitySpec::unit_cube(2), 129), sqrt_xy);
  const double e257 = max_error(solve_spec(DensitySpec::unit_cube(2), 257), sqrt_xy);
  CHECK(e65 == doctest::Approx(kErrorN65).epsilon(1e-12));
  CHECK(e129 == doctest::Approx(kErrorN129).epsilon(1e-12));
  CHECK(e257 == doctest::Approx(kErrorN257).epsilon(1e-12));
  CHECK(e65 > e129);
  CHECK(e129 > e257);
}

TEST_CASE("long double solve confirms the frozen error is not rounding") {
  const Grid g(2, 257);
  const auto f = sample_density_to_grid(DensitySpec::unit_cube(2), g);
  const auto u = solve_hj(f);
  const auto ul = solve_hj(f.cast<long double>());
  double gap = 0.0;
  double err_long = 0.0;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    gap = std::max(gap, static_cast<double>(std::abs(static_cast<long double>(u[i]) - ul[i])));
    const auto x = g.node_point(i);
    err_long = std::max(err_long, static_cast<double>(std::abs(ul[i] - std::sqrt(static_cast<long double>(x[0]) * x[1]))));
  }
  CHECK(gap <= 1e-14);
  CHECK(err_long == doctest::Approx(kErrorN257).epsilon(1e-12));
}

TEST_CASE("ramp product density is reproduced to rounding") {
  // Differences of U = xy telescope exactly through the scheme's product form.
  const auto spec = DensitySpec::product({ramp(), ramp()});
  double previous = INFINITY;
  for (int n : {65, 129, 257}) {
    const double e = max_error(solve_spec(spec, n), [](const Eigen::VectorXd& x) { return x[0] * x[1]; });
    CHECK(e <= 1e-14);
    CHECK(e <= previous);
    previous = e;
  }
}

TEST_CASE("three-dimensional uniform density converges under refinement") {
  double previous = INFINITY;
  for (int n : {9, 17, 33}) {
    const double e = max_error(solve_spec(DensitySpec::unit_cube(3), n),
                               [](const Eigen::VectorXd& x) { return std::cbrt(x[0] * x[1] * x[2]); });
    CHECK(e < previous);
    previous = e;
  }
}

TEST_CASE("non-product product density converges toward its closed form") {
  const auto spec = DensitySpec::product({bump(), ramp()});
  double previous = INFINITY;
  for (int n : {33, 65, 129, 257}) {
    const double e = max_error(solve_spec(spec, n), [&](const Eigen::VectorXd& x) { return *exact_value_function(spec, x); });
    CHECK(e < previous);
    previous = e;
  }
}

TEST_CASE("sweep orders agree bit for bit") {
  for (const auto& spec : {figure_multimodal_density(), DensitySpec::product({bump(), ramp(), bump()})}) {
    const Grid g(spec.dimension(), spec.dimension() == 2 ? 257 : 41);
    const auto f = sample_density_to_grid(spec, g);
    const auto lex = solve_hj(f);
    CHECK(solve_hj(f, SweepOrder::Wavefront).values == lex.values);
    CHECK(solve_hj(f, SweepOrder::Wavefront, 4).values == lex.values);
    const auto fl = f.cast<long double>();
    CHECK(solve_hj(fl, SweepOrder::Wavefront, 3).values == solve_hj(fl).values);
  }
}

TEST_CASE("residual identity holds on every suite density") {
  for (const auto& spec : suite_densities()) {
    const int n = spec.dimension() == 2 ? 257 : 33;
    const auto f = sample_density_to_grid(spec, Grid(spec.dimension(), n));
    const auto u = solve_hj(f);
    INFO(spec.variant_name(), " d=", spec.dimension());
    CHECK(scheme_residual(f, u) <= 1e-10);
    CHECK(is_pareto_monotone(u));
    CHECK(u.values.minCoeff() >= 0.0);
  }
}

TEST_CASE("solution vanishes on the coordinate hyperplanes") {
  const auto u = solve_spec(figure_multimodal_density(), 65);
  for_each_node(u.grid, [&](std::size_t idx, const std::vector<int>& alpha) {
    if (alpha[0] == 0 || alpha[1] == 0) CHECK(u[idx] == 0.0);
  });
}

TEST_CASE("property: comparison of densities carries over to solutions") {
  CounterRng rng(53, "hj-comparison");
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 2;
    const Grid g(d, d == 2 ? 33 : 9);
    GridFunction f(g), h(g);
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      f[i] = rng.uniform() < 0.1 ? 0.0 : 3.0 * rng.uniform();
      h[i] = f[i] + (rng.uniform() < 0.5 ? 0.0 : rng.uniform());
    }
    const auto uf = solve_hj(f);
    const auto uh = solve_hj(h);
    CHECK(((uh.values - uf.values).array() >= -1e-15 * uh.values.array()).all());
  }
}

TEST_CASE("Hölder seminorm examples") {
  const Grid g(2, 11);
  GridFunction c(g);
  c.values.setConstant(0.7);
  CHECK(discrete_holder_seminorm(c, 2) == 0.0);

  GridFunction ramp_field(g);
  for (std::size_t i = 0; i < g.node_count(); ++i) ramp_field[i] = g.node_point(i)[0];
  CHECK(discrete_holder_seminorm(ramp_field, 2) == doctest::Approx(0.1 / std::sqrt(0.1)).epsilon(1e-12));

  for (int n : {17, 65, 257}) {
    CHECK(discrete_holder_seminorm(solve_spec(DensitySpec::unit_cube(2), n), 2) <= 1.0 + 1e-9);
  }
}

TEST_CASE("dynamic programming principle on a discrete sphere") {
  // For y and every node x <= y with |y - x|_inf = r, U(y) >= U(x) + w(x, y)
  // with equality along the optimal direction; w is the exact path value of
  // the straight segment, exact for product densities. Replacing U by U_h
  // moves each side by at most the local node error, and restricting x to
  // nodes loses at most the exact solution's own gap on that node set.
  const int r = 4;
  const auto ramp_spec = DensitySpec::product({ramp(), ramp()});
  const auto bump_spec = DensitySpec::product({bump(), ramp()});
  for (const auto* spec : {&ramp_spec, &bump_spec}) {
    const auto& axes = std::get<ProductDensity>(spec->variant()).axes;
    const auto u = solve_spec(*spec, 129);
    const Grid& g = u.grid;
    auto exact = [&](const std::array<int, 2>& a) {
      return *exact_value_function(*spec, Eigen::Vector2d(g.coordinate(a[0]), g.coordinate(a[1])));
    };
    auto path_value = [&](const std::array<int, 2>& from, const std::array<int, 2>& to) {
      double m = 1.0;
      for (int i = 0; i < 2; ++i) m *= axes[static_cast<std::size_t>(i)].cumulative(g.coordinate(to[i])) -
                                       axes[static_cast<std::size_t>(i)].cumulative(g.coordinate(from[i]));
      return std::sqrt(std::max(0.0, m));
    };
    auto at = [&](const std::array<int, 2>& a) { return u[g.linear_index({a[0], a[1]})]; };
    CounterRng rng(54, "hj-dpp");
    for (int trial = 0; trial < 60; ++trial) {
      const std::array<int, 2> y{r + 1 + static_cast<int>(testing::draw_index(rng, 128 - r - 1)),
                                 r + 1 + static_cast<int>(testing::draw_index(rng, 128 - r - 1))};
      double local = 0.0;
      for (int i = y[0] - r; i <= y[0]; ++i) {
        for (int j = y[1] - r; j <= y[1]; ++j) local = std::max(local, std::abs(at({i, j}) - exact({i, j})));
      }
      double best_h = 0.0, best_exact = 0.0;
      for (int i = y[0] - r; i <= y[0]; ++i) {
        for (int j = y[1] - r; j <= y[1]; ++j) {
          if (std::max(y[0] - i, y[1] - j) != r) continue;
          const double w = path_value({i, j}, y);
          best_h = std::max(best_h, at({i, j}) + w);
          best_exact = std::max(best_exact, exact({i, j}) + w);
        }
      }
      const double sphere_gap = exact(y) - best_exact;
      CHECK(sphere_gap >= -1e-14);
      CHECK(std::abs(at(y) - best_h) <= 2.0 * local + sphere_gap + 1e-14);
    }
  }
}

TEST_CASE("dynamic programming principle for the uniform density") {
  const int r = 4;
  const auto u = solve_spec(DensitySpec::unit_cube(2), 129);
  const Grid& g = u.grid;
  auto exact = [&](int i, int j) { return std::sqrt(g.coordinate(i) * g.coordinate(j)); };
  CounterRng rng(55, "hj-dpp-uniform");
  for (int trial = 0; trial < 60; ++trial) {
    const int yi = r + 1 + static_cast<int>(testing::draw_index(rng, 128 - r - 1));
    const int yj = r + 1 + static_cast<int>(testing::draw_index(rng, 128 - r - 1));
    double local = 0.0, best_h = 0.0, best_exact = 0.0;
    for (int i = yi - r; i <= yi; ++i) {
      for (int j = yj - r; j <= yj; ++j) {
        const double uh = u[g.linear_index({i, j})];
        local = std::max(local, std::abs(uh - exact(i, j)));
        if (std::max(yi - i, yj - j) != r) continue;
        const double w = std::sqrt((g.coordinate(yi) - g.coordinate(i)) * (g.coordinate(yj) - g.coordinate(j)));
        best_h = std::max(best_h, uh + w);
        best_exact = std::max(best_exact, exact(i, j) + w);
      }
    }
    const double sphere_gap = exact(yi, yj) - best_exact;
    CHECK(sphere_gap >= -1e-14);
    CHECK(std::abs(u[g.linear_index({yi, yj})] - best_h) <= 2.0 * local + sphere_gap + 1e-14);
  }
}
