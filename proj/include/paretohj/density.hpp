#ifndef PARETOHJ_DENSITY_HPP
#define PARETOHJ_DENSITY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "paretohj/core.hpp"
#include "paretohj/rng.hpp"

namespace paretohj {

/// Uniform density on the box [lo, hi] inside [0,1]^d.
struct UniformBox {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

/// Uniform density on a simple polygon in [0,1]^2 (vertices in order, not
/// repeated at the end). Smooth regions are passed as fine polygons.
struct UniformRegion {
  std::vector<Eigen::Vector2d> polygon;
  double area = 0.0;  // filled by the factory
};

/// Constant on each of the L^d half-open cells [k/L, (k+1)/L); cell values
/// row-major with the last axis fastest. The closed top face belongs to the
/// last cell. Cells need not integrate to 1, so f = 0 is expressible.
struct PiecewiseConstant {
  int resolution = 1;
  std::vector<double> cell_values;
};

/// Continuous piecewise-linear density on [0,1].
struct PiecewiseLinear1d {
  std::vector<double> knots;   // 0 = t_0 < ... < t_m = 1
  std::vector<double> values;  // f(t_j) >= 0
  std::vector<double> cdf;     // F(t_j), filled by the factory

  double evaluate(double t) const;
  double cumulative(double t) const;
  /// Closed-form inverse of the CDF on the segment containing u.
  double inverse_cdf(double u) const;
};

/// f(x) = prod_i f_i(x_i).
struct ProductDensity {
  std::vector<PiecewiseLinear1d> axes;
};

/// Isotropic Gaussian mixture restricted to [0,1]^d and renormalised by
/// `mass`, its total mass inside the cube.
struct GaussianMixture {
  std::vector<double> weights;
  std::vector<Eigen::VectorXd> means;
  std::vector<double> sigmas;
  double mass = 1.0;
};

using DensityVariant =
    std::variant<UniformBox, UniformRegion, PiecewiseConstant, ProductDensity, GaussianMixture>;

/// Bounded density with support in [0,1]^d, together with a known upper
/// bound on its values used as the rejection-sampling envelope.
class DensitySpec {
 public:
  static DensitySpec uniform_box(Eigen::VectorXd lo, Eigen::VectorXd hi);
  static DensitySpec unit_cube(int dimension);
  static DensitySpec uniform_region(std::vector<Eigen::Vector2d> polygon);
  static DensitySpec piecewise_constant(int dimension, int resolution, std::vector<double> cells);
  static DensitySpec product(std::vector<PiecewiseLinear1d> axes);
  static DensitySpec gaussian_mixture(int dimension, std::vector<double> weights,
                                      std::vector<Eigen::VectorXd> means,
                                      std::vector<double> sigmas);

  int dimension() const { return dimension_; }
  double sup_bound() const { return sup_bound_; }
  const DensityVariant& variant() const { return variant_; }
  std::string variant_name() const;

  /// Replace the envelope, e.g. from a user file. Must stay positive.
  void set_sup_bound(double bound);

  /// True when f jumps inside the cube (piecewise-constant cells that are
  /// not all equal), so the uniqueness theory for the Pareto-monotone
  /// solution does not apply.
  bool is_discontinuous() const;

  bool is_product_form() const;

 private:
  DensitySpec(int dimension, DensityVariant v, double sup_bound)
      : dimension_(dimension), variant_(std::move(v)), sup_bound_(sup_bound) {}

  int dimension_;
  DensityVariant variant_;
  double sup_bound_;
};

/// f(x); zero outside [0,1]^d.
double evaluate(const DensitySpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x);

struct SampleStats {
  std::size_t proposals = 0;
  std::size_t accepted = 0;
  double acceptance_rate() const {
    return proposals == 0 ? 1.0 : static_cast<double>(accepted) / static_cast<double>(proposals);
  }
};

/// n i.i.d. draws, reproducible for a fixed seed. Product densities use
/// per-axis inverse CDFs; everything else rejection-samples against
/// sup_bound over [0,1]^d. Throws std::runtime_error if the acceptance rate
/// falls below 1e-3 or a value above sup_bound is seen.
PointCloud sample(const DensitySpec& spec, std::size_t n, std::uint64_t seed,
                  SampleStats* stats = nullptr);
/// Same, drawing from an explicit stream.
PointCloud sample(const DensitySpec& spec, std::size_t n, CounterRng rng,
                  SampleStats* stats = nullptr);

/// Closed-form value function U(x) = prod_i (int_0^{x_i} f_i)^(1/d) for
/// product-form specs; empty for the other variants.
std::optional<double> exact_value_function(const DensitySpec& spec,
                                           const Eigen::Ref<const Eigen::VectorXd>& x);

/// Integral of f over [0,1]^d: exact for box/region/cells/product/mixture
/// (the mixture integral is its stored mass normalisation, i.e. 1).
/// For checking, see quadrature_mass.
double total_mass(const DensitySpec& spec);

/// Composite midpoint rule with `cells_per_axis` cells per axis. Product
/// specs integrate each axis separately.
double quadrature_mass(const DensitySpec& spec, int cells_per_axis);

/// JSON: {"variant": ..., "dimension": d, <parameters>, "sup_bound": M}.
std::string to_json(const DensitySpec& spec);
DensitySpec density_from_json(const std::string& text);
DensitySpec load_density(const std::string& path);

/// A smooth star-shaped region used for the uniform-region figure.
DensitySpec figure_region_density();
/// Three-mode stand-in for the multi-modal figure density.
DensitySpec figure_multimodal_density();

}  // namespace paretohj

#endif  // PARETOHJ_DENSITY_HPP
