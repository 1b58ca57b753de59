#ifndef PARETOHJ_GRID_HPP
#define PARETOHJ_GRID_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace paretohj {

/// Regular grid on [0,1]^d with N nodes per axis, spacing 1/(N-1).
/// Linear node indices are row-major: the last axis varies fastest, so
/// increasing linear index is a sweep order compatible with the
/// componentwise order on multi-indices.
class Grid {
 public:
  Grid(int dimension, int nodes_per_axis);

  int dimension() const { return dimension_; }
  int nodes_per_axis() const { return nodes_; }
  double spacing() const { return 1.0 / static_cast<double>(nodes_ - 1); }
  std::size_t node_count() const { return count_; }

  /// Coordinate of multi-index component alpha; exact at both ends.
  double coordinate(int alpha) const {
    return static_cast<double>(alpha) / static_cast<double>(nodes_ - 1);
  }
  std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }

  std::size_t linear_index(const std::vector<int>& alpha) const;
  std::vector<int> multi_index(std::size_t linear) const;
  Eigen::VectorXd node_point(std::size_t linear) const;

  /// Smallest alpha with x <= coordinate(alpha), clamped into [0, N-1].
  int lowest_dominating(double x) const;

  bool operator==(const Grid& other) const {
    return dimension_ == other.dimension_ && nodes_ == other.nodes_;
  }

 private:
  int dimension_;
  int nodes_;
  std::size_t count_;
  std::vector<std::size_t> strides_;
};

/// Scalar field sampled on the nodes of a Grid.
template <typename Scalar>
struct BasicGridFunction {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Grid grid;
  Vector values;

  explicit BasicGridFunction(const Grid& g) : grid(g), values(Vector::Zero(static_cast<Eigen::Index>(g.node_count()))) {}
  BasicGridFunction(const Grid& g, Vector v) : grid(g), values(std::move(v)) {
    if (static_cast<std::size_t>(values.size()) != grid.node_count()) {
      throw std::invalid_argument("grid function size does not match grid");
    }
  }

  Scalar& operator[](std::size_t i) { return values[static_cast<Eigen::Index>(i)]; }
  const Scalar& operator[](std::size_t i) const { return values[static_cast<Eigen::Index>(i)]; }

  template <typename Other>
  BasicGridFunction<Other> cast() const {
    return BasicGridFunction<Other>(grid, values.template cast<Other>());
  }
};

using GridFunction = BasicGridFunction<double>;

/// Visits every node with its multi-index in linear (lexicographic) order.
template <typename Visitor>
void for_each_node(const Grid& grid, Visitor&& visit) {
  const int d = grid.dimension();
  const int n = grid.nodes_per_axis();
  std::vector<int> alpha(static_cast<std::size_t>(d), 0);
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    visit(i, static_cast<const std::vector<int>&>(alpha));
    for (int a = d - 1; a >= 0; --a) {
      if (++alpha[static_cast<std::size_t>(a)] < n) break;
      alpha[static_cast<std::size_t>(a)] = 0;
    }
  }
}

/// Multilinear interpolation; x is clamped into [0,1]^d first.
template <typename Scalar, typename Derived>
Scalar interpolate(const BasicGridFunction<Scalar>& u, const Eigen::DenseBase<Derived>& x) {
  const Grid& g = u.grid;
  const int d = g.dimension();
  if (x.size() != d) throw std::invalid_argument("interpolation point has wrong dimension");
  const int last = g.nodes_per_axis() - 1;
  std::vector<int> base(static_cast<std::size_t>(d));
  std::vector<double> frac(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    const double t = std::clamp(static_cast<double>(x.derived().coeff(a)), 0.0, 1.0) * last;
    int b = std::min(static_cast<int>(std::floor(t)), last - 1);
    base[static_cast<std::size_t>(a)] = b;
    frac[static_cast<std::size_t>(a)] = t - b;
  }
  Scalar acc(0);
  for (unsigned corner = 0; corner < (1u << d); ++corner) {
    double w = 1.0;
    std::size_t idx = 0;
    for (int a = 0; a < d; ++a) {
      const bool up = (corner >> a) & 1u;
      const double fa = frac[static_cast<std::size_t>(a)];
      w *= up ? fa : 1.0 - fa;
      idx += static_cast<std::size_t>(base[static_cast<std::size_t>(a)] + (up ? 1 : 0)) * g.stride(a);
    }
    if (w != 0.0) acc += Scalar(w) * u[idx];
  }
  return acc;
}

/// Text format: a "d=<d> N=<N>" header line, then the values in row-major
/// order, one line per run of the last axis, 17 significant digits.
void write_grid_function(std::ostream& out, const GridFunction& u);
GridFunction read_grid_function(std::istream& in);
void save_grid_function(const std::string& path, const GridFunction& u);
GridFunction load_grid_function(const std::string& path);

}  // namespace paretohj

#endif  // PARETOHJ_GRID_HPP
