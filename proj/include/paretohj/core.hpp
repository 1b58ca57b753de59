#ifndef PARETOHJ_CORE_HPP
#define PARETOHJ_CORE_HPP

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace paretohj {

/// A point in R^d. Sample points live in [0,1]^d; query points may not.
using Point = Eigen::VectorXd;

/// Row-major n x d coordinate block backing a PointCloud.
using CoordMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

namespace detail {

template <typename A, typename B>
void check_same_dimension(const Eigen::DenseBase<A>& x, const Eigen::DenseBase<B>& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()));
  }
}

}  // namespace detail

/// Componentwise order: x_i <= y_i for every coordinate.
template <typename A, typename B>
bool leq(const Eigen::DenseBase<A>& x, const Eigen::DenseBase<B>& y) {
  detail::check_same_dimension(x, y);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x.derived().coeff(i) <= y.derived().coeff(i))) return false;
  }
  return true;
}

/// leq(x, y) and x != y.
template <typename A, typename B>
bool strictly_less(const Eigen::DenseBase<A>& x, const Eigen::DenseBase<B>& y) {
  detail::check_same_dimension(x, y);
  bool differs = false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double a = x.derived().coeff(i);
    const double b = y.derived().coeff(i);
    if (!(a <= b)) return false;
    differs = differs || a != b;
  }
  return differs;
}

/// Ordered multiset of points sharing one dimension. Insertion order is kept
/// so that seeded runs reproduce bit for bit.
class PointCloud {
 public:
  using ConstPointMap = Eigen::Map<const Eigen::VectorXd>;
  using ConstCoordMap = Eigen::Map<const CoordMatrix>;

  explicit PointCloud(int dimension = 2);
  PointCloud(int dimension, std::vector<double> row_major_coords);

  int dimension() const { return dimension_; }
  std::size_t size() const { return data_.size() / static_cast<std::size_t>(dimension_); }
  bool empty() const { return data_.empty(); }

  ConstPointMap point(std::size_t i) const {
    return ConstPointMap(data_.data() + i * static_cast<std::size_t>(dimension_), dimension_);
  }
  double coord(std::size_t i, int axis) const {
    return data_[i * static_cast<std::size_t>(dimension_) + static_cast<std::size_t>(axis)];
  }
  ConstCoordMap coords() const {
    return ConstCoordMap(data_.data(), static_cast<Eigen::Index>(size()), dimension_);
  }
  const std::vector<double>& data() const { return data_; }

  template <typename Derived>
  void push_back(const Eigen::DenseBase<Derived>& p) {
    if (p.size() != dimension_) {
      throw std::invalid_argument("point dimension " + std::to_string(p.size()) +
                                  " does not match cloud dimension " + std::to_string(dimension_));
    }
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (!std::isfinite(p.derived().coeff(i))) {
        throw std::invalid_argument("point coordinates must be finite");
      }
    }
    for (Eigen::Index i = 0; i < p.size(); ++i) data_.push_back(p.derived().coeff(i));
  }
  void reserve(std::size_t n) { data_.reserve(n * static_cast<std::size_t>(dimension_)); }

  /// Points whose indices are listed, in the listed order.
  PointCloud subset(const std::vector<std::size_t>& indices) const;

  /// True when no two points coincide in every coordinate.
  bool is_distinct() const;

 private:
  int dimension_;
  std::vector<double> data_;
};

PointCloud make_cloud(int dimension, std::initializer_list<std::initializer_list<double>> points);

/// Text format: one point per line, comma-separated coordinates, optional
/// leading '#' header lines. Coordinates are written with 17 significant
/// digits so that a write/read cycle is exact.
void write_cloud(std::ostream& out, const PointCloud& cloud);
PointCloud read_cloud(std::istream& in);

void save_cloud(const std::string& path, const PointCloud& cloud);
PointCloud load_cloud(const std::string& path);

}  // namespace paretohj

#endif  // PARETOHJ_CORE_HPP
