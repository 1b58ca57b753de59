#ifndef PARETOHJ_LEVEL_SETS_HPP
#define PARETOHJ_LEVEL_SETS_HPP

#include <vector>

#include <Eigen/Dense>

#include "paretohj/grid.hpp"

namespace paretohj {

using Polyline = std::vector<Eigen::Vector2d>;

/// Contour {u = level} of a 2-d grid function as connected polylines whose
/// vertices lie on grid-cell edges. Closed contours repeat their first vertex.
struct LevelSet {
  double level = 0.0;
  std::vector<Polyline> polylines;

  std::size_t vertex_count() const;
};

/// Marching squares with linear interpolation along cell edges. A node counts
/// as inside when u >= level; saddle cells are resolved by the average of the
/// four corners.
std::vector<LevelSet> extract_level_sets(const GridFunction& u, const std::vector<double>& levels);
LevelSet extract_level_set(const GridFunction& u, double level);

/// Euclidean distance from p to the segment [a, b].
double point_segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                              const Eigen::Vector2d& b);

/// Smallest distance from p to any segment of the level set; +inf if empty.
double distance_to_level_set(const Eigen::Vector2d& p, const LevelSet& set);

}  // namespace paretohj

#endif  // PARETOHJ_LEVEL_SETS_HPP
