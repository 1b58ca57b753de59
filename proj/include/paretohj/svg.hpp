#ifndef PARETOHJ_SVG_HPP
#define PARETOHJ_SVG_HPP

#include <string>
#include <vector>

#include "paretohj/core.hpp"
#include "paretohj/level_sets.hpp"
#include "paretohj/nds.hpp"

namespace paretohj {

/// Staircase through the points of one front: the boundary of the region
/// dominating some front member, clipped to [0,1]^2.
Polyline front_staircase(const PointCloud& cloud, const std::vector<std::size_t>& members);

struct FigureOptions {
  int size_px = 600;
  bool draw_points = false;  // worth it only for small n
  std::string title;         // emitted as an SVG <title>, not drawn
};

/// Unit square, staircases for the listed fronts and the given contours.
/// Output depends only on the inputs, so re-runs are byte-identical.
std::string render_figure(const PointCloud& cloud, const ParetoRanking& ranking,
                          const std::vector<int>& fronts, const std::vector<LevelSet>& contours,
                          const FigureOptions& options = {});

}  // namespace paretohj

#endif  // PARETOHJ_SVG_HPP
