#ifndef PARETOHJ_NDS_HPP
#define PARETOHJ_NDS_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "paretohj/core.hpp"
#include "paretohj/grid.hpp"

namespace paretohj {

/// Pareto ranks (1-based) and the fronts they induce.
///
/// Chains are multiset chains under the componentwise order: a point q
/// precedes p when q <= p and either q != p or q was inserted before p. For
/// distinct clouds this is the usual strict order; with duplicates each copy
/// adds one to the chain length.
struct ParetoRanking {
  std::vector<int> ranks;
  std::vector<std::vector<std::size_t>> fronts;  // fronts[k-1]: ascending indices of rank k
  int max_rank = 0;

  bool operator==(const ParetoRanking&) const = default;
};

/// Builds fronts and max_rank from per-point ranks.
ParetoRanking ranking_from_ranks(std::vector<int> ranks);

/// Reference sort: repeatedly strip the non-dominated points. Any d.
ParetoRanking nds_peel(const PointCloud& cloud);

/// O(n log n) sort for d = 2: sweep by (x, y, index) and binary-search the
/// smallest last-y per chain length.
ParetoRanking nds_fast_2d(const PointCloud& cloud);

/// Lexicographic sweep that bisects on the rank, scanning one partial front
/// per probe. Quadratic in the worst case; used for d != 2.
ParetoRanking nds_chain_dp(const PointCloud& cloud);

/// Fastest exact sort for the cloud's dimension.
ParetoRanking nds_sort(const PointCloud& cloud);

/// Length of the longest chain; 0 for an empty cloud.
int longest_chain_length(const PointCloud& cloud);

/// Longest chain among points p with p <= z componentwise.
template <typename Derived>
int longest_chain_below(const PointCloud& cloud, const Eigen::DenseBase<Derived>& z) {
  if (z.size() != cloud.dimension()) {
    throw std::invalid_argument("longest_chain_below: query point has wrong dimension");
  }
  std::vector<std::size_t> below;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (leq(cloud.point(i), z)) below.push_back(i);
  }
  return longest_chain_length(cloud.subset(below));
}

/// Empirical rank field u_n on grid nodes.
struct RankField {
  GridFunction values;
  std::size_t clamped = 0;  // samples outside [0,1]^d, clamped to the cube
};

/// u_n(z) = longest chain among samples <= z, evaluated at every node by
/// binning each sample into the lowest node dominating it and taking running
/// maxima of ranks along each axis.
RankField rank_field(const PointCloud& cloud, const ParetoRanking& ranking, const Grid& grid);
RankField rank_field(const PointCloud& cloud, const Grid& grid);

/// "index,rank" lines, 0-based indices.
void write_ranking(std::ostream& out, const ParetoRanking& ranking);
/// JSON array of index arrays, one per front.
std::string fronts_to_json(const ParetoRanking& ranking);

}  // namespace paretohj

#endif  // PARETOHJ_NDS_HPP
