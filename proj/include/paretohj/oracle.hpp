#ifndef PARETOHJ_ORACLE_HPP
#define PARETOHJ_ORACLE_HPP

#include "paretohj/core.hpp"
#include "paretohj/grid.hpp"

namespace paretohj {

/// Longest path in the domination DAG (edge q -> p when q precedes p in the
/// multiset chain order), by O(n^2) dynamic programming over the points
/// sorted by coordinate sum. Independent of the nds module; intended for
/// n up to a few thousand.
int dag_longest_chain(const PointCloud& cloud);

/// Lower approximation of the value function by maximising the path energy
/// over monotone lattice paths. Each step moves from beta = alpha - o with
/// 0 <= o_i <= window, o != 0, and earns
///   f(midpoint)^(1/d) * prod_i (o_i dx)^(1/d),
/// with f interpolated multilinearly at the segment midpoint. V = 0 where
/// some alpha_i = 0.
GridFunction dp_value_function(const GridFunction& f_nodes, int window = 8);

}  // namespace paretohj

#endif  // PARETOHJ_ORACLE_HPP
