#ifndef PARETOHJ_ANALYSIS_HPP
#define PARETOHJ_ANALYSIS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "paretohj/core.hpp"
#include "paretohj/density.hpp"
#include "paretohj/grid.hpp"
#include "paretohj/level_sets.hpp"
#include "paretohj/nds.hpp"

namespace paretohj {

/// c_1 = 1 and c_2 = 2 are the only values known in closed form.
double known_cd(int d);

/// n^(-1/d) times the longest chain of n fresh uniform samples on [0,1]^d.
double estimate_cd(int d, std::size_t n, std::uint64_t seed);

/// Ranks k * ceil(max_rank / count) for k = 1, 2, ... while <= max_rank.
std::vector<int> equally_spaced_fronts(int max_rank, int count);

struct FrontDeviation {
  int rank = 0;
  double level = 0.0;  // value of U whose contour is compared with the front
  std::size_t points = 0;
  double mean_distance = 0.0;
};

struct ComparisonReport {
  std::size_t n = 0;
  int d = 0;
  double cd = 0.0;
  double sup_norm_error = 0.0;  // max over nodes |n^(-1/d) u_n - c_d U_h|
  std::size_t clamped = 0;
  std::vector<FrontDeviation> per_front;
};

struct CompareOptions {
  std::vector<int> fronts;    // ranks whose distance to the matching contour is reported
  double level_offset = 0.0;  // compare front k with c_d U = n^(-1/d) (k - offset)
};

/// Front k is compared with the contour c_d U_h = n^(-1/d) (k - offset); a
/// front whose contour is empty on the grid is left out of per_front.
/// Per-front distances need d = 2; the sup-norm part works in any d.
ComparisonReport compare(const PointCloud& cloud, const ParetoRanking& ranking,
                         const GridFunction& solution, double cd, const CompareOptions& options = {});

/// Contour level of U_h matched with front k.
double front_level(int rank, std::size_t n, int d, double cd, double offset = 0.0);

/// Perturbation Y = radius * (2 S - 1) with S drawn from `shape` on [0,1]^d,
/// so Y is supported in the sup-norm ball of the given radius.
struct NoiseSpec {
  DensitySpec shape;
  double radius = 1.0;
};

/// Z_i = X_i + delta * Y_i.
PointCloud perturb(const PointCloud& cloud, const PointCloud& noise, double delta);
PointCloud draw_noise(const NoiseSpec& noise, std::size_t n, std::uint64_t seed);

struct StabilityRow {
  double delta = 0.0;
  double c_delta = 0.0;  // n^(-1/d) max over nodes |u_n^delta - u_n|
  std::size_t clamped = 0;
};

struct StabilityTable {
  std::vector<StabilityRow> rows;
};

/// For each delta, compares the rank fields of X and X + delta Y on a shared
/// grid. The same noise draw is reused across deltas.
StabilityTable stability_experiment(const DensitySpec& spec, const NoiseSpec& noise,
                                    const std::vector<double>& deltas, std::size_t n,
                                    std::uint64_t seed, int nodes_per_axis = 257);

double median(std::vector<double> values);

/// Runs body(0..count-1) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

std::string to_json(const ComparisonReport& report);
std::string to_json(const StabilityTable& table);

}  // namespace paretohj

#endif  // PARETOHJ_ANALYSIS_HPP
