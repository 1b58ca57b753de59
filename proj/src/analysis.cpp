#include "paretohj/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace paretohj {

double known_cd(int d) {
  if (d == 1) return 1.0;
  if (d == 2) return 2.0;
  throw std::invalid_argument("c_d is not known in closed form for d = " + std::to_string(d) +
                              "; pass an estimate");
}

double estimate_cd(int d, std::size_t n, std::uint64_t seed) {
  const auto cloud = sample(DensitySpec::unit_cube(d), n, seed);
  return static_cast<double>(longest_chain_length(cloud)) *
         std::pow(static_cast<double>(n), -1.0 / d);
}

std::vector<int> equally_spaced_fronts(int max_rank, int count) {
  std::vector<int> out;
  if (max_rank <= 0 || count <= 0) return out;
  const int step = (max_rank + count - 1) / count;
  for (int k = 1; k * step <= max_rank && static_cast<int>(out.size()) < count; ++k) {
    out.push_back(k * step);
  }
  return out;
}

double front_level(int rank, std::size_t n, int d, double cd, double offset) {
  return std::pow(static_cast<double>(n), -1.0 / d) * (rank - offset) / cd;
}

ComparisonReport compare(const PointCloud& cloud, const ParetoRanking& ranking,
                         const GridFunction& solution, double cd, const CompareOptions& options) {
  const Grid& g = solution.grid;
  if (g.dimension() != cloud.dimension()) {
    throw std::invalid_argument("compare: cloud and solution dimensions differ");
  }
  ComparisonReport report;
  report.n = cloud.size();
  report.d = cloud.dimension();
  report.cd = cd;
  const double scale = report.n == 0 ? 0.0 : std::pow(static_cast<double>(report.n), -1.0 / report.d);

  const RankField field = rank_field(cloud, ranking, g);
  report.clamped = field.clamped;
  report.sup_norm_error = ((scale * field.values.values) - cd * solution.values).cwiseAbs().maxCoeff();

  if (report.d != 2 || options.fronts.empty()) return report;
  for (int k : options.fronts) {
    if (k < 1 || k > ranking.max_rank) continue;
    const auto& members = ranking.fronts[static_cast<std::size_t>(k - 1)];
    const double level = front_level(k, report.n, report.d, cd, options.level_offset);
    const LevelSet contour = extract_level_set(solution, level);
    if (contour.polylines.empty() || members.empty()) continue;
    double total = 0.0;
    for (std::size_t i : members) {
      total += distance_to_level_set(Eigen::Vector2d(cloud.coord(i, 0), cloud.coord(i, 1)), contour);
    }
    report.per_front.push_back({k, level, members.size(), total / static_cast<double>(members.size())});
  }
  return report;
}

PointCloud draw_noise(const NoiseSpec& noise, std::size_t n, std::uint64_t seed) {
  if (!(noise.radius >= 0.0)) throw std::invalid_argument("noise radius must be nonnegative");
  const auto unit = sample(noise.shape, n, CounterRng(seed, "perturbation-noise"));
  std::vector<double> coords(unit.data());
  for (double& c : coords) c = noise.radius * (2.0 * c - 1.0);
  return PointCloud(unit.dimension(), std::move(coords));
}

PointCloud perturb(const PointCloud& cloud, const PointCloud& noise, double delta) {
  if (cloud.dimension() != noise.dimension() || cloud.size() != noise.size()) {
    throw std::invalid_argument("perturb: noise does not match cloud");
  }
  std::vector<double> coords(cloud.data());
  const auto& y = noise.data();
  for (std::size_t k = 0; k < coords.size(); ++k) coords[k] += delta * y[k];
  return PointCloud(cloud.dimension(), std::move(coords));
}

StabilityTable stability_experiment(const DensitySpec& spec, const NoiseSpec& noise,
                                    const std::vector<double>& deltas, std::size_t n,
                                    std::uint64_t seed, int nodes_per_axis) {
  if (noise.shape.dimension() != spec.dimension()) {
    throw std::invalid_argument("stability: noise and density dimensions differ");
  }
  const int d = spec.dimension();
  const Grid grid(d, nodes_per_axis);
  const auto x = sample(spec, n, seed);
  const auto y = draw_noise(noise, n, seed);
  const RankField base = rank_field(x, grid);
  const double scale = std::pow(static_cast<double>(n), -1.0 / d);

  StabilityTable table;
  for (double delta : deltas) {
    if (!(delta >= 0.0)) throw std::invalid_argument("stability: delta must be nonnegative");
    const RankField moved = rank_field(perturb(x, y, delta), grid);
    const double gap = (moved.values.values - base.values.values).cwiseAbs().maxCoeff();
    table.rows.push_back({delta, scale * gap, moved.clamped});
  }
  return table;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::string to_json(const ComparisonReport& report) {
  nlohmann::json j;
  j["n"] = report.n;
  j["d"] = report.d;
  j["cd"] = report.cd;
  j["sup_norm_error"] = report.sup_norm_error;
  j["clamped"] = report.clamped;
  auto fronts = nlohmann::json::array();
  for (const auto& f : report.per_front) {
    fronts.push_back(
        {{"rank", f.rank}, {"level", f.level}, {"points", f.points}, {"mean_distance", f.mean_distance}});
  }
  j["per_front"] = fronts;
  return j.dump(2);
}

std::string to_json(const StabilityTable& table) {
  auto rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"delta", r.delta}, {"c_delta", r.c_delta}, {"clamped", r.clamped}});
  }
  return nlohmann::json{{"rows", rows}}.dump(2);
}

}  // namespace paretohj
