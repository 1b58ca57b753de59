#include "paretohj/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace paretohj {

int dag_longest_chain(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  if (n == 0) return 0;
  const int d = cloud.dimension();
  std::vector<double> sums(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (int a = 0; a < d; ++a) sums[i] += cloud.coord(i, a);
  }
  // Floating-point addition is monotone, so q <= p implies sum(q) <= sum(p).
  std::vector<std::size_t> topo(n);
  std::iota(topo.begin(), topo.end(), std::size_t{0});
  std::sort(topo.begin(), topo.end(), [&](std::size_t a, std::size_t b) {
    return sums[a] != sums[b] ? sums[a] < sums[b] : a < b;
  });

  std::vector<int> longest(n, 1);
  int best = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t p = topo[k];
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t q = topo[j];
      const bool edge = strictly_less(cloud.point(q), cloud.point(p)) ||
                        (q < p && cloud.point(q) == cloud.point(p));
      if (edge) longest[p] = std::max(longest[p], longest[q] + 1);
    }
    best = std::max(best, longest[p]);
  }
  return best;
}

GridFunction dp_value_function(const GridFunction& f_nodes, int window) {
  if (window < 1) throw std::invalid_argument("dp_value_function: window must be >= 1");
  const Grid& g = f_nodes.grid;
  const int d = g.dimension();
  const double dx = g.spacing();
  const double inv_d = 1.0 / d;

  // All offsets in {0..window}^d except 0, with their step-length factor.
  std::vector<std::vector<int>> offsets;
  std::vector<double> length_factor;
  {
    std::vector<int> o(static_cast<std::size_t>(d), 0);
    while (true) {
      int a = d - 1;
      for (; a >= 0; --a) {
        if (++o[static_cast<std::size_t>(a)] <= window) break;
        o[static_cast<std::size_t>(a)] = 0;
      }
      if (a < 0) break;
      double prod = 1.0;
      for (int v : o) prod *= v * dx;
      offsets.push_back(o);
      length_factor.push_back(std::pow(prod, inv_d));
    }
  }

  GridFunction v(g);
  Eigen::VectorXd mid(d);
  for_each_node(g, [&](std::size_t idx, const std::vector<int>& alpha) {
    if (*std::min_element(alpha.begin(), alpha.end()) == 0) return;
    double best = 0.0;
    for (std::size_t k = 0; k < offsets.size(); ++k) {
      const auto& o = offsets[k];
      std::size_t from = idx;
      bool valid = true;
      for (int a = 0; a < d; ++a) {
        const int b = alpha[static_cast<std::size_t>(a)] - o[static_cast<std::size_t>(a)];
        if (b < 0) {
          valid = false;
          break;
        }
        from -= static_cast<std::size_t>(o[static_cast<std::size_t>(a)]) * g.stride(a);
        mid[a] = (alpha[static_cast<std::size_t>(a)] - 0.5 * o[static_cast<std::size_t>(a)]) * dx;
      }
      if (!valid) continue;
      double gain = 0.0;
      if (length_factor[k] > 0.0) {
        const double fm = std::max(0.0, interpolate(f_nodes, mid));
        gain = std::pow(fm, inv_d) * length_factor[k];
      }
      best = std::max(best, v[from] + gain);
    }
    v[idx] = best;
  });
  return v;
}

}  // namespace paretohj
