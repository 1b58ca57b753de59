#include "paretohj/nds.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>

#include <json.hpp>

namespace paretohj {

namespace {

// Lexicographic on coordinates, insertion index as the final tie-break. A
// linear extension of the multiset chain order.
std::vector<std::size_t> lexicographic_order(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  const int d = cloud.dimension();
  const double* data = cloud.data().data();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double* pa = data + a * static_cast<std::size_t>(d);
    const double* pb = data + b * static_cast<std::size_t>(d);
    for (int k = 0; k < d; ++k) {
      if (pa[k] != pb[k]) return pa[k] < pb[k];
    }
    return a < b;
  });
  return order;
}

}  // namespace

ParetoRanking ranking_from_ranks(std::vector<int> ranks) {
  ParetoRanking out;
  out.max_rank = ranks.empty() ? 0 : *std::max_element(ranks.begin(), ranks.end());
  out.fronts.resize(static_cast<std::size_t>(out.max_rank));
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    out.fronts[static_cast<std::size_t>(ranks[i] - 1)].push_back(i);
  }
  out.ranks = std::move(ranks);
  return out;
}

ParetoRanking nds_peel(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  const auto d = static_cast<std::size_t>(cloud.dimension());
  const double* data = cloud.data().data();
  // q precedes p in the multiset chain order.
  auto precedes = [&](std::size_t q, std::size_t p) {
    const double* a = data + q * d;
    const double* b = data + p * d;
    bool equal = true;
    for (std::size_t k = 0; k < d; ++k) {
      if (a[k] > b[k]) return false;
      equal = equal && a[k] == b[k];
    }
    return !equal || q < p;
  };

  std::vector<int> ranks(n, 0);
  std::vector<std::size_t> remaining(n);
  std::iota(remaining.begin(), remaining.end(), std::size_t{0});
  int rank = 0;
  while (!remaining.empty()) {
    ++rank;
    std::vector<std::size_t> rest;
    std::vector<std::size_t> front;
    for (std::size_t p : remaining) {
      bool dominated = false;
      for (std::size_t q : remaining) {
        if (q != p && precedes(q, p)) {
          dominated = true;
          break;
        }
      }
      (dominated ? rest : front).push_back(p);
    }
    for (std::size_t p : front) ranks[p] = rank;
    remaining = std::move(rest);
  }
  return ranking_from_ranks(std::move(ranks));
}

ParetoRanking nds_fast_2d(const PointCloud& cloud) {
  if (cloud.dimension() != 2) {
    throw std::invalid_argument("nds_fast_2d requires dimension 2, got " +
                                std::to_string(cloud.dimension()));
  }
  const auto order = lexicographic_order(cloud);
  std::vector<int> ranks(cloud.size(), 0);
  // tails[k]: smallest final y over chains of length k + 1 seen so far.
  std::vector<double> tails;
  for (std::size_t p : order) {
    const double y = cloud.coord(p, 1);
    const auto it = std::upper_bound(tails.begin(), tails.end(), y);
    const auto k = static_cast<std::size_t>(it - tails.begin());
    if (k == tails.size()) {
      tails.push_back(y);
    } else {
      tails[k] = std::min(tails[k], y);
    }
    ranks[p] = static_cast<int>(k) + 1;
  }
  return ranking_from_ranks(std::move(ranks));
}

ParetoRanking nds_chain_dp(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  const int d = cloud.dimension();
  const auto order = lexicographic_order(cloud);
  std::vector<int> ranks(n, 0);
  if (d == 1) {
    for (std::size_t k = 0; k < n; ++k) ranks[order[k]] = static_cast<int>(k) + 1;
    return ranking_from_ranks(std::move(ranks));
  }

  // A point of rank r below p implies points of every rank r' < r below p,
  // so the rank of p is found by bisection, scanning one front per probe.
  // Fronts hold axes 1..d-1 only: in sweep order axis 0 is already <=.
  const std::size_t width = static_cast<std::size_t>(d - 1);
  std::vector<std::vector<double>> front_coords;
  std::vector<double> here(width);
  auto has_point_below = [&](int r) {
    const auto& f = front_coords[static_cast<std::size_t>(r - 1)];
    for (std::size_t j = 0; j < f.size(); j += width) {
      bool below = true;
      for (std::size_t a = 0; a < width; ++a) below &= f[j + a] <= here[a];
      if (below) return true;
    }
    return false;
  };
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t a = 0; a < width; ++a) here[a] = cloud.coord(order[k], static_cast<int>(a) + 1);
    int lo = 0;
    int hi = static_cast<int>(front_coords.size());
    while (lo < hi) {
      const int mid = lo + (hi - lo + 1) / 2;
      if (has_point_below(mid)) lo = mid;
      else hi = mid - 1;
    }
    if (lo == static_cast<int>(front_coords.size())) front_coords.emplace_back();
    auto& f = front_coords[static_cast<std::size_t>(lo)];
    f.insert(f.end(), here.begin(), here.end());
    ranks[order[k]] = lo + 1;
  }
  return ranking_from_ranks(std::move(ranks));
}

ParetoRanking nds_sort(const PointCloud& cloud) {
  return cloud.dimension() == 2 ? nds_fast_2d(cloud) : nds_chain_dp(cloud);
}

int longest_chain_length(const PointCloud& cloud) {
  if (cloud.empty()) return 0;
  return nds_sort(cloud).max_rank;
}

RankField rank_field(const PointCloud& cloud, const ParetoRanking& ranking, const Grid& grid) {
  if (cloud.dimension() != grid.dimension()) {
    throw std::invalid_argument("rank_field: cloud and grid dimensions differ");
  }
  if (ranking.ranks.size() != cloud.size()) {
    throw std::invalid_argument("rank_field: ranking does not belong to this cloud");
  }
  RankField out{GridFunction(grid), 0};
  const int d = grid.dimension();
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    std::size_t idx = 0;
    bool outside = false;
    for (int a = 0; a < d; ++a) {
      const double x = cloud.coord(i, a);
      outside = outside || x < 0.0 || x > 1.0;
      idx += static_cast<std::size_t>(grid.lowest_dominating(x)) * grid.stride(a);
    }
    if (outside) ++out.clamped;
    out.values[idx] = std::max(out.values[idx], static_cast<double>(ranking.ranks[i]));
  }
  // Running maxima along each axis turn per-node ranks into max over the
  // dominated orthant.
  for (int a = 0; a < d; ++a) {
    const std::size_t stride = grid.stride(a);
    for_each_node(grid, [&](std::size_t idx, const std::vector<int>& alpha) {
      if (alpha[static_cast<std::size_t>(a)] > 0) {
        out.values[idx] = std::max(out.values[idx], out.values[idx - stride]);
      }
    });
  }
  return out;
}

RankField rank_field(const PointCloud& cloud, const Grid& grid) {
  return rank_field(cloud, nds_sort(cloud), grid);
}

void write_ranking(std::ostream& out, const ParetoRanking& ranking) {
  for (std::size_t i = 0; i < ranking.ranks.size(); ++i) out << i << ',' << ranking.ranks[i] << '\n';
}

std::string fronts_to_json(const ParetoRanking& ranking) {
  return nlohmann::json(ranking.fronts).dump();
}

}  // namespace paretohj
