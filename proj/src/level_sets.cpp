#include "paretohj/level_sets.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace paretohj {

namespace {

struct Segment {
  std::uint64_t a;
  std::uint64_t b;
};

// Edge keys: 2 * node + 0 for the edge towards +x (axis 0), + 1 towards +y.
constexpr std::uint64_t edge_key(std::size_t node, int dir) {
  return 2 * static_cast<std::uint64_t>(node) + static_cast<std::uint64_t>(dir);
}

}  // namespace

std::size_t LevelSet::vertex_count() const {
  std::size_t n = 0;
  for (const auto& p : polylines) n += p.size();
  return n;
}

LevelSet extract_level_set(const GridFunction& u, double level) {
  const Grid& g = u.grid;
  if (g.dimension() != 2) throw std::invalid_argument("level sets need a 2-d grid");
  const int n = g.nodes_per_axis();
  const std::size_t sx = g.stride(0);
  const std::size_t sy = g.stride(1);
  auto inside = [&](std::size_t idx) { return u[idx] >= level; };

  std::unordered_map<std::uint64_t, Eigen::Vector2d> vertex;
  auto crossing = [&](std::size_t from, int dir) {
    const std::uint64_t key = edge_key(from, dir);
    if (!vertex.count(key)) {
      const std::size_t to = from + (dir == 0 ? sx : sy);
      const double a = u[from];
      const double b = u[to];
      const double t = (level - a) / (b - a);
      const auto alpha = g.multi_index(from);
      Eigen::Vector2d p(g.coordinate(alpha[0]), g.coordinate(alpha[1]));
      p[dir] += t * g.spacing();
      vertex.emplace(key, p);
    }
    return key;
  };

  std::vector<Segment> segments;
  for (int i = 0; i + 1 < n; ++i) {
    for (int j = 0; j + 1 < n; ++j) {
      const std::size_t c0 = static_cast<std::size_t>(i) * sx + static_cast<std::size_t>(j) * sy;
      const std::size_t c1 = c0 + sx;       // (i+1, j)
      const std::size_t c2 = c0 + sx + sy;  // (i+1, j+1)
      const std::size_t c3 = c0 + sy;       // (i, j+1)
      const bool s0 = inside(c0), s1 = inside(c1), s2 = inside(c2), s3 = inside(c3);
      if (s0 == s1 && s1 == s2 && s2 == s3) continue;
      std::uint64_t bottom = 0, right = 0, top = 0, left = 0;
      if (s0 != s1) bottom = crossing(c0, 0);
      if (s1 != s2) right = crossing(c1, 1);
      if (s3 != s2) top = crossing(c3, 0);
      if (s0 != s3) left = crossing(c0, 1);
      const int crossed = (s0 != s1) + (s1 != s2) + (s3 != s2) + (s0 != s3);
      if (crossed == 4) {
        const double centre = 0.25 * (u[c0] + u[c1] + u[c2] + u[c3]);
        if ((centre >= level) == s0) {
          // c0 and c2 connect through the centre; cut off c1 and c3.
          segments.push_back({bottom, right});
          segments.push_back({top, left});
        } else {
          segments.push_back({left, bottom});
          segments.push_back({right, top});
        }
        continue;
      }
      std::uint64_t ends[2];
      int k = 0;
      if (s0 != s1) ends[k++] = bottom;
      if (s1 != s2) ends[k++] = right;
      if (s3 != s2) ends[k++] = top;
      if (s0 != s3) ends[k++] = left;
      segments.push_back({ends[0], ends[1]});
    }
  }

  // Stitch segments into polylines; every edge vertex joins at most two.
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> incident;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    incident[segments[s].a].push_back(s);
    incident[segments[s].b].push_back(s);
  }
  std::vector<bool> used(segments.size(), false);
  LevelSet out;
  out.level = level;
  auto walk = [&](std::size_t first, std::uint64_t start) {
    Polyline line{vertex.at(start)};
    std::uint64_t at = start;
    std::size_t seg = first;
    while (true) {
      used[seg] = true;
      at = segments[seg].a == at ? segments[seg].b : segments[seg].a;
      line.push_back(vertex.at(at));
      std::size_t next = segments.size();
      for (std::size_t cand : incident.at(at)) {
        if (!used[cand]) next = cand;
      }
      if (next == segments.size()) break;
      seg = next;
    }
    out.polylines.push_back(std::move(line));
  };
  // Open contours first (start at an end of degree one), in segment order so
  // that output is deterministic.
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    for (std::uint64_t end : {segments[s].a, segments[s].b}) {
      if (!used[s] && incident.at(end).size() == 1) walk(s, end);
    }
  }
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (!used[s]) walk(s, segments[s].a);
  }
  return out;
}

std::vector<LevelSet> extract_level_sets(const GridFunction& u, const std::vector<double>& levels) {
  if (u.grid.dimension() != 2) throw std::invalid_argument("level sets need a 2-d grid");
  std::vector<LevelSet> out;
  out.reserve(levels.size());
  for (double level : levels) out.push_back(extract_level_set(u, level));
  return out;
}

double point_segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                              const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

double distance_to_level_set(const Eigen::Vector2d& p, const LevelSet& set) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& line : set.polylines) {
    if (line.size() == 1) best = std::min(best, (p - line[0]).norm());
    for (std::size_t k = 0; k + 1 < line.size(); ++k) {
      best = std::min(best, point_segment_distance(p, line[k], line[k + 1]));
    }
  }
  return best;
}

}  // namespace paretohj
