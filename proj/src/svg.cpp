#include "paretohj/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace paretohj {

Polyline front_staircase(const PointCloud& cloud, const std::vector<std::size_t>& members) {
  if (cloud.dimension() != 2) throw std::invalid_argument("staircases need 2-d points");
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(members.size());
  for (std::size_t i : members) pts.emplace_back(cloud.coord(i, 0), cloud.coord(i, 1));
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.x() != b.x() ? a.x() < b.x() : a.y() > b.y();
  });
  Polyline line;
  if (pts.empty()) return line;
  line.emplace_back(pts.front().x(), std::max(1.0, pts.front().y()));
  for (std::size_t k = 0; k < pts.size(); ++k) {
    line.push_back(pts[k]);
    const double next_x = k + 1 < pts.size() ? pts[k + 1].x() : std::max(1.0, pts[k].x());
    line.emplace_back(next_x, pts[k].y());
  }
  return line;
}

namespace {

class SvgWriter {
 public:
  SvgWriter(int size, int margin) : size_(size), margin_(margin) {}

  double px(double x) const { return margin_ + x * size_; }
  double py(double y) const { return margin_ + (1.0 - y) * size_; }

  std::string points(const Polyline& line) const {
    std::string s;
    char buf[64];
    for (const auto& p : line) {
      std::snprintf(buf, sizeof buf, "%s%.3f,%.3f", s.empty() ? "" : " ", px(p.x()), py(p.y()));
      s += buf;
    }
    return s;
  }

 private:
  int size_;
  int margin_;
};

}  // namespace

std::string render_figure(const PointCloud& cloud, const ParetoRanking& ranking,
                          const std::vector<int>& fronts, const std::vector<LevelSet>& contours,
                          const FigureOptions& options) {
  if (cloud.dimension() != 2) throw std::invalid_argument("figures need 2-d points");
  const int margin = 20;
  const int total = options.size_px + 2 * margin;
  SvgWriter w(options.size_px, margin);
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total << "\" height=\"" << total
      << "\" viewBox=\"0 0 " << total << ' ' << total << "\">\n";
  if (!options.title.empty()) out << "<title>" << options.title << "</title>\n";
  out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << options.size_px
      << "\" height=\"" << options.size_px << "\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<defs><clipPath id=\"unit-square\"><rect x=\"" << margin << "\" y=\"" << margin
      << "\" width=\"" << options.size_px << "\" height=\"" << options.size_px
      << "\"/></clipPath></defs>\n<g clip-path=\"url(#unit-square)\">\n";

  if (options.draw_points) {
    out << "<g fill=\"black\">\n";
    char buf[96];
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"2.5\"/>\n",
                    w.px(cloud.coord(i, 0)), w.py(cloud.coord(i, 1)));
      out << buf;
    }
    out << "</g>\n";
  }

  out << "<g fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1\" class=\"fronts\">\n";
  for (int k : fronts) {
    if (k < 1 || k > ranking.max_rank) continue;
    const auto stair = front_staircase(cloud, ranking.fronts[static_cast<std::size_t>(k - 1)]);
    out << "<polyline data-rank=\"" << k << "\" points=\"" << w.points(stair) << "\"/>\n";
  }
  out << "</g>\n";

  out << "<g fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" class=\"level-sets\">\n";
  for (const auto& set : contours) {
    char level[32];
    std::snprintf(level, sizeof level, "%.6g", set.level);
    for (const auto& line : set.polylines) {
      out << "<polyline data-level=\"" << level << "\" points=\"" << w.points(line) << "\"/>\n";
    }
  }
  out << "</g>\n</g>\n</svg>\n";
  return out.str();
}

}  // namespace paretohj
