#include "paretohj/core.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

namespace paretohj {

PointCloud::PointCloud(int dimension) : dimension_(dimension) {
  if (dimension < 1) throw std::invalid_argument("cloud dimension must be positive");
}

PointCloud::PointCloud(int dimension, std::vector<double> row_major_coords)
    : dimension_(dimension), data_(std::move(row_major_coords)) {
  if (dimension < 1) throw std::invalid_argument("cloud dimension must be positive");
  if (data_.size() % static_cast<std::size_t>(dimension) != 0) {
    throw std::invalid_argument("coordinate count is not a multiple of the dimension");
  }
  if (!std::all_of(data_.begin(), data_.end(), [](double c) { return std::isfinite(c); })) {
    throw std::invalid_argument("point coordinates must be finite");
  }
}

PointCloud PointCloud::subset(const std::vector<std::size_t>& indices) const {
  PointCloud out(dimension_);
  out.data_.reserve(indices.size() * static_cast<std::size_t>(dimension_));
  for (std::size_t i : indices) {
    const double* p = data_.data() + i * static_cast<std::size_t>(dimension_);
    out.data_.insert(out.data_.end(), p, p + dimension_);
  }
  return out;
}

bool PointCloud::is_distinct() const {
  const std::size_t n = size();
  const auto d = static_cast<std::size_t>(dimension_);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto row = [&](std::size_t i) { return data_.begin() + static_cast<std::ptrdiff_t>(i * d); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(row(a), row(a) + dimension_, row(b), row(b) + dimension_);
  });
  for (std::size_t k = 1; k < n; ++k) {
    if (std::equal(row(order[k - 1]), row(order[k - 1]) + dimension_, row(order[k]))) return false;
  }
  return true;
}

PointCloud make_cloud(int dimension, std::initializer_list<std::initializer_list<double>> points) {
  std::vector<double> data;
  for (const auto& p : points) {
    if (static_cast<int>(p.size()) != dimension) {
      throw std::invalid_argument("point dimension does not match cloud dimension");
    }
    data.insert(data.end(), p.begin(), p.end());
  }
  return PointCloud(dimension, std::move(data));
}

void write_cloud(std::ostream& out, const PointCloud& cloud) {
  out << "# d=" << cloud.dimension() << " n=" << cloud.size() << '\n';
  char buf[32];
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (int a = 0; a < cloud.dimension(); ++a) {
      if (a > 0) out << ',';
      std::snprintf(buf, sizeof buf, "%.17g", cloud.coord(i, a));
      out << buf;
    }
    out << '\n';
  }
}

namespace {

std::vector<double> parse_row(const std::string& line, std::size_t line_no) {
  std::vector<double> row;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t end = line.find(',', pos);
    if (end == std::string::npos) end = line.size();
    std::string field = line.substr(pos, end - pos);
    const auto first = field.find_first_not_of(" \t\r");
    const auto last = field.find_last_not_of(" \t\r");
    if (first == std::string::npos) {
      throw std::invalid_argument("empty coordinate on line " + std::to_string(line_no));
    }
    field = field.substr(first, last - first + 1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
      throw std::invalid_argument("bad coordinate '" + field + "' on line " +
                                  std::to_string(line_no));
    }
    row.push_back(value);
    pos = end + 1;
  }
  return row;
}

}  // namespace

PointCloud read_cloud(std::istream& in) {
  std::string line;
  std::vector<double> data;
  int dimension = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line[line.find_first_not_of(" \t")] == '#') {
      // "# d=3 ..." pins the dimension of an otherwise empty file.
      const auto at = line.find("d=");
      if (at != std::string::npos && dimension == 0 && data.empty()) {
        dimension = std::atoi(line.c_str() + at + 2);
      }
      continue;
    }
    auto row = parse_row(line, line_no);
    if (data.empty() && (dimension == 0 || dimension == static_cast<int>(row.size()))) {
      dimension = static_cast<int>(row.size());
    } else if (static_cast<int>(row.size()) != dimension) {
      throw std::invalid_argument("line " + std::to_string(line_no) + " has " +
                                  std::to_string(row.size()) + " coordinates, expected " +
                                  std::to_string(dimension));
    }
    data.insert(data.end(), row.begin(), row.end());
  }
  return PointCloud(dimension > 0 ? dimension : 2, std::move(data));
}

void save_cloud(const std::string& path, const PointCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_cloud(out, cloud);
}

PointCloud load_cloud(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open point cloud " + path);
  return read_cloud(in);
}

}  // namespace paretohj
