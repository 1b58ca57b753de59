#include "paretohj/grid.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "paretohj/hjsolver.hpp"

namespace paretohj {

Grid::Grid(int dimension, int nodes_per_axis) : dimension_(dimension), nodes_(nodes_per_axis) {
  if (dimension < 1) throw std::invalid_argument("grid dimension must be positive");
  if (nodes_per_axis < 2) throw std::invalid_argument("grid needs at least 2 nodes per axis");
  strides_.assign(static_cast<std::size_t>(dimension), 1);
  for (int a = dimension - 2; a >= 0; --a) {
    strides_[static_cast<std::size_t>(a)] =
        strides_[static_cast<std::size_t>(a) + 1] * static_cast<std::size_t>(nodes_per_axis);
  }
  count_ = strides_[0] * static_cast<std::size_t>(nodes_per_axis);
}

std::size_t Grid::linear_index(const std::vector<int>& alpha) const {
  if (static_cast<int>(alpha.size()) != dimension_) {
    throw std::invalid_argument("multi-index has wrong dimension");
  }
  std::size_t idx = 0;
  for (int a = 0; a < dimension_; ++a) {
    const int v = alpha[static_cast<std::size_t>(a)];
    if (v < 0 || v >= nodes_) throw std::out_of_range("multi-index outside grid");
    idx += static_cast<std::size_t>(v) * strides_[static_cast<std::size_t>(a)];
  }
  return idx;
}

std::vector<int> Grid::multi_index(std::size_t linear) const {
  std::vector<int> alpha(static_cast<std::size_t>(dimension_));
  for (int a = 0; a < dimension_; ++a) {
    alpha[static_cast<std::size_t>(a)] = static_cast<int>(linear / strides_[static_cast<std::size_t>(a)]);
    linear %= strides_[static_cast<std::size_t>(a)];
  }
  return alpha;
}

Eigen::VectorXd Grid::node_point(std::size_t linear) const {
  const auto alpha = multi_index(linear);
  Eigen::VectorXd x(dimension_);
  for (int a = 0; a < dimension_; ++a) x[a] = coordinate(alpha[static_cast<std::size_t>(a)]);
  return x;
}

int Grid::lowest_dominating(double x) const {
  const int last = nodes_ - 1;
  if (!(x > 0.0)) return 0;
  if (x >= 1.0) return last;
  int alpha = std::clamp(static_cast<int>(std::ceil(x * last)), 0, last);
  // Settle rounding so that the answer agrees with coordinate() exactly.
  while (alpha > 0 && coordinate(alpha - 1) >= x) --alpha;
  while (alpha < last && coordinate(alpha) < x) ++alpha;
  return alpha;
}

void write_grid_function(std::ostream& out, const GridFunction& u) {
  const Grid& g = u.grid;
  out << "d=" << g.dimension() << " N=" << g.nodes_per_axis() << '\n';
  const auto run = static_cast<std::size_t>(g.nodes_per_axis());
  char buf[32];
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", u[i]);
    out << buf << ((i + 1) % run == 0 ? '\n' : ',');
  }
}

GridFunction read_grid_function(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::invalid_argument("grid file is empty");
  int d = 0;
  int n = 0;
  if (std::sscanf(header.c_str(), "d=%d N=%d", &d, &n) != 2) {
    throw std::invalid_argument("grid file header must read \"d=<d> N=<N>\"");
  }
  Grid g(d, n);
  GridFunction u(g);
  std::size_t filled = 0;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t pos = 0;
    while (pos < line.size()) {
      std::size_t end = line.find(',', pos);
      if (end == std::string::npos) end = line.size();
      const char* first = line.data() + pos;
      const char* last = line.data() + end;
      while (last > first && (last[-1] == '\r' || last[-1] == ' ')) --last;
      if (last > first) {
        if (filled >= g.node_count()) throw std::invalid_argument("grid file has too many values");
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last) throw std::invalid_argument("bad value in grid file");
        u[filled++] = v;
      }
      pos = end + 1;
    }
  }
  if (filled != g.node_count()) {
    throw std::invalid_argument("grid file has " + std::to_string(filled) + " values, expected " +
                                std::to_string(g.node_count()));
  }
  return u;
}

void save_grid_function(const std::string& path, const GridFunction& u) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_grid_function(out, u);
}

GridFunction load_grid_function(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open grid file " + path);
  return read_grid_function(in);
}

GridFunction sample_density_to_grid(const DensitySpec& spec, const Grid& grid) {
  if (spec.dimension() != grid.dimension()) {
    throw std::invalid_argument("density and grid dimensions differ");
  }
  GridFunction f(grid);
  Eigen::VectorXd x(grid.dimension());
  for_each_node(grid, [&](std::size_t idx, const std::vector<int>& alpha) {
    for (int a = 0; a < grid.dimension(); ++a) x[a] = grid.coordinate(alpha[static_cast<std::size_t>(a)]);
    f[idx] = evaluate(spec, x);
  });
  return f;
}

}  // namespace paretohj
