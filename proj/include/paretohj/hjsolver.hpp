#ifndef PARETOHJ_HJSOLVER_HPP
#define PARETOHJ_HJSOLVER_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "paretohj/density.hpp"
#include "paretohj/grid.hpp"

namespace paretohj {

/// Unique root p >= max(a) of prod_i (p - a_i) = a0.
///
/// The root is returned as max(a) + q with q found directly, which keeps the
/// small differences p - a_i accurate when a0 is tiny relative to max(a).
/// Two dimensions use the closed form with the positive square root written
/// in rationalised form; higher dimensions run a safeguarded Newton iteration
/// for q on [0, a0^(1/d)], starting at the midpoint.
template <typename Scalar>
Scalar solve_p(Scalar a0, std::span<const Scalar> a) {
  using std::abs;
  using std::pow;
  using std::sqrt;
  if (a.empty()) throw std::invalid_argument("solve_p needs at least one neighbour value");
  if (!(a0 >= Scalar(0)) || !std::isfinite(static_cast<double>(a0))) {
    throw std::invalid_argument("solve_p: a0 must be finite and nonnegative");
  }
  Scalar m = a[0];
  for (Scalar ai : a) {
    if (!(ai >= Scalar(0)) || !std::isfinite(static_cast<double>(ai))) {
      throw std::invalid_argument("solve_p: neighbour values must be finite and nonnegative");
    }
    m = std::max(m, ai);
  }
  if (a0 == Scalar(0)) return m;

  const std::size_t d = a.size();
  if (d == 1) return a[0] + a0;
  if (d == 2) {
    const Scalar gap = abs(a[0] - a[1]);
    return m + Scalar(2) * a0 / (gap + sqrt(gap * gap + Scalar(4) * a0));
  }

  // g(q) = prod (q + b_i) - a0 with b_i = m - a_i >= 0; g is increasing and
  // convex on q >= 0, g(0) <= 0 <= g(a0^(1/d)).
  Scalar lo(0);
  Scalar hi = pow(a0, Scalar(1) / Scalar(d));
  auto eval = [&](Scalar q, Scalar& slope) {
    Scalar prod(1);
    slope = Scalar(0);
    for (Scalar ai : a) {
      const Scalar term = q + (m - ai);
      slope = slope * term + prod;
      prod *= term;
    }
    return prod - a0;
  };
  Scalar q = Scalar(0.5) * (lo + hi);
  const Scalar tol = Scalar(1e-12);
  for (int iter = 0; iter < 100; ++iter) {
    Scalar slope;
    const Scalar g = eval(q, slope);
    if (g == Scalar(0)) return m + q;
    if (g > Scalar(0)) {
      hi = q;
    } else {
      lo = q;
    }
    Scalar next = slope > Scalar(0) ? q - g / slope : Scalar(0.5) * (lo + hi);
    if (!(next > lo && next < hi)) next = Scalar(0.5) * (lo + hi);
    const Scalar step = abs(next - q);
    q = next;
    if (step <= tol * q || hi - lo <= tol * q) {
      // One more Newton step: the iteration is already in its quadratic regime.
      const Scalar g2 = eval(q, slope);
      if (slope > Scalar(0)) {
        const Scalar refined = q - g2 / slope;
        if (refined >= lo && refined <= hi) q = refined;
      }
      return m + q;
    }
  }
  throw std::logic_error("solve_p: root iteration did not converge");
}

template <typename Scalar>
Scalar solve_p(Scalar a0, std::initializer_list<Scalar> a) {
  return solve_p<Scalar>(a0, std::span<const Scalar>(a.begin(), a.size()));
}

enum class SweepOrder {
  Lexicographic,  ///< linear node order
  Wavefront,      ///< by level alpha_1 + ... + alpha_d; nodes of one level are independent
};

namespace detail {

template <typename Scalar>
void require_nonnegative(const BasicGridFunction<Scalar>& f) {
  for (Eigen::Index i = 0; i < f.values.size(); ++i) {
    const Scalar v = f.values[i];
    if (!(v >= Scalar(0)) || !std::isfinite(static_cast<double>(v))) {
      throw std::invalid_argument("density node values must be finite and nonnegative (node " +
                                  std::to_string(i) + ")");
    }
  }
}

template <typename Scalar>
Scalar rhs_scale(const Grid& g) {
  const int d = g.dimension();
  const Scalar dx = Scalar(1) / Scalar(g.nodes_per_axis() - 1);
  Scalar s(1);
  for (int i = 0; i < d; ++i) s *= dx / Scalar(d);
  return s;
}

/// Scheme update at one interior node; returns 0 on the boundary.
template <typename Scalar>
Scalar update_node(const BasicGridFunction<Scalar>& f, const BasicGridFunction<Scalar>& u,
                   std::size_t idx, const std::vector<int>& alpha, Scalar scale,
                   std::vector<Scalar>& neighbours) {
  const int d = f.grid.dimension();
  for (int i = 0; i < d; ++i) {
    if (alpha[static_cast<std::size_t>(i)] == 0) return Scalar(0);
  }
  for (int i = 0; i < d; ++i) neighbours[static_cast<std::size_t>(i)] = u[idx - f.grid.stride(i)];
  return solve_p<Scalar>(scale * f[idx], std::span<const Scalar>(neighbours));
}

}  // namespace detail

/// Upwind single-pass solver for U_{x_1}...U_{x_d} = f / d^d, U = 0 where
/// some alpha_i = 0. Every node is visited once, after all its backward
/// neighbours; both sweep orders give bit-identical results. The wavefront
/// order splits each level across `threads` workers.
template <typename Scalar>
BasicGridFunction<Scalar> solve_hj(const BasicGridFunction<Scalar>& f,
                                   SweepOrder order = SweepOrder::Lexicographic,
                                   unsigned threads = 1) {
  detail::require_nonnegative(f);
  const Grid& g = f.grid;
  const int d = g.dimension();
  const Scalar scale = detail::rhs_scale<Scalar>(g);
  BasicGridFunction<Scalar> u(g);

  if (order == SweepOrder::Lexicographic) {
    std::vector<Scalar> nb(static_cast<std::size_t>(d));
    for_each_node(g, [&](std::size_t idx, const std::vector<int>& alpha) {
      u[idx] = detail::update_node(f, u, idx, alpha, scale, nb);
    });
    return u;
  }

  const int n = g.nodes_per_axis();
  const std::size_t levels = static_cast<std::size_t>(d) * static_cast<std::size_t>(n - 1) + 1;
  std::vector<std::vector<std::size_t>> by_level(levels);
  for_each_node(g, [&](std::size_t idx, const std::vector<int>& alpha) {
    std::size_t s = 0;
    for (int a : alpha) s += static_cast<std::size_t>(a);
    by_level[s].push_back(idx);
  });

  auto run_range = [&](const std::vector<std::size_t>& nodes, std::size_t begin, std::size_t end) {
    std::vector<Scalar> nb(static_cast<std::size_t>(d));
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t idx = nodes[k];
      u[idx] = detail::update_node(f, u, idx, g.multi_index(idx), scale, nb);
    }
  };
  threads = std::max(1u, threads);
  for (const auto& nodes : by_level) {
    if (threads == 1 || nodes.size() < 512) {
      run_range(nodes, 0, nodes.size());
      continue;
    }
    std::vector<std::jthread> workers;
    const std::size_t chunk = (nodes.size() + threads - 1) / threads;
    for (std::size_t begin = 0; begin < nodes.size(); begin += chunk) {
      workers.emplace_back(run_range, std::cref(nodes), begin, std::min(nodes.size(), begin + chunk));
    }
  }
  return u;
}

/// Largest relative violation of prod_i (U_alpha - U_{alpha-e_i}) = dx^d f_alpha / d^d
/// over interior nodes. Nodes with f_alpha = 0 contribute the absolute
/// value of the product.
template <typename Scalar>
double scheme_residual(const BasicGridFunction<Scalar>& f, const BasicGridFunction<Scalar>& u) {
  if (!(f.grid == u.grid)) throw std::invalid_argument("residual: grids differ");
  const Grid& g = f.grid;
  const int d = g.dimension();
  const Scalar scale = detail::rhs_scale<Scalar>(g);
  double worst = 0.0;
  for_each_node(g, [&](std::size_t idx, const std::vector<int>& alpha) {
    for (int a : alpha) {
      if (a == 0) return;
    }
    Scalar prod(1);
    for (int i = 0; i < d; ++i) prod *= u[idx] - u[idx - g.stride(i)];
    const Scalar rhs = scale * f[idx];
    const double r = rhs > Scalar(0) ? static_cast<double>(std::abs((prod - rhs) / rhs))
                                     : static_cast<double>(std::abs(prod));
    worst = std::max(worst, r);
  });
  return worst;
}

/// Max over axis-adjacent node pairs of |u(a) - u(b)| / |a - b|^(1/exponent_dim).
template <typename Scalar>
double discrete_holder_seminorm(const BasicGridFunction<Scalar>& u, int exponent_dim) {
  if (exponent_dim < 1) throw std::invalid_argument("Holder exponent dimension must be positive");
  const Grid& g = u.grid;
  const double denom = std::pow(g.spacing(), 1.0 / exponent_dim);
  double worst = 0.0;
  for_each_node(g, [&](std::size_t idx, const std::vector<int>& alpha) {
    for (int i = 0; i < g.dimension(); ++i) {
      if (alpha[static_cast<std::size_t>(i)] == 0) continue;
      const double diff = static_cast<double>(std::abs(u[idx] - u[idx - g.stride(i)]));
      worst = std::max(worst, diff / denom);
    }
  });
  return worst;
}

/// True when u(alpha) >= u(alpha - e_i) at every node and axis.
template <typename Scalar>
bool is_pareto_monotone(const BasicGridFunction<Scalar>& u) {
  const Grid& g = u.grid;
  bool ok = true;
  for_each_node(g, [&](std::size_t idx, const std::vector<int>& alpha) {
    for (int i = 0; i < g.dimension() && ok; ++i) {
      if (alpha[static_cast<std::size_t>(i)] > 0 && u[idx] < u[idx - g.stride(i)]) ok = false;
    }
  });
  return ok;
}

/// Node-point evaluation f_alpha = f(alpha * dx).
GridFunction sample_density_to_grid(const DensitySpec& spec, const Grid& grid);

}  // namespace paretohj

#endif  // PARETOHJ_HJSOLVER_HPP
