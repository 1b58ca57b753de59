#include "paretohj/density.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "paretohj/rng.hpp"

namespace paretohj {

namespace {

using json = nlohmann::json;

bool inside_unit_cube(const Eigen::Ref<const Eigen::VectorXd>& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x[i] >= 0.0 && x[i] <= 1.0)) return false;
  }
  return true;
}

double shoelace_area(const std::vector<Eigen::Vector2d>& poly) {
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    twice += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * std::abs(twice);
}

// Even-odd ray casting.
bool in_polygon(const std::vector<Eigen::Vector2d>& poly, double x, double y) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const auto& a = poly[i];
    const auto& b = poly[j];
    if ((a.y() > y) != (b.y() > y)) {
      const double cross = (b.x() - a.x()) * (y - a.y()) / (b.y() - a.y()) + a.x();
      if (x < cross) inside = !inside;
    }
  }
  return inside;
}

// Mass of N(mu, sigma^2) on [0,1].
double gaussian_unit_mass(double mu, double sigma) {
  const double s = sigma * std::numbers::sqrt2;
  return 0.5 * (std::erf((1.0 - mu) / s) - std::erf(-mu / s));
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

double PiecewiseLinear1d::evaluate(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) return 0.0;
  auto it = std::upper_bound(knots.begin(), knots.end(), t);
  std::size_t j = it == knots.begin() ? 0 : static_cast<std::size_t>(it - knots.begin()) - 1;
  if (j + 1 >= knots.size()) return values.back();
  const double w = (t - knots[j]) / (knots[j + 1] - knots[j]);
  return values[j] + w * (values[j + 1] - values[j]);
}

double PiecewiseLinear1d::cumulative(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return cdf.back();
  auto it = std::upper_bound(knots.begin(), knots.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - knots.begin()) - 1;
  const double tau = t - knots[j];
  const double slope = (values[j + 1] - values[j]) / (knots[j + 1] - knots[j]);
  return cdf[j] + values[j] * tau + 0.5 * slope * tau * tau;
}

double PiecewiseLinear1d::inverse_cdf(double u) const {
  u = std::clamp(u, 0.0, cdf.back());
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  std::size_t j = it == cdf.begin() ? 0 : static_cast<std::size_t>(it - cdf.begin()) - 1;
  if (j + 1 >= knots.size()) return knots.back();
  const double h = knots[j + 1] - knots[j];
  const double f0 = values[j];
  const double slope = (values[j + 1] - f0) / h;
  const double r = u - cdf[j];
  // Root of slope/2 tau^2 + f0 tau - r = 0 in the cancellation-free form.
  const double disc = std::max(0.0, f0 * f0 + 2.0 * slope * r);
  const double denom = f0 + std::sqrt(disc);
  const double tau = denom > 0.0 ? 2.0 * r / denom : 0.0;
  return knots[j] + std::clamp(tau, 0.0, h);
}

DensitySpec DensitySpec::uniform_box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
  require(lo.size() == hi.size() && lo.size() >= 1, "uniform box: lo/hi dimension mismatch");
  double volume = 1.0;
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    require(lo[i] >= 0.0 && hi[i] <= 1.0 && lo[i] < hi[i],
            "uniform box must satisfy 0 <= lo < hi <= 1 in every axis");
    volume *= hi[i] - lo[i];
  }
  const int d = static_cast<int>(lo.size());
  return DensitySpec(d, UniformBox{std::move(lo), std::move(hi)}, 1.0 / volume);
}

DensitySpec DensitySpec::unit_cube(int dimension) {
  require(dimension >= 1, "dimension must be positive");
  return uniform_box(Eigen::VectorXd::Zero(dimension), Eigen::VectorXd::Ones(dimension));
}

DensitySpec DensitySpec::uniform_region(std::vector<Eigen::Vector2d> polygon) {
  require(polygon.size() >= 3, "uniform region needs at least three vertices");
  for (const auto& v : polygon) {
    require(v.x() >= 0.0 && v.x() <= 1.0 && v.y() >= 0.0 && v.y() <= 1.0,
            "uniform region vertices must lie in [0,1]^2");
  }
  const double area = shoelace_area(polygon);
  require(area > 0.0, "uniform region has zero area");
  return DensitySpec(2, UniformRegion{std::move(polygon), area}, 1.0 / area);
}

DensitySpec DensitySpec::piecewise_constant(int dimension, int resolution,
                                            std::vector<double> cells) {
  require(dimension >= 1 && resolution >= 1, "piecewise constant: bad dimension or resolution");
  std::size_t expected = 1;
  for (int i = 0; i < dimension; ++i) expected *= static_cast<std::size_t>(resolution);
  require(cells.size() == expected, "piecewise constant: expected " + std::to_string(expected) +
                                        " cell values, got " + std::to_string(cells.size()));
  for (double v : cells) {
    require(std::isfinite(v) && v >= 0.0, "piecewise constant: cell values must be nonnegative");
  }
  const double sup = *std::max_element(cells.begin(), cells.end());
  return DensitySpec(dimension, PiecewiseConstant{resolution, std::move(cells)}, sup);
}

DensitySpec DensitySpec::product(std::vector<PiecewiseLinear1d> axes) {
  require(!axes.empty(), "product density needs at least one axis");
  double sup = 1.0;
  for (auto& axis : axes) {
    require(axis.knots.size() >= 2 && axis.knots.size() == axis.values.size(),
            "product axis: knots and values must have equal length >= 2");
    require(axis.knots.front() == 0.0 && axis.knots.back() == 1.0,
            "product axis: knots must start at 0 and end at 1");
    for (std::size_t j = 0; j + 1 < axis.knots.size(); ++j) {
      require(axis.knots[j] < axis.knots[j + 1], "product axis: knots must increase strictly");
    }
    for (double v : axis.values) {
      require(std::isfinite(v) && v >= 0.0, "product axis: values must be nonnegative");
    }
    axis.cdf.assign(axis.knots.size(), 0.0);
    for (std::size_t j = 0; j + 1 < axis.knots.size(); ++j) {
      axis.cdf[j + 1] = axis.cdf[j] + 0.5 * (axis.values[j] + axis.values[j + 1]) *
                                          (axis.knots[j + 1] - axis.knots[j]);
    }
    require(std::abs(axis.cdf.back() - 1.0) <= 1e-9,
            "product axis: density must integrate to 1 (got " + std::to_string(axis.cdf.back()) +
                ")");
    sup *= *std::max_element(axis.values.begin(), axis.values.end());
  }
  const int d = static_cast<int>(axes.size());
  return DensitySpec(d, ProductDensity{std::move(axes)}, sup);
}

DensitySpec DensitySpec::gaussian_mixture(int dimension, std::vector<double> weights,
                                          std::vector<Eigen::VectorXd> means,
                                          std::vector<double> sigmas) {
  require(dimension >= 1, "dimension must be positive");
  require(!weights.empty() && weights.size() == means.size() && weights.size() == sigmas.size(),
          "gaussian mixture: weights, means and sigmas must have equal nonzero length");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  require(total > 0.0, "gaussian mixture: weights must sum to a positive value");
  double mass = 0.0;
  double peak = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    require(weights[k] >= 0.0, "gaussian mixture: weights must be nonnegative");
    require(sigmas[k] > 0.0, "gaussian mixture: sigmas must be positive");
    require(means[k].size() == dimension, "gaussian mixture: mean has wrong dimension");
    weights[k] /= total;
    double component = weights[k];
    for (int i = 0; i < dimension; ++i) component *= gaussian_unit_mass(means[k][i], sigmas[k]);
    mass += component;
    peak += weights[k] * std::pow(2.0 * std::numbers::pi * sigmas[k] * sigmas[k], -0.5 * dimension);
  }
  require(mass > 1e-12, "gaussian mixture has no mass inside the unit cube");
  return DensitySpec(dimension,
                     GaussianMixture{std::move(weights), std::move(means), std::move(sigmas), mass},
                     peak / mass);
}

std::string DensitySpec::variant_name() const {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, UniformBox>) return "uniform_box";
        if constexpr (std::is_same_v<T, UniformRegion>) return "uniform_region";
        if constexpr (std::is_same_v<T, PiecewiseConstant>) return "piecewise_constant";
        if constexpr (std::is_same_v<T, ProductDensity>) return "product";
        if constexpr (std::is_same_v<T, GaussianMixture>) return "gaussian_mixture";
      },
      variant_);
}

void DensitySpec::set_sup_bound(double bound) {
  require(std::isfinite(bound) && bound > 0.0, "sup_bound must be positive and finite");
  sup_bound_ = bound;
}

bool DensitySpec::is_discontinuous() const {
  const auto* cells = std::get_if<PiecewiseConstant>(&variant_);
  if (!cells) return false;
  const auto& v = cells->cell_values;
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) != v.end();
}

bool DensitySpec::is_product_form() const {
  return std::holds_alternative<UniformBox>(variant_) ||
         std::holds_alternative<ProductDensity>(variant_);
}

double evaluate(const DensitySpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != spec.dimension()) {
    throw std::invalid_argument("evaluate: point dimension does not match density");
  }
  if (!inside_unit_cube(x)) return 0.0;
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, UniformBox>) {
          for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (x[i] < v.lo[i] || x[i] > v.hi[i]) return 0.0;
          }
          return 1.0 / (v.hi - v.lo).prod();
        } else if constexpr (std::is_same_v<T, UniformRegion>) {
          return in_polygon(v.polygon, x[0], x[1]) ? 1.0 / v.area : 0.0;
        } else if constexpr (std::is_same_v<T, PiecewiseConstant>) {
          std::size_t idx = 0;
          for (Eigen::Index i = 0; i < x.size(); ++i) {
            const int cell = std::min(static_cast<int>(std::floor(x[i] * v.resolution)),
                                      v.resolution - 1);
            idx = idx * static_cast<std::size_t>(v.resolution) + static_cast<std::size_t>(cell);
          }
          return v.cell_values[idx];
        } else if constexpr (std::is_same_v<T, ProductDensity>) {
          double f = 1.0;
          for (std::size_t i = 0; i < v.axes.size(); ++i) {
            f *= v.axes[i].evaluate(x[static_cast<Eigen::Index>(i)]);
          }
          return f;
        } else {
          double f = 0.0;
          for (std::size_t k = 0; k < v.weights.size(); ++k) {
            const double s2 = v.sigmas[k] * v.sigmas[k];
            const double r2 = (x - v.means[k]).squaredNorm();
            f += v.weights[k] * std::pow(2.0 * std::numbers::pi * s2, -0.5 * x.size()) *
                 std::exp(-0.5 * r2 / s2);
          }
          return f / v.mass;
        }
      },
      spec.variant());
}

PointCloud sample(const DensitySpec& spec, std::size_t n, std::uint64_t seed, SampleStats* stats) {
  return sample(spec, n, CounterRng(seed, "density-sample"), stats);
}

PointCloud sample(const DensitySpec& spec, std::size_t n, CounterRng rng, SampleStats* stats) {
  if (n == 0) throw std::invalid_argument("sample: n must be at least 1");
  const int d = spec.dimension();
  std::vector<double> coords;
  coords.reserve(n * static_cast<std::size_t>(d));
  SampleStats local;

  if (const auto* prod = std::get_if<ProductDensity>(&spec.variant())) {
    for (std::size_t k = 0; k < n; ++k) {
      for (const auto& axis : prod->axes) coords.push_back(axis.inverse_cdf(rng.uniform()));
    }
    local.proposals = local.accepted = n;
  } else {
    const double envelope = spec.sup_bound();
    Eigen::VectorXd x(d);
    constexpr std::size_t kWarmup = 10000;
    constexpr double kMinAcceptance = 1e-3;
    while (local.accepted < n) {
      for (int i = 0; i < d; ++i) x[i] = rng.uniform();
      const double level = rng.uniform() * envelope;
      const double fx = evaluate(spec, x);
      ++local.proposals;
      if (fx > envelope * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "sample: density value " << fx << " exceeds sup_bound " << envelope;
        throw std::runtime_error(msg.str());
      }
      if (level < fx) {
        coords.insert(coords.end(), x.data(), x.data() + d);
        ++local.accepted;
      }
      if (local.proposals >= kWarmup && local.acceptance_rate() < kMinAcceptance) {
        std::ostringstream msg;
        msg << "sample: rejection acceptance rate " << local.acceptance_rate() << " after "
            << local.proposals << " proposals is below " << kMinAcceptance
            << "; sup_bound " << envelope << " is too loose or the density vanishes";
        throw std::runtime_error(msg.str());
      }
    }
  }
  if (stats) *stats = local;
  return PointCloud(d, std::move(coords));
}

std::optional<double> exact_value_function(const DensitySpec& spec,
                                           const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != spec.dimension()) {
    throw std::invalid_argument("exact_value_function: point dimension does not match density");
  }
  const int d = spec.dimension();
  double mass_below = 1.0;
  if (const auto* box = std::get_if<UniformBox>(&spec.variant())) {
    for (int i = 0; i < d; ++i) {
      const double w = box->hi[i] - box->lo[i];
      mass_below *= std::clamp((x[i] - box->lo[i]) / w, 0.0, 1.0);
    }
  } else if (const auto* prod = std::get_if<ProductDensity>(&spec.variant())) {
    for (int i = 0; i < d; ++i) {
      mass_below *= prod->axes[static_cast<std::size_t>(i)].cumulative(x[i]);
    }
  } else {
    return std::nullopt;
  }
  for (int i = 0; i < d; ++i) {
    if (x[i] <= 0.0) return 0.0;
  }
  return std::pow(mass_below, 1.0 / d);
}

double total_mass(const DensitySpec& spec) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PiecewiseConstant>) {
          const double cell = std::pow(1.0 / v.resolution, spec.dimension());
          return std::accumulate(v.cell_values.begin(), v.cell_values.end(), 0.0) * cell;
        } else if constexpr (std::is_same_v<T, ProductDensity>) {
          double m = 1.0;
          for (const auto& axis : v.axes) m *= axis.cdf.back();
          return m;
        } else {
          return 1.0;
        }
      },
      spec.variant());
}

double quadrature_mass(const DensitySpec& spec, int cells_per_axis) {
  if (cells_per_axis < 1) throw std::invalid_argument("quadrature needs at least one cell");
  const double h = 1.0 / cells_per_axis;
  if (const auto* prod = std::get_if<ProductDensity>(&spec.variant())) {
    double m = 1.0;
    for (const auto& axis : prod->axes) {
      double s = 0.0;
      for (int k = 0; k < cells_per_axis; ++k) s += axis.evaluate((k + 0.5) * h);
      m *= s * h;
    }
    return m;
  }
  const int d = spec.dimension();
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  Eigen::VectorXd x(d);
  double sum = 0.0;
  while (true) {
    for (int i = 0; i < d; ++i) x[i] = (idx[static_cast<std::size_t>(i)] + 0.5) * h;
    sum += evaluate(spec, x);
    int a = d - 1;
    for (; a >= 0; --a) {
      if (++idx[static_cast<std::size_t>(a)] < cells_per_axis) break;
      idx[static_cast<std::size_t>(a)] = 0;
    }
    if (a < 0) break;
  }
  return sum * std::pow(h, d);
}

namespace {

json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd json_vec(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

std::string to_json(const DensitySpec& spec) {
  json j;
  j["variant"] = spec.variant_name();
  j["dimension"] = spec.dimension();
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, UniformBox>) {
          j["lo"] = vec_json(v.lo);
          j["hi"] = vec_json(v.hi);
        } else if constexpr (std::is_same_v<T, UniformRegion>) {
          json poly = json::array();
          for (const auto& p : v.polygon) poly.push_back({p.x(), p.y()});
          j["polygon"] = poly;
        } else if constexpr (std::is_same_v<T, PiecewiseConstant>) {
          j["resolution"] = v.resolution;
          j["cells"] = v.cell_values;
        } else if constexpr (std::is_same_v<T, ProductDensity>) {
          json axes = json::array();
          for (const auto& a : v.axes) axes.push_back({{"knots", a.knots}, {"values", a.values}});
          j["axes"] = axes;
        } else {
          j["weights"] = v.weights;
          json means = json::array();
          for (const auto& m : v.means) means.push_back(vec_json(m));
          j["means"] = means;
          j["sigmas"] = v.sigmas;
          j["mass"] = v.mass;
        }
      },
      spec.variant());
  j["sup_bound"] = spec.sup_bound();
  return j.dump(2);
}

DensitySpec density_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("density JSON is malformed: ") + e.what());
  }
  try {
    require(j.is_object() && j.contains("variant"), "density JSON needs a \"variant\" field");
    const auto variant = j.at("variant").get<std::string>();
    auto spec = [&]() {
      if (variant == "uniform_box") {
        if (!j.contains("lo") && j.contains("dimension")) {
          return DensitySpec::unit_cube(j.at("dimension").get<int>());
        }
        return DensitySpec::uniform_box(json_vec(j.at("lo")), json_vec(j.at("hi")));
      }
      if (variant == "uniform_region") {
        std::vector<Eigen::Vector2d> poly;
        for (const auto& p : j.at("polygon")) {
          require(p.size() == 2, "uniform region vertices must be [x, y] pairs");
          poly.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
        return DensitySpec::uniform_region(std::move(poly));
      }
      if (variant == "piecewise_constant") {
        return DensitySpec::piecewise_constant(j.at("dimension").get<int>(),
                                               j.at("resolution").get<int>(),
                                               j.at("cells").get<std::vector<double>>());
      }
      if (variant == "product") {
        std::vector<PiecewiseLinear1d> axes;
        for (const auto& a : j.at("axes")) {
          PiecewiseLinear1d axis;
          axis.knots = a.at("knots").get<std::vector<double>>();
          axis.values = a.at("values").get<std::vector<double>>();
          axes.push_back(std::move(axis));
        }
        if (j.contains("dimension")) {
          require(j.at("dimension").get<int>() == static_cast<int>(axes.size()),
                  "product density: dimension does not match the number of axes");
        }
        return DensitySpec::product(std::move(axes));
      }
      if (variant == "gaussian_mixture") {
        std::vector<Eigen::VectorXd> means;
        for (const auto& m : j.at("means")) means.push_back(json_vec(m));
        return DensitySpec::gaussian_mixture(j.at("dimension").get<int>(),
                                             j.at("weights").get<std::vector<double>>(),
                                             std::move(means),
                                             j.at("sigmas").get<std::vector<double>>());
      }
      throw std::invalid_argument("unknown density variant \"" + variant + "\"");
    }();
    if (j.contains("dimension")) {
      require(j.at("dimension").get<int>() == spec.dimension(),
              "density JSON: dimension does not match parameters");
    }
    if (j.contains("sup_bound")) spec.set_sup_bound(j.at("sup_bound").get<double>());
    return spec;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("density JSON has bad fields: ") + e.what());
  }
}

DensitySpec load_density(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open density file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return density_from_json(buf.str());
}

DensitySpec figure_region_density() {
  // Three-lobed star around (0.45, 0.5): r(t) = 0.3 (1 + 0.3 cos 3t).
  constexpr int kVertices = 240;
  std::vector<Eigen::Vector2d> poly;
  poly.reserve(kVertices);
  for (int k = 0; k < kVertices; ++k) {
    const double t = 2.0 * std::numbers::pi * k / kVertices;
    const double r = 0.3 * (1.0 + 0.3 * std::cos(3.0 * t + 0.4));
    poly.emplace_back(0.45 + r * std::cos(t), 0.5 + r * std::sin(t));
  }
  return DensitySpec::uniform_region(std::move(poly));
}

DensitySpec figure_multimodal_density() {
  std::vector<Eigen::VectorXd> means{Eigen::Vector2d(0.3, 0.3), Eigen::Vector2d(0.72, 0.4),
                                     Eigen::Vector2d(0.45, 0.75)};
  return DensitySpec::gaussian_mixture(2, {0.4, 0.3, 0.3}, std::move(means), {0.12, 0.10, 0.14});
}

}  // namespace paretohj
