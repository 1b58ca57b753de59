#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "paretohj/analysis.hpp"
#include "paretohj/density.hpp"
#include "paretohj/hjsolver.hpp"
#include "paretohj/nds.hpp"
#include "paretohj/oracle.hpp"
#include "paretohj/svg.hpp"

namespace paretohj::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

/// Bad input from the user; maps to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// JSON config reader: top-level keys set global options, nested objects
/// keyed by a subcommand name set that subcommand's options.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    json j;
    for (const CLI::Option* opt : app->get_options({})) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string name = opt->get_lnames()[0];
      if (opt->count() > 0) {
        j[name] = opt->as<std::string>();
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    return j.dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    try {
      j = json::parse(input);
    } catch (const json::parse_error& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    collect(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void collect(const json& j, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        auto nested = parents;
        nested.push_back(key);
        collect(value, nested, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

struct Globals {
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

/// Where a density comes from: a JSON file or a built-in name.
struct DensityChoice {
  std::string file;
  std::string builtin = "uniform";
  int dimension = 2;

  DensitySpec load() const {
    if (!file.empty()) return load_density(file);
    if (builtin == "uniform") return DensitySpec::unit_cube(dimension);
    if (dimension != 2) throw UsageError("built-in density \"" + builtin + "\" is two-dimensional");
    if (builtin == "region") return figure_region_density();
    if (builtin == "multimodal") return figure_multimodal_density();
    throw UsageError("unknown built-in density \"" + builtin + "\"");
  }
};

void add_density_options(CLI::App* cmd, DensityChoice& choice) {
  cmd->add_option("--density", choice.file, "Density spec JSON file")->check(CLI::ExistingFile);
  cmd->add_option("--builtin", choice.builtin, "Built-in density when no file is given")
      ->check(CLI::IsMember({"uniform", "region", "multimodal"}));
  cmd->add_option("--dim", choice.dimension, "Dimension of the built-in uniform density")
      ->check(CLI::Range(1, 16));
}

fs::path resolve(const Globals& g, const std::string& path, const std::string& fallback) {
  const fs::path p = path.empty() ? fs::path(fallback) : fs::path(path);
  return p.is_absolute() ? p : fs::path(g.out_dir) / p;
}

/// Writes through a sibling temporary file renamed into place, so a failure
/// never leaves a partial output behind.
void write_atomically(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".partial";
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
      body(out);
      out.flush();
      if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
    }
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw;
  }
}

PointCloud load_cloud_checked(const std::string& path) {
  if (!fs::exists(path)) throw UsageError("point cloud file " + path + " does not exist");
  return load_cloud(path);
}

double resolve_cd(int d, const std::optional<double>& cd) {
  if (cd) {
    if (!(*cd > 0.0)) throw UsageError("--cd must be positive");
    return *cd;
  }
  if (d <= 2) return known_cd(d);
  throw UsageError("c_d is unknown in closed form for d = " + std::to_string(d) +
                   "; pass --cd (for example from an estimate_cd run)");
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::ostringstream s;
  for (std::size_t i = 0; i < values.size(); ++i) s << (i ? "," : "") << values[i];
  return s.str();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------- sample

struct SampleArgs {
  DensityChoice density;
  std::size_t n = 1000;
  std::string out;
};

int cmd_sample(const Globals& g, const SampleArgs& a, std::ostream& out) {
  const auto spec = a.density.load();
  SampleStats stats;
  const auto cloud = sample(spec, a.n, g.seed, &stats);
  const auto path = resolve(g, a.out, "cloud.txt");
  write_atomically(path, [&](std::ostream& s) { write_cloud(s, cloud); });
  out << "wrote " << cloud.size() << " points to " << path.string() << '\n'
      << "n=" << cloud.size() << " seed=" << g.seed << " acceptance_rate=" << fmt(stats.acceptance_rate())
      << '\n';
  return kSuccess;
}

// ------------------------------------------------------------------ sort

struct SortArgs {
  std::string input;
  std::optional<int> dim;
  bool oracle = false;
  std::string out;
  std::string fronts_json;
};

int cmd_sort(const Globals& g, const SortArgs& a, std::ostream& out) {
  const auto cloud = load_cloud_checked(a.input);
  if (a.dim && *a.dim != cloud.dimension()) {
    throw UsageError("cloud has dimension " + std::to_string(cloud.dimension()) + " but --dim is " +
                     std::to_string(*a.dim));
  }
  const auto start = std::chrono::steady_clock::now();
  const auto ranking = nds_sort(cloud);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto path = resolve(g, a.out, "ranking.txt");
  write_atomically(path, [&](std::ostream& s) { write_ranking(s, ranking); });
  if (!a.fronts_json.empty()) {
    write_atomically(resolve(g, a.fronts_json, "fronts.json"),
                     [&](std::ostream& s) { s << fronts_to_json(ranking) << '\n'; });
  }
  out << "sorted " << cloud.size() << " points (d=" << cloud.dimension() << ") into " << ranking.max_rank
      << " fronts in " << fmt(seconds) << " s\n";
  if (a.oracle) {
    const auto reference = nds_peel(cloud);
    std::size_t differing = 0;
    for (std::size_t i = 0; i < cloud.size(); ++i) differing += ranking.ranks[i] != reference.ranks[i];
    if (differing == 0 && ranking == reference) {
      out << "oracle: identical\n";
    } else {
      out << "oracle: DIFFERENT (" << differing << " ranks differ)\n";
      return kInternalFailure;
    }
  }
  return kSuccess;
}

// ----------------------------------------------------------------- solve

struct SolveArgs {
  DensityChoice density;
  int nodes = 257;
  std::string order = "lexicographic";
  std::string out;
};

int cmd_solve(const Globals& g, const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const auto spec = a.density.load();
  if (spec.is_discontinuous()) {
    err << "warning: density is discontinuous; uniqueness theory not covered for this solution\n";
  }
  const Grid grid(spec.dimension(), a.nodes);
  const auto f = sample_density_to_grid(spec, grid);
  const auto order = a.order == "wavefront" ? SweepOrder::Wavefront : SweepOrder::Lexicographic;
  const auto u = solve_hj(f, order, g.threads);
  const auto path = resolve(g, a.out, "solution.txt");
  write_atomically(path, [&](std::ostream& s) { write_grid_function(s, u); });
  out << "wrote U_h on " << grid.node_count() << " nodes (d=" << grid.dimension() << ", N=" << a.nodes
      << ") to " << path.string() << '\n'
      << "residual_max=" << fmt(scheme_residual(f, u)) << '\n'
      << "holder_seminorm=" << fmt(discrete_holder_seminorm(u, spec.dimension())) << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------- figure

struct FigureArgs {
  std::string cloud;
  std::string solution;
  DensityChoice density;
  int nodes = 257;
  int fronts = 15;
  bool all_fronts = false;
  std::optional<double> cd;
  double offset = 0.0;
  bool points = false;
  std::string title;
  std::string out;
  std::string report;
};

int cmd_figure(const Globals& g, const FigureArgs& a, std::ostream& out) {
  const auto cloud = load_cloud_checked(a.cloud);
  if (cloud.empty()) throw UsageError("point cloud " + a.cloud + " is empty");
  if (cloud.dimension() != 2) {
    throw UsageError("figures need a 2-d cloud; got d = " + std::to_string(cloud.dimension()));
  }
  const double cd = resolve_cd(2, a.cd);
  GridFunction u = [&] {
    if (!a.solution.empty()) {
      if (!fs::exists(a.solution)) throw UsageError("solution file " + a.solution + " does not exist");
      return load_grid_function(a.solution);
    }
    const auto spec = a.density.load();
    return solve_hj(sample_density_to_grid(spec, Grid(spec.dimension(), a.nodes)), SweepOrder::Wavefront,
                    g.threads);
  }();
  if (u.grid.dimension() != 2) throw UsageError("solution grid must be 2-d");

  const auto ranking = nds_sort(cloud);
  std::vector<int> fronts;
  if (a.all_fronts) {
    for (int k = 1; k <= ranking.max_rank; ++k) fronts.push_back(k);
  } else {
    fronts = equally_spaced_fronts(ranking.max_rank, a.fronts);
  }
  std::vector<double> levels;
  for (int k : fronts) levels.push_back(front_level(k, cloud.size(), 2, cd, a.offset));
  const auto contours = extract_level_sets(u, levels);
  const auto report = compare(cloud, ranking, u, cd, {fronts, a.offset});

  FigureOptions opts;
  opts.draw_points = a.points;
  opts.title = a.title;
  const auto path = resolve(g, a.out, "figure.svg");
  write_atomically(path, [&](std::ostream& s) { s << render_figure(cloud, ranking, fronts, contours, opts); });
  if (!a.report.empty()) {
    write_atomically(resolve(g, a.report, "figure.json"), [&](std::ostream& s) { s << to_json(report) << '\n'; });
  }
  out << "wrote " << path.string() << " with " << fronts.size() << " fronts of " << ranking.max_rank << '\n'
      << "sup_norm_error=" << fmt(report.sup_norm_error) << '\n';
  for (const auto& f : report.per_front) {
    out << "front " << f.rank << ": points=" << f.points << " mean_distance=" << fmt(f.mean_distance) << '\n';
  }
  return kSuccess;
}

// -------------------------------------------------------------- converge

struct ConvergeArgs {
  DensityChoice density;
  int nodes = 257;
  std::vector<std::size_t> sizes{1000, 10000, 100000};
  int seeds = 3;
  std::optional<double> cd;
  std::string prefix = "converge";
};

int cmd_converge(const Globals& g, const ConvergeArgs& a, std::ostream& out) {
  const auto spec = a.density.load();
  const int d = spec.dimension();
  const double cd = resolve_cd(d, a.cd);
  const auto u = solve_hj(sample_density_to_grid(spec, Grid(d, a.nodes)), SweepOrder::Wavefront, g.threads);

  const std::size_t replicas = static_cast<std::size_t>(a.seeds);
  std::vector<double> errors(a.sizes.size() * replicas);
  std::vector<std::size_t> clamped(errors.size());
  parallel_for(errors.size(), g.threads, [&](std::size_t cell) {
    const std::size_t n = a.sizes[cell / replicas];
    const std::uint64_t seed = g.seed + cell % replicas;
    const auto cloud = sample(spec, n, seed);
    const auto report = compare(cloud, nds_sort(cloud), u, cd);
    errors[cell] = report.sup_norm_error;
    clamped[cell] = report.clamped;
  });

  json rows = json::array();
  std::ostringstream csv;
  csv << "n,median_sup_norm_error,min_sup_norm_error,max_sup_norm_error\n";
  for (std::size_t k = 0; k < a.sizes.size(); ++k) {
    const std::vector<double> cell(errors.begin() + static_cast<std::ptrdiff_t>(k * replicas),
                                   errors.begin() + static_cast<std::ptrdiff_t>((k + 1) * replicas));
    const double med = median(cell);
    const auto [lo, hi] = std::minmax_element(cell.begin(), cell.end());
    csv << a.sizes[k] << ',' << fmt(med) << ',' << fmt(*lo) << ',' << fmt(*hi) << '\n';
    json seeds = json::array();
    for (std::size_t r = 0; r < replicas; ++r) {
      seeds.push_back({{"seed", g.seed + r}, {"sup_norm_error", cell[r]}});
    }
    rows.push_back({{"n", a.sizes[k]}, {"median_sup_norm_error", med}, {"seeds", seeds}});
    out << "n=" << a.sizes[k] << " median_sup_norm_error=" << fmt(med) << '\n';
  }
  const json doc{{"density", json::parse(to_json(spec))}, {"d", d}, {"N", a.nodes}, {"cd", cd}, {"rows", rows}};
  write_atomically(resolve(g, a.prefix + ".csv", ""), [&](std::ostream& s) { s << csv.str(); });
  write_atomically(resolve(g, a.prefix + ".json", ""), [&](std::ostream& s) { s << doc.dump(2) << '\n'; });
  return kSuccess;
}

// ------------------------------------------------------------- stability

struct StabilityArgs {
  DensityChoice density;
  std::string noise_file;
  double radius = 1.0;
  std::vector<double> deltas{0.0, 0.1, 0.05, 0.025};
  std::size_t n = 100000;
  int seeds = 3;
  int nodes = 257;
  std::string prefix = "stability";
};

int cmd_stability(const Globals& g, const StabilityArgs& a, std::ostream& out) {
  const auto spec = a.density.load();
  const NoiseSpec noise{a.noise_file.empty() ? DensitySpec::unit_cube(spec.dimension()) : load_density(a.noise_file),
                        a.radius};
  const std::size_t replicas = static_cast<std::size_t>(a.seeds);
  std::vector<StabilityTable> tables(replicas);
  parallel_for(replicas, g.threads, [&](std::size_t r) {
    tables[r] = stability_experiment(spec, noise, a.deltas, a.n, g.seed + r, a.nodes);
  });

  json rows = json::array();
  std::ostringstream csv;
  csv << "delta,median_c_delta,min_c_delta,max_c_delta,max_clamped\n";
  for (std::size_t k = 0; k < a.deltas.size(); ++k) {
    std::vector<double> values;
    std::size_t clamped = 0;
    for (const auto& t : tables) {
      values.push_back(t.rows[k].c_delta);
      clamped = std::max(clamped, t.rows[k].clamped);
    }
    const double med = median(values);
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    csv << fmt(a.deltas[k]) << ',' << fmt(med) << ',' << fmt(*lo) << ',' << fmt(*hi) << ',' << clamped << '\n';
    rows.push_back({{"delta", a.deltas[k]}, {"median_c_delta", med}, {"c_delta", values}, {"max_clamped", clamped}});
    out << "delta=" << fmt(a.deltas[k]) << " median_c_delta=" << fmt(med) << '\n';
  }
  const json doc{{"density", json::parse(to_json(spec))}, {"noise", json::parse(to_json(noise.shape))},
                 {"radius", a.radius}, {"n", a.n}, {"N", a.nodes}, {"rows", rows}};
  write_atomically(resolve(g, a.prefix + ".csv", ""), [&](std::ostream& s) { s << csv.str(); });
  write_atomically(resolve(g, a.prefix + ".json", ""), [&](std::ostream& s) { s << doc.dump(2) << '\n'; });
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Non-dominated sorting and its Hamilton-Jacobi continuum limit", "paretohj"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON config file; command-line flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);

  Globals globals;
  app.add_option("--seed", globals.seed, "Base random seed");
  app.add_option("--out-dir", globals.out_dir, "Directory for outputs given by relative path");
  app.add_option("--threads", globals.threads, "Worker threads")->check(CLI::Range(1u, 1024u));

  SampleArgs sample_args;
  auto* sample_cmd = app.add_subcommand("sample", "Draw a point cloud from a density");
  add_density_options(sample_cmd, sample_args.density);
  sample_cmd->add_option("-n,--count", sample_args.n, "Number of points")->check(CLI::PositiveNumber);
  sample_cmd->add_option("-o,--out", sample_args.out, "Cloud file (default cloud.txt)");

  SortArgs sort_args;
  auto* sort_cmd = app.add_subcommand("sort", "Pareto ranks of a point cloud");
  sort_cmd->add_option("-i,--input", sort_args.input, "Cloud file")->required();
  sort_cmd->add_option("--dim", sort_args.dim, "Expected dimension");
  sort_cmd->add_flag("--oracle", sort_args.oracle, "Also sort by peeling and compare");
  sort_cmd->add_option("-o,--out", sort_args.out, "Ranking file (default ranking.txt)");
  sort_cmd->add_option("--fronts-json", sort_args.fronts_json, "Also write fronts as JSON");

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Solve the upwind scheme for a density");
  add_density_options(solve_cmd, solve_args.density);
  solve_cmd->add_option("-N,--nodes", solve_args.nodes, "Nodes per axis")->check(CLI::Range(2, 1 << 20));
  solve_cmd->add_option("--order", solve_args.order, "Sweep order")
      ->check(CLI::IsMember({"lexicographic", "wavefront"}));
  solve_cmd->add_option("-o,--out", solve_args.out, "Grid-function file (default solution.txt)");

  FigureArgs fig_args;
  auto* fig_cmd = app.add_subcommand("figure", "SVG of fronts and matching level sets");
  fig_cmd->add_option("-i,--cloud", fig_args.cloud, "Cloud file")->required();
  fig_cmd->add_option("--solution", fig_args.solution, "Grid-function file; solved from the density if absent");
  add_density_options(fig_cmd, fig_args.density);
  fig_cmd->add_option("-N,--nodes", fig_args.nodes, "Nodes per axis when solving")->check(CLI::Range(2, 1 << 16));
  fig_cmd->add_option("--fronts", fig_args.fronts, "Number of equally spaced fronts")->check(CLI::PositiveNumber);
  fig_cmd->add_flag("--all-fronts", fig_args.all_fronts, "Draw every front");
  fig_cmd->add_option("--cd", fig_args.cd, "Constant c_d (default: exact value for d <= 2)");
  fig_cmd->add_option("--offset", fig_args.offset, "Compare front k with level (k - offset)");
  fig_cmd->add_flag("--points", fig_args.points, "Draw the sample points");
  fig_cmd->add_option("--title", fig_args.title, "SVG title");
  fig_cmd->add_option("-o,--out", fig_args.out, "SVG file (default figure.svg)");
  fig_cmd->add_option("--report", fig_args.report, "Also write the comparison report as JSON");

  ConvergeArgs conv_args;
  auto* conv_cmd = app.add_subcommand("converge", "Sup-norm error of scaled ranks against c_d U_h");
  add_density_options(conv_cmd, conv_args.density);
  conv_cmd->add_option("-N,--nodes", conv_args.nodes, "Nodes per axis")->check(CLI::Range(2, 1 << 16));
  conv_cmd->add_option("--n-list", conv_args.sizes, "Sample sizes")->delimiter(',');
  conv_cmd->add_option("--seeds", conv_args.seeds, "Replicates per size (seeds seed, seed+1, ...)")
      ->check(CLI::PositiveNumber);
  conv_cmd->add_option("--cd", conv_args.cd, "Constant c_d (required for d >= 3)");
  conv_cmd->add_option("--prefix", conv_args.prefix, "Output name stem for .csv and .json");

  StabilityArgs stab_args;
  auto* stab_cmd = app.add_subcommand("stability", "Rank-field change under perturbed samples");
  add_density_options(stab_cmd, stab_args.density);
  stab_cmd->add_option("--noise", stab_args.noise_file, "Noise shape density on [0,1]^d (default uniform)")
      ->check(CLI::ExistingFile);
  stab_cmd->add_option("--radius", stab_args.radius, "Noise Y = radius (2S - 1)")->check(CLI::NonNegativeNumber);
  stab_cmd->add_option("--deltas", stab_args.deltas, "Perturbation sizes")->delimiter(',');
  stab_cmd->add_option("-n,--count", stab_args.n, "Sample size")->check(CLI::PositiveNumber);
  stab_cmd->add_option("--seeds", stab_args.seeds, "Replicates (seeds seed, seed+1, ...)")->check(CLI::PositiveNumber);
  stab_cmd->add_option("-N,--nodes", stab_args.nodes, "Nodes per axis")->check(CLI::Range(2, 1 << 16));
  stab_cmd->add_option("--prefix", stab_args.prefix, "Output name stem for .csv and .json");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*sample_cmd) return cmd_sample(globals, sample_args, out);
    if (*sort_cmd) return cmd_sort(globals, sort_args, out);
    if (*solve_cmd) return cmd_solve(globals, solve_args, out, err);
    if (*fig_cmd) return cmd_figure(globals, fig_args, out);
    if (*conv_cmd) return cmd_converge(globals, conv_args, out);
    if (*stab_cmd) return cmd_stability(globals, stab_args, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalFailure;
  }
  return kUsageError;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace paretohj::cli
