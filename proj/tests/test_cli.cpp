#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "commands.hpp"
#include "paretohj/core.hpp"
#include "paretohj/grid.hpp"
#include "paretohj/nds.hpp"

namespace fs = std::filesystem;
using namespace paretohj;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

/// Scratch directory removed at scope exit.
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("paretohj_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const std::string& file) const { return (dir / file).string(); }
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

bool contains(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("sample writes n points and reports the run") {
  Scratch s("sample");
  const auto o = run({"--seed", "7", "--out-dir", s.dir.string(), "sample", "-n", "50", "-o", "a.txt"});
  REQUIRE(o.code == 0);
  CHECK(contains(o.out, "n=50 seed=7 acceptance_rate=1"));
  const auto cloud = load_cloud(s / "a.txt");
  CHECK(cloud.size() == 50);
  CHECK(cloud.dimension() == 2);

  REQUIRE(run({"--seed", "7", "--out-dir", s.dir.string(), "sample", "-n", "50", "-o", "b.txt"}).code == 0);
  CHECK(slurp(s / "a.txt") == slurp(s / "b.txt"));
  REQUIRE(run({"--seed", "8", "--out-dir", s.dir.string(), "sample", "-n", "50", "-o", "c.txt"}).code == 0);
  CHECK(slurp(s / "a.txt") != slurp(s / "c.txt"));
}

TEST_CASE("rejection sampling reports its acceptance rate") {
  Scratch s("sample_region");
  const auto o = run({"--out-dir", s.dir.string(), "sample", "--builtin", "region", "-n", "200"});
  REQUIRE(o.code == 0);
  CHECK(contains(o.out, "acceptance_rate=0."));
  CHECK(load_cloud(s / "cloud.txt").size() == 200);
}

TEST_CASE("malformed density exits 2 and leaves no file behind") {
  Scratch s("bad_density");
  spit(s / "bad.json", R"({"variant": "piecewise_constant", "dimension": 2,)");
  const auto o = run({"--out-dir", s.dir.string(), "sample", "--density", s / "bad.json", "-n", "10"});
  CHECK(o.code == 2);
  CHECK(contains(o.err, "malformed"));
  CHECK_FALSE(fs::exists(s / "cloud.txt"));
  CHECK_FALSE(fs::exists(s / "cloud.txt.partial"));

  spit(s / "neg.json", R"({"variant": "piecewise_constant", "dimension": 2, "resolution": 1, "cells": [-1]})");
  CHECK(run({"--out-dir", s.dir.string(), "solve", "--density", s / "neg.json", "-N", "9"}).code == 2);
  CHECK_FALSE(fs::exists(s / "solution.txt"));
}

TEST_CASE("sort agrees with the peeling oracle") {
  Scratch s("sort");
  REQUIRE(run({"--out-dir", s.dir.string(), "sample", "--dim", "3", "-n", "300"}).code == 0);
  const auto o = run({"--out-dir", s.dir.string(), "sort", "-i", s / "cloud.txt", "--oracle", "--fronts-json",
                      "fronts.json"});
  REQUIRE(o.code == 0);
  CHECK(contains(o.out, "oracle: identical"));
  const auto ranking = nds_peel(load_cloud(s / "cloud.txt"));
  const auto fronts = nlohmann::json::parse(slurp(s / "fronts.json"));
  CHECK(static_cast<int>(fronts.size()) == ranking.max_rank);

  std::istringstream lines(slurp(s / "ranking.txt"));
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    const auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    CHECK(std::stoul(line.substr(0, comma)) == count);
    CHECK(std::stoi(line.substr(comma + 1)) == ranking.ranks[count]);
    ++count;
  }
  CHECK(count == 300);
}

TEST_CASE("sort checks the declared dimension") {
  Scratch s("sort_dim");
  REQUIRE(run({"--out-dir", s.dir.string(), "sample", "-n", "20"}).code == 0);
  CHECK(run({"--out-dir", s.dir.string(), "sort", "-i", s / "cloud.txt", "--dim", "3"}).code == 2);
  CHECK(run({"--out-dir", s.dir.string(), "sort", "-i", s / "missing.txt"}).code == 2);
}

TEST_CASE("solve reports residual and Holder seminorm") {
  Scratch s("solve");
  const auto o = run({"--out-dir", s.dir.string(), "solve", "-N", "33", "--order", "wavefront"});
  REQUIRE(o.code == 0);
  CHECK(contains(o.out, "residual_max="));
  CHECK(contains(o.out, "holder_seminorm="));
  CHECK(o.err.empty());
  const auto u = load_grid_function(s / "solution.txt");
  CHECK(u.grid.nodes_per_axis() == 33);
  CHECK(u.values.maxCoeff() > 0.9);
}

TEST_CASE("discontinuous densities trigger a warning") {
  Scratch s("solve_warn");
  spit(s / "cells.json", R"({"variant": "piecewise_constant", "dimension": 2, "resolution": 2, "cells": [4, 0, 0, 0]})");
  const auto o = run({"--out-dir", s.dir.string(), "solve", "--density", s / "cells.json", "-N", "17"});
  REQUIRE(o.code == 0);
  CHECK(contains(o.err, "uniqueness theory not covered"));
}

TEST_CASE("figure needs a nonempty planar cloud") {
  Scratch s("figure");
  spit(s / "empty.txt", "");
  CHECK(run({"--out-dir", s.dir.string(), "figure", "-i", s / "empty.txt"}).code == 2);
  REQUIRE(run({"--out-dir", s.dir.string(), "sample", "--dim", "3", "-n", "20", "-o", "c3.txt"}).code == 0);
  CHECK(run({"--out-dir", s.dir.string(), "figure", "-i", s / "c3.txt"}).code == 2);
  CHECK_FALSE(fs::exists(s / "figure.svg"));
}

TEST_CASE("figure is reproducible and reports per-front distances") {
  Scratch s("figure_ok");
  REQUIRE(run({"--out-dir", s.dir.string(), "sample", "-n", "2000"}).code == 0);
  const std::vector<std::string> args{"--out-dir", s.dir.string(), "figure", "-i", s / "cloud.txt", "-N", "65",
                                      "--report", "r.json"};
  const auto first = run(args);
  REQUIRE(first.code == 0);
  const auto svg = slurp(s / "figure.svg");
  REQUIRE(run(args).code == 0);
  CHECK(svg == slurp(s / "figure.svg"));
  const auto report = nlohmann::json::parse(slurp(s / "r.json"));
  CHECK_FALSE(report.at("per_front").empty());
  CHECK(contains(first.out, "mean_distance="));
}

TEST_CASE("converge writes a median column") {
  Scratch s("converge");
  const auto o = run({"--out-dir", s.dir.string(), "converge", "-N", "33", "--n-list", "100,400", "--seeds", "3"});
  REQUIRE(o.code == 0);
  const auto csv = slurp(s / "converge.csv");
  CHECK(csv.rfind("n,median_sup_norm_error,", 0) == 0);
  const auto j = nlohmann::json::parse(slurp(s / "converge.json"));
  REQUIRE(j.at("rows").size() == 2);
  CHECK(j.at("rows")[0].at("seeds").size() == 3);
  CHECK(j.at("rows")[1].at("n") == 400);
}

TEST_CASE("converge needs c_d beyond two dimensions") {
  Scratch s("converge3");
  const auto o = run({"--out-dir", s.dir.string(), "converge", "--dim", "3", "-N", "9", "--n-list", "50"});
  CHECK(o.code == 2);
  CHECK(contains(o.err, "--cd"));
  CHECK(run({"--out-dir", s.dir.string(), "converge", "--dim", "3", "-N", "9", "--n-list", "50", "--cd", "2.2"})
            .code == 0);
}

TEST_CASE("stability writes medians over seeds") {
  Scratch s("stability");
  const auto o = run({"--out-dir", s.dir.string(), "stability", "-n", "500", "-N", "33", "--seeds", "2",
                      "--deltas", "0,0.1"});
  REQUIRE(o.code == 0);
  const auto csv = slurp(s / "stability.csv");
  CHECK(csv.rfind("delta,median_c_delta,", 0) == 0);
  CHECK(contains(csv, "\n0,0,0,0,0\n"));
  const auto j = nlohmann::json::parse(slurp(s / "stability.json"));
  CHECK(j.at("rows")[1].at("c_delta").size() == 2);
}

TEST_CASE("JSON config sets options and flags override it") {
  Scratch s("config");
  spit(s / "cfg.json", nlohmann::json{{"seed", 11}, {"out-dir", s.dir.string()}, {"sample", {{"count", 30}}}}.dump());
  auto o = run({"--config", s / "cfg.json", "sample", "-o", "x.txt"});
  REQUIRE(o.code == 0);
  CHECK(contains(o.out, "n=30 seed=11"));

  o = run({"--config", s / "cfg.json", "--seed", "12", "sample", "-n", "40", "-o", "y.txt"});
  REQUIRE(o.code == 0);
  CHECK(contains(o.out, "n=40 seed=12"));
  CHECK(load_cloud(s / "y.txt").size() == 40);

  spit(s / "broken.json", "{\"seed\": ");
  CHECK(run({"--config", s / "broken.json", "sample"}).code == 2);
  spit(s / "unknown.json", R"({"no_such_option": 1})");
  CHECK(run({"--config", s / "unknown.json", "sample"}).code == 2);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"solve", "-N", "1"}).code == 2);
  CHECK(run({"sort"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("installed binary returns the documented exit codes") {
  Scratch s("binary");
  const std::string bin = PARETOHJ_CLI_BINARY;
  auto status = [&](const std::string& args) {
    const int raw = std::system((bin + " " + args + " > " + (s / "log.txt") + " 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("--out-dir " + s.dir.string() + " sample -n 5") == 0);
  CHECK(load_cloud(s / "cloud.txt").size() == 5);
  CHECK(status("sort") == 2);
  CHECK(status("solve --builtin nope") == 2);
}
