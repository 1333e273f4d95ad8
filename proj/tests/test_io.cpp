#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "eop/io.hpp"
#include "eop/svg.hpp"

using namespace eop;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() /
                   ("eop_io_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter++))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static int counter;
};
int TempDir::counter = 0;

std::string write_file(const TempDir& dir, const std::string& name,
                       const std::string& content) {
  const std::string path = dir.file(name);
  std::ofstream out(path);
  out << content;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("parse_runs accepts a well-formed file") {
  TempDir dir;
  const std::string path = write_file(dir, "runs.csv",
                                      "algorithm,environment,hyperparam_id,seed,value\n"
                                      "bc,grid,h0,0,1.5\n"
                                      "bc,grid,h0,1,2.5\n"
                                      "cq,grid,h1,0,-3\n");
  const auto records = parse_runs(path);
  REQUIRE(records.size() == 3);
  CHECK(records[0].algorithm == "bc");
  CHECK(records[2].value == -3.0);
}

TEST_CASE("parse_runs rejects malformed input with line numbers") {
  TempDir dir;
  const std::string dup = write_file(dir, "dup.csv",
                                     "algorithm,environment,hyperparam_id,seed,value\n"
                                     "bc,grid,h0,0,1.5\n"
                                     "bc,grid,h0,0,2.5\n");
  CHECK_THROWS_WITH_AS(parse_runs(dup),
                       doctest::Contains(":3: duplicate key"), std::runtime_error);

  const std::string nan = write_file(dir, "nan.csv",
                                     "algorithm,environment,hyperparam_id,seed,value\n"
                                     "bc,grid,h0,0,NaN\n");
  CHECK_THROWS_WITH_AS(parse_runs(nan), doctest::Contains(":2: non-finite value"),
                       std::runtime_error);

  const std::string missing = write_file(dir, "missing.csv",
                                         "algorithm,environment,hyperparam_id,seed,value\n"
                                         "bc,grid,h0,0\n");
  CHECK_THROWS_WITH_AS(parse_runs(missing), doctest::Contains(":2: expected 5 columns"),
                       std::runtime_error);

  const std::string header = write_file(dir, "header.csv", "algo,env,hp,seed,value\n");
  CHECK_THROWS_WITH_AS(parse_runs(header), doctest::Contains("expected header"),
                       std::runtime_error);

  const std::string empty = write_file(dir, "empty.csv",
                                       "algorithm,environment,hyperparam_id,seed,value\n");
  CHECK_THROWS_WITH_AS(parse_runs(empty), doctest::Contains("no rows"),
                       std::runtime_error);
}

TEST_CASE("runs round-trip") {
  TempDir dir;
  std::vector<RunRecord> records = {
      {"bc", "grid", "h0", 0, 1.0 / 3.0},
      {"bc", "grid", "h1", 0, -2.718281828459045},
      {"cq", "grid", "h0", 3, 1e-17},
  };
  const std::string path = dir.file("runs.csv");
  write_runs(records, path);
  const auto parsed = parse_runs(path);
  REQUIRE(parsed.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(parsed[i].value == records[i].value);  // shortest round-trip is exact
    CHECK(parsed[i].seed == records[i].seed);
  }
}

TEST_CASE("parse_scores groups rows into per-round tables") {
  TempDir dir;
  const std::string path = write_file(
      dir, "scores.csv",
      "round,policy_id,method,score,direction\n"
      "0,p1,fqe,1.0,higher\n0,p2,fqe,2.0,higher\n0,p3,fqe,3.0,higher\n"
      "0,p1,td,0.1,lower\n0,p2,td,0.2,lower\n0,p3,td,0.3,lower\n"
      "1,p1,fqe,1.5,higher\n1,p2,fqe,2.5,higher\n1,p3,fqe,3.5,higher\n"
      "1,p1,td,0.4,lower\n1,p2,td,0.5,lower\n1,p3,td,0.6,lower\n");
  const auto tables = parse_scores(path);
  REQUIRE(tables.size() == 2);
  CHECK(tables[0].policy_ids().size() == 3);
  CHECK(tables[0].methods().size() == 2);
  CHECK(tables[1].score("p2", "fqe") == 2.5);
  CHECK(tables[0].direction("td") == ScoreDirection::LowerIsBetter);

  const std::string conflict = write_file(dir, "conflict.csv",
                                          "round,policy_id,method,score,direction\n"
                                          "0,p1,fqe,1.0,higher\n"
                                          "0,p2,fqe,2.0,lower\n");
  CHECK_THROWS_WITH_AS(parse_scores(conflict),
                       doctest::Contains("conflicting direction"), std::runtime_error);

  const std::string empty = write_file(dir, "empty.csv", "");
  CHECK_THROWS_WITH_AS(parse_scores(empty), doctest::Contains("no rows"),
                       std::runtime_error);
}

TEST_CASE("curve emission") {
  TempDir dir;
  const EopCurve constant = eop_plugin(ValueSample(std::vector<double>{2.0, 2.0}), 3);
  const std::string const_path = dir.file("const.csv");
  emit_curve(constant, const_path);
  const std::string text = slurp(const_path);
  CHECK(text == "budget,mean,std,n\n1,2,0,2\n2,2,0,2\n3,2,0,2\n");

  const EopCurve curve =
      eop_plugin(ValueSample(std::vector<double>{1.0, 2.0, 3.5}), 5);
  const std::string path = dir.file("curve.csv");
  emit_curve(curve, path);
  const EopCurve parsed = parse_curve(path);
  REQUIRE(parsed.budgets() == 5);  // row count = B_max
  CHECK(parsed.n == 3);
  for (int b = 1; b <= 5; ++b) {
    CHECK(parsed.point(b).mean == curve.point(b).mean);
    CHECK(parsed.point(b).std == curve.point(b).std);
  }
}

TEST_CASE("config file parsing") {
  TempDir dir;
  const std::string path = write_file(dir, "config.txt",
                                      "# pipeline settings\n"
                                      "mdp = builtin:gridworld8\n"
                                      "level = high\n"
                                      "n_trajectories = 99\n"
                                      "seeds = 2  # per assignment\n"
                                      "bc.alpha_grid = 0,0.5,2\n");
  const auto entries = parse_config_file(path);
  CHECK(entries.at("level") == "high");
  CHECK(entries.at("seeds") == "2");

  const PipelineConfig config = pipeline_config_from(entries);
  CHECK(config.behavior_level == "high");
  CHECK(config.n_trajectories == 99);
  CHECK(config.seeds == 2);
  CHECK(config.bc_alpha_grid == std::vector<double>{0.0, 0.5, 2.0});

  const std::string bad = write_file(dir, "bad.txt", "mdp builtin:gridworld8\n");
  CHECK_THROWS_WITH_AS(parse_config_file(bad), doctest::Contains(":1: expected"),
                       std::runtime_error);

  const std::string unknown = write_file(dir, "unknown.txt", "frobnicate = 1\n");
  CHECK_THROWS_WITH_AS(pipeline_config_from(parse_config_file(unknown)),
                       doctest::Contains("unknown key"), std::runtime_error);
}

TEST_CASE("import-neorl maps external files to the runs schema") {
  TempDir dir;
  fs::create_directories(dir.path / "release");
  {
    std::ofstream bc(dir.path / "release" / "BC-Hopper-v3-medium-1000.csv");
    bc << "index,seed,mean\n0,1,1159.5\n1,1,1879.5\n2,1,2343\n";
    std::ofstream cql(dir.path / "release" / "CQL-Hopper-v3-medium-1000.csv");
    cql << "index,seed,mean\n0,1,1700\n1,1,1800\n";
    std::ofstream other(dir.path / "release" / "BC-Walker2d-low-100.csv");
    other << "index,seed,mean\n0,1,5\n";
  }
  const auto records =
      import_neorl((dir.path / "release").string(), "Hopper-v3-medium-1000");
  REQUIRE(records.size() == 5);
  CHECK(records[0].algorithm == "BC");
  CHECK(records[0].environment == "Hopper-v3-medium-1000");
  CHECK(records[0].value == 1159.5);
  CHECK(records[3].algorithm == "CQL");

  CHECK_THROWS_WITH_AS(import_neorl((dir.path / "release").string(), "FinRL"),
                       doctest::Contains("no CSV files"), std::runtime_error);
}

TEST_CASE("figure emission") {
  std::vector<LabeledCurve> curves;
  curves.push_back({"bc", eop_plugin(ValueSample(std::vector<double>{1.0, 2.0, 3.0}), 3)});

  std::ostringstream once, twice;
  emit_figure(curves, once);
  emit_figure(curves, twice);
  CHECK(once.str() == twice.str());  // deterministic bytes

  const std::string svg = once.str();
  const auto count = [&svg](const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = svg.find(needle); pos != std::string::npos;
         pos = svg.find(needle, pos + 1)) {
      ++n;
    }
    return n;
  };
  CHECK(count("<polyline class=\"mean\"") == 1);
  CHECK(count("<polygon class=\"band\"") == 1);
  CHECK(svg.find("Number of policies deployed online") != std::string::npos);
  CHECK(svg.find("Normalized performance") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);

  // seven algorithms, seven legend entries
  for (int i = 1; i < 7; ++i) {
    curves.push_back({"algo" + std::to_string(i),
                      eop_plugin(ValueSample(std::vector<double>{0.0, 1.0 * i}), 3)});
  }
  std::ostringstream seven;
  emit_figure(curves, seven);
  const std::string svg7 = seven.str();
  std::size_t legends = 0;
  for (auto pos = svg7.find("class=\"legend\""); pos != std::string::npos;
       pos = svg7.find("class=\"legend\"", pos + 1)) {
    ++legends;
  }
  CHECK(legends == 7);

  CHECK_THROWS_WITH(emit_figure({}, std::cout), "empty curve set");
}
