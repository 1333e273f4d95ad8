#include "eop/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace eop {

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail_at(const std::string& path, std::size_t line_no,
                          const std::string& message) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + message);
}

double parse_double_field(const std::string& path, std::size_t line_no,
                          const std::string& field, const std::string& what) {
  const std::string t = trim(field);
  double value = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    fail_at(path, line_no, "unparsable " + what + " '" + field + "'");
  }
  if (!std::isfinite(value)) {
    fail_at(path, line_no, "non-finite " + what);
  }
  return value;
}

long parse_long_field(const std::string& path, std::size_t line_no,
                      const std::string& field, const std::string& what) {
  const std::string t = trim(field);
  long value = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    fail_at(path, line_no, "unparsable " + what + " '" + field + "'");
  }
  return value;
}

// Reads a strict CSV: exact header, fixed field count, no quoting. Calls
// on_row(line_no, fields) for every data row.
template <typename RowFn>
void read_csv(const std::string& path, const std::string& expected_header,
              std::size_t n_fields, RowFn on_row) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": no rows");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header) {
    throw std::runtime_error(path + ":1: expected header '" + expected_header +
                             "', got '" + line + "'");
  }

  bool any = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != n_fields) {
      fail_at(path, line_no, "expected " + std::to_string(n_fields) +
                                 " columns, got " + std::to_string(fields.size()));
    }
    on_row(line_no, fields);
    any = true;
  }
  if (!any) throw std::runtime_error(path + ": no rows");
}

}  // namespace

std::vector<RunRecord> parse_runs(const std::string& path) {
  std::vector<RunRecord> records;
  std::set<std::tuple<std::string, std::string, std::string, long>> keys;
  read_csv(path, "algorithm,environment,hyperparam_id,seed,value", 5,
           [&](std::size_t line_no, const std::vector<std::string>& f) {
             RunRecord r;
             r.algorithm = trim(f[0]);
             r.environment = trim(f[1]);
             r.hyperparam_id = trim(f[2]);
             r.seed = parse_long_field(path, line_no, f[3], "seed");
             r.value = parse_double_field(path, line_no, f[4], "value");
             if (r.algorithm.empty() || r.environment.empty() || r.hyperparam_id.empty()) {
               fail_at(path, line_no, "empty identifier field");
             }
             if (!keys.insert({r.algorithm, r.environment, r.hyperparam_id, r.seed}).second) {
               fail_at(path, line_no, "duplicate key (" + r.algorithm + ", " +
                                          r.environment + ", " + r.hyperparam_id +
                                          ", " + std::to_string(r.seed) + ")");
             }
             records.push_back(std::move(r));
           });
  return records;
}

void write_runs(const std::vector<RunRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << "algorithm,environment,hyperparam_id,seed,value\n";
  for (const RunRecord& r : records) {
    out << r.algorithm << ',' << r.environment << ',' << r.hyperparam_id << ','
        << r.seed << ',' << format_double(r.value) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing file: " + path);
}

std::vector<ScoreTable> parse_scores(const std::string& path) {
  std::map<long, ScoreTable> by_round;
  std::map<std::string, std::string> directions;
  std::set<std::tuple<long, std::string, std::string>> keys;
  read_csv(path, "round,policy_id,method,score,direction", 5,
           [&](std::size_t line_no, const std::vector<std::string>& f) {
             const long round = parse_long_field(path, line_no, f[0], "round");
             const std::string policy = trim(f[1]);
             const std::string method = trim(f[2]);
             const double score = parse_double_field(path, line_no, f[3], "score");
             const std::string direction = trim(f[4]);
             if (policy.empty() || method.empty()) {
               fail_at(path, line_no, "empty identifier field");
             }
             if (direction != "higher" && direction != "lower") {
               fail_at(path, line_no, "direction must be 'higher' or 'lower'");
             }
             auto [it, inserted] = directions.insert({method, direction});
             if (!inserted && it->second != direction) {
               fail_at(path, line_no, "conflicting direction for method " + method);
             }
             if (!keys.insert({round, policy, method}).second) {
               fail_at(path, line_no, "duplicate key (" + std::to_string(round) +
                                          ", " + policy + ", " + method + ")");
             }
             ScoreTable& table = by_round[round];
             table.set_score(policy, method, score);
             table.set_direction(method, direction == "higher"
                                             ? ScoreDirection::HigherIsBetter
                                             : ScoreDirection::LowerIsBetter);
           });
  std::vector<ScoreTable> tables;
  tables.reserve(by_round.size());
  for (auto& [round, table] : by_round) tables.push_back(std::move(table));
  return tables;
}

void write_scores(const std::vector<ScoreTable>& tables, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << "round,policy_id,method,score,direction\n";
  for (std::size_t round = 0; round < tables.size(); ++round) {
    const ScoreTable& table = tables[round];
    for (const std::string& policy : table.policy_ids()) {
      for (const std::string& method : table.methods()) {
        out << round << ',' << policy << ',' << method << ','
            << format_double(table.score(policy, method)) << ','
            << (table.direction(method) == ScoreDirection::HigherIsBetter
                    ? "higher"
                    : "lower")
            << '\n';
      }
    }
  }
  if (!out) throw std::runtime_error("failed writing file: " + path);
}

void emit_curve(const EopCurve& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << "budget,mean,std,n\n";
  for (int b = 1; b <= curve.budgets(); ++b) {
    out << b << ',' << format_double(curve.means[b - 1]) << ','
        << format_double(curve.stds[b - 1]) << ',' << curve.n << '\n';
  }
  if (!out) throw std::runtime_error("failed writing file: " + path);
}

EopCurve parse_curve(const std::string& path) {
  std::vector<double> means, stds;
  long n = 0;
  read_csv(path, "budget,mean,std,n", 4,
           [&](std::size_t line_no, const std::vector<std::string>& f) {
             const long budget = parse_long_field(path, line_no, f[0], "budget");
             if (budget != static_cast<long>(means.size()) + 1) {
               fail_at(path, line_no, "budgets must be contiguous from 1");
             }
             means.push_back(parse_double_field(path, line_no, f[1], "mean"));
             stds.push_back(parse_double_field(path, line_no, f[2], "std"));
             n = parse_long_field(path, line_no, f[3], "n");
           });
  EopCurve curve;
  curve.n = n;
  curve.means = Eigen::Map<const Eigen::ArrayXd>(means.data(),
                                                 static_cast<Eigen::Index>(means.size()));
  curve.stds = Eigen::Map<const Eigen::ArrayXd>(stds.data(),
                                                static_cast<Eigen::Index>(stds.size()));
  return curve;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);

  std::map<std::string, std::string> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail_at(path, line_no, "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail_at(path, line_no, "empty key");
    if (!entries.insert({key, value}).second) {
      fail_at(path, line_no, "duplicate key '" + key + "'");
    }
  }
  return entries;
}

namespace {

std::vector<double> parse_grid(const std::string& value, const std::string& key) {
  std::vector<double> grid;
  for (const std::string& item : split(value, ',')) {
    const std::string t = trim(item);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
      throw std::runtime_error("config: bad number '" + item + "' in " + key);
    }
    grid.push_back(v);
  }
  return grid;
}

}  // namespace

PipelineConfig pipeline_config_from(const std::map<std::string, std::string>& entries) {
  PipelineConfig config;
  std::set<std::string> known;
  const auto take = [&](const std::string& key) -> const std::string* {
    known.insert(key);
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };
  const auto take_double = [&](const std::string& key, double& out) {
    if (const std::string* v = take(key)) {
      out = parse_grid(*v, key).at(0);
    }
  };
  const auto take_int = [&](const std::string& key, int& out) {
    if (const std::string* v = take(key)) {
      out = static_cast<int>(parse_grid(*v, key).at(0));
    }
  };

  if (const std::string* v = take("mdp")) config.mdp_source = *v;
  if (const std::string* v = take("environment")) config.environment_name = *v;
  if (const std::string* v = take("level")) config.behavior_level = *v;
  take_double("epsilon_low", config.epsilons.low);
  take_double("epsilon_medium", config.epsilons.medium);
  take_double("epsilon_high", config.epsilons.high);
  take_int("n_trajectories", config.n_trajectories);
  take_double("split_ratio", config.split_ratio);
  if (const std::string* v = take("algorithms")) {
    config.algorithms.clear();
    for (const std::string& a : split(*v, ',')) config.algorithms.push_back(trim(a));
  }
  take_int("assignments_per_algorithm", config.assignments_per_algorithm);
  take_int("seeds", config.seeds);
  if (const std::string* v = take("master_seed")) {
    config.master_seed = std::stoull(*v);
  }
  if (const std::string* v = take("aggregation")) {
    config.aggregation = aggregation_from_string(*v);
  }
  if (const std::string* v = take("bc.alpha_grid")) {
    config.bc_alpha_grid = parse_grid(*v, "bc.alpha_grid");
  }
  if (const std::string* v = take("cq.alpha_grid")) {
    config.cq_alpha_grid = parse_grid(*v, "cq.alpha_grid");
  }
  if (const std::string* v = take("cq.learning_rate_grid")) {
    config.cq_learning_rate_grid = parse_grid(*v, "cq.learning_rate_grid");
  }
  if (const std::string* v = take("cq.sweeps_grid")) {
    config.cq_sweeps_grid = parse_grid(*v, "cq.sweeps_grid");
  }
  take_int("fqe_iterations", config.fqe_iterations);
  take_double("value_iteration_tol", config.value_iteration_tol);

  for (const auto& [key, value] : entries) {
    if (!known.count(key)) throw std::runtime_error("config: unknown key '" + key + "'");
  }
  config.validate();
  return config;
}

}  // namespace eop
