#include "eop/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "eop/io.hpp"
#include "eop/metrics.hpp"
#include "eop/pipeline.hpp"
#include "eop/selection.hpp"
#include "eop/svg.hpp"

namespace eop {

namespace {

namespace fs = std::filesystem;

struct MetricChoice {
  std::string name = "raw";  // raw | best-behavioral | min-max
  std::optional<double> v_best;
  double offset = 0.0;
};

// Seed-aggregated values per (environment, algorithm), keyed by hyperparam id.
using GroupedValues = std::map<std::pair<std::string, std::string>, ValueMap>;

GroupedValues group_runs(const std::vector<RunRecord>& records,
                         Aggregation aggregation) {
  std::map<std::pair<std::string, std::string>, std::vector<RunRecord>> groups;
  for (const RunRecord& r : records) {
    groups[{r.environment, r.algorithm}].push_back(r);
  }
  GroupedValues out;
  for (const auto& [key, rs] : groups) out[key] = aggregate_values(rs, aggregation);
  return out;
}

std::vector<double> metric_transform(const ValueMap& values,
                                     const MetricChoice& metric) {
  std::vector<double> raw;
  raw.reserve(values.size());
  for (const auto& [id, v] : values) raw.push_back(v);

  if (metric.name == "raw") return raw;
  if (metric.name == "best-behavioral") {
    if (!metric.v_best) {
      throw std::runtime_error("metric best-behavioral requires --v-best");
    }
    std::vector<double> out;
    out.reserve(raw.size());
    for (double v : raw) {
      out.push_back(normalize_best_behavioral(v, *metric.v_best, metric.offset));
    }
    return out;
  }
  if (metric.name == "min-max") {
    const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    if (*lo == *hi) throw std::runtime_error("degenerate value range");
    std::vector<double> out;
    out.reserve(raw.size());
    for (double v : raw) out.push_back((v - *lo) / (*hi - *lo));
    return out;
  }
  throw std::runtime_error("unknown metric: " + metric.name);
}

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name) {
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' ||
            c == '-' || c == '_')
               ? c
               : '-';
  }
  return out;
}

std::string curve_filename(const std::string& environment,
                           const std::string& algorithm) {
  return sanitize(environment) + "__" + sanitize(algorithm) + ".csv";
}

void write_group_curves(const GroupedValues& groups, const MetricChoice& metric,
                        std::optional<int> budget_max, const fs::path& out_dir,
                        std::vector<fs::path>* written) {
  fs::create_directories(out_dir);
  for (const auto& [key, values] : groups) {
    const std::vector<double> transformed = metric_transform(values, metric);
    const ValueSample sample(transformed, key.second);
    const int b_max = budget_max.value_or(static_cast<int>(sample.size()));
    const fs::path path = out_dir / curve_filename(key.first, key.second);
    emit_curve(eop_plugin(sample, b_max), path.string());
    if (written) written->push_back(path);
  }
}

RankedList read_ranking(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open ranking file: " + path);
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r\n");
    ids.push_back(line.substr(first, last - first + 1));
  }
  if (ids.empty()) throw std::runtime_error(path + ": no rows");
  return RankedList(std::move(ids));
}

long round_half_away(double v) {
  return std::llround(v);  // llround rounds halfway cases away from zero
}

int command_curve(const std::string& runs_path, const std::string& out_dir,
                  const MetricChoice& metric, std::optional<int> budget_max,
                  const std::string& aggregate) {
  const GroupedValues groups =
      group_runs(parse_runs(runs_path), aggregation_from_string(aggregate));
  write_group_curves(groups, metric, budget_max, out_dir, nullptr);
  return 0;
}

int command_regret(const std::string& runs_path, const std::string& scores_path,
                   const std::string& out_dir,
                   const std::vector<std::string>& strategies,
                   std::optional<int> budget_max, std::uint64_t seed,
                   const std::string& aggregate) {
  const std::vector<RunRecord> records = parse_runs(runs_path);
  const ValueMap values =
      aggregate_values(records, aggregation_from_string(aggregate));
  const std::vector<ScoreTable> tables = parse_scores(scores_path);
  const int n = static_cast<int>(values.size());

  std::vector<std::string> chosen = strategies;
  if (chosen.empty()) {
    chosen.push_back("uniform");
    for (const std::string& m : tables.front().methods()) chosen.push_back(m);
  }

  fs::create_directories(out_dir);
  for (const std::string& name : chosen) {
    const int b_max = std::min(budget_max.value_or(n), n);
    EopCurve curve;
    if (name == "uniform") {
      // uniform selection reports the plug-in estimate (with replacement)
      curve = uniform_regret_eop(values, b_max);
      (void)seed;
    } else {
      Eigen::MatrixXd stacked(static_cast<Eigen::Index>(tables.size()), b_max);
      for (std::size_t r = 0; r < tables.size(); ++r) {
        const RankedList ranking =
            rank_policies(tables[r], SelectionStrategy::by_score(name));
        const Eigen::ArrayXd rc = regret_curve(ranking, values);
        if (rc.size() < b_max) {
          throw std::runtime_error("score table does not cover the value set");
        }
        stacked.row(static_cast<Eigen::Index>(r)) = rc.head(b_max);
      }
      curve.n = static_cast<long>(tables.size());
      curve.means = stacked.colwise().mean().array();
      curve.stds.resize(b_max);
      if (tables.size() == 1) {
        curve.stds.setZero();
      } else {
        for (int b = 0; b < b_max; ++b) {
          const double mu = curve.means[b];
          curve.stds[b] = std::sqrt((stacked.col(b).array() - mu).square().sum() /
                                    static_cast<double>(tables.size() - 1));
        }
      }
    }
    emit_curve(curve, (fs::path(out_dir) / ("regret_" + sanitize(name) + ".csv")).string());
  }
  return 0;
}

int command_spearman(const std::string& path_a, const std::string& path_b,
                     std::ostream& out) {
  const double rho = spearman_rho(read_ranking(path_a), read_ranking(path_b));
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", rho);
  out << buf << "\n";
  return 0;
}

int command_simulate(const std::string& config_path, const std::string& out_dir,
                     std::optional<std::uint64_t> seed,
                     const MetricChoice& metric, std::optional<int> budget_max) {
  PipelineConfig config = pipeline_config_from(parse_config_file(config_path));
  if (seed) config.master_seed = *seed;
  const PipelineResult result = run_pipeline(config);

  fs::create_directories(out_dir);
  write_runs(result.records, (fs::path(out_dir) / "runs.csv").string());
  write_scores(result.score_tables, (fs::path(out_dir) / "scores.csv").string());

  const GroupedValues groups = group_runs(result.records, config.aggregation);
  std::vector<fs::path> curve_files;
  write_group_curves(groups, metric, budget_max, out_dir, &curve_files);

  std::vector<LabeledCurve> labeled;
  for (const fs::path& p : curve_files) {
    labeled.push_back(LabeledCurve{p.stem().string(), parse_curve(p.string())});
  }
  emit_figure(labeled, (fs::path(out_dir) / "figure.svg").string());
  return 0;
}

int command_plot(const std::vector<std::string>& curve_paths,
                 const std::string& out_path) {
  std::vector<LabeledCurve> labeled;
  for (const std::string& p : curve_paths) {
    labeled.push_back(LabeledCurve{fs::path(p).stem().string(), parse_curve(p)});
  }
  emit_figure(labeled, out_path);
  return 0;
}

int command_table(const std::string& runs_path, const std::string& budgets_csv,
                  const std::string& aggregate, std::ostream& out) {
  std::vector<int> budgets;
  {
    std::string token;
    std::stringstream ss(budgets_csv);
    while (std::getline(ss, token, ',')) {
      const int b = std::stoi(token);
      if (b < 1) throw std::runtime_error("budgets must be >= 1");
      budgets.push_back(b);
    }
  }
  if (budgets.empty()) throw std::runtime_error("no budgets given");

  const GroupedValues groups =
      group_runs(parse_runs(runs_path), aggregation_from_string(aggregate));

  std::string current_env;
  for (const auto& [key, values] : groups) {
    if (key.first != current_env) {
      current_env = key.first;
      out << "# environment: " << current_env << "\n";
      out << "algorithm";
      for (int b : budgets) out << " B=" << b;
      out << " final N\n";
    }
    std::vector<double> raw;
    for (const auto& [id, v] : values) raw.push_back(v);
    const ValueSample sample(raw, key.second);
    const int n = static_cast<int>(sample.size());
    const EopCurve curve = eop_plugin(sample, n);

    out << key.second;
    for (int b : budgets) {
      if (b > n) {
        out << " -";  // dash where the budget exceeds this algorithm's N
      } else {
        out << ' ' << round_half_away(curve.means[b - 1]);
      }
    }
    out << ' ' << round_half_away(sample.max()) << ' ' << n << "\n";
  }
  return 0;
}

int command_import_neorl(const std::string& in_dir, const std::string& environment,
                         const std::string& out_path) {
  write_runs(import_neorl(in_dir, environment), out_path);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Budget-dependent performance reports for offline-RL-style "
               "hyperparameter searches"};
  app.require_subcommand(1);

  // curve
  auto* curve = app.add_subcommand("curve", "EOP curves per algorithm from a runs file");
  std::string curve_runs, curve_out_dir;
  MetricChoice curve_metric;
  std::optional<int> curve_budget_max;
  std::string curve_aggregate = "mean";
  curve->add_option("--runs", curve_runs, "runs CSV")->required();
  curve->add_option("--out-dir", curve_out_dir, "output directory")->required();
  curve->add_option("--metric", curve_metric.name, "raw | best-behavioral | min-max");
  curve->add_option("--v-best", curve_metric.v_best, "reference value for best-behavioral");
  curve->add_option("--offset", curve_metric.offset, "offset for best-behavioral");
  curve->add_option("--budget-max", curve_budget_max, "max budget (default N)");
  curve->add_option("--aggregate", curve_aggregate, "mean | median | min");

  // regret
  auto* regret = app.add_subcommand("regret", "regret curves per OPS strategy");
  std::string regret_runs, regret_scores, regret_out_dir;
  std::vector<std::string> regret_strategies;
  std::optional<int> regret_budget_max;
  std::uint64_t regret_seed = 0;
  std::string regret_aggregate = "mean";
  regret->add_option("--runs", regret_runs, "runs CSV")->required();
  regret->add_option("--scores", regret_scores, "scores CSV")->required();
  regret->add_option("--out-dir", regret_out_dir, "output directory")->required();
  regret->add_option("--strategies", regret_strategies,
                     "strategies to compare (default: uniform + all methods)")
      ->delimiter(',');
  regret->add_option("--budget-max", regret_budget_max, "max budget (default N)");
  regret->add_option("--seed", regret_seed, "seed for randomized strategies");
  regret->add_option("--aggregate", regret_aggregate, "mean | median | min");

  // spearman
  auto* spearman = app.add_subcommand("spearman", "rank correlation of two ranking files");
  std::string spearman_a, spearman_b;
  spearman->add_option("ranking_a", spearman_a, "first ranking file")->required();
  spearman->add_option("ranking_b", spearman_b, "second ranking file")->required();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run the tabular offline-RL pipeline");
  std::string sim_config, sim_out_dir;
  std::optional<std::uint64_t> sim_seed;
  MetricChoice sim_metric;
  std::optional<int> sim_budget_max;
  simulate->add_option("--config", sim_config, "pipeline config file")->required();
  simulate->add_option("--out-dir", sim_out_dir, "output directory")->required();
  simulate->add_option("--seed", sim_seed, "master seed (overrides config)");
  simulate->add_option("--metric", sim_metric.name, "raw | best-behavioral | min-max");
  simulate->add_option("--v-best", sim_metric.v_best, "reference value for best-behavioral");
  simulate->add_option("--offset", sim_metric.offset, "offset for best-behavioral");
  simulate->add_option("--budget-max", sim_budget_max, "max budget (default N)");

  // plot
  auto* plot = app.add_subcommand("plot", "figure from curve files");
  std::vector<std::string> plot_curves;
  std::string plot_out;
  plot->add_option("curves", plot_curves, "curve CSV files")->required();
  plot->add_option("--out", plot_out, "output SVG path")->required();

  // table
  auto* table = app.add_subcommand("table", "expected-best value per algorithm and budget");
  std::string table_runs;
  std::string table_budgets = "1,2,3,4,8,15,30";
  std::string table_aggregate = "mean";
  table->add_option("--runs", table_runs, "runs CSV")->required();
  table->add_option("--budgets", table_budgets, "comma-separated budgets");
  table->add_option("--aggregate", table_aggregate, "mean | median | min");

  // import-neorl
  auto* import = app.add_subcommand("import-neorl",
                                    "map external NeoRL evaluation files to the runs schema");
  std::string import_in, import_env, import_out;
  import->add_option("--in", import_in, "directory of the external release")->required();
  import->add_option("--environment", import_env, "environment tag to match")->required();
  import->add_option("--out", import_out, "output runs CSV")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*curve) {
      return command_curve(curve_runs, curve_out_dir, curve_metric,
                           curve_budget_max, curve_aggregate);
    }
    if (*regret) {
      return command_regret(regret_runs, regret_scores, regret_out_dir,
                            regret_strategies, regret_budget_max, regret_seed,
                            regret_aggregate);
    }
    if (*spearman) return command_spearman(spearman_a, spearman_b, out);
    if (*simulate) {
      return command_simulate(sim_config, sim_out_dir, sim_seed, sim_metric,
                              sim_budget_max);
    }
    if (*plot) return command_plot(plot_curves, plot_out);
    if (*table) return command_table(table_runs, table_budgets, table_aggregate, out);
    if (*import) return command_import_neorl(import_in, import_env, import_out);
    err << "error: no subcommand\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace eop
