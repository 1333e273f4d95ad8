#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "eop/dataset.hpp"
#include "eop/mdp.hpp"
#include "eop/metrics.hpp"
#include "eop/selection.hpp"

namespace eop {

/// One online evaluation result.
struct RunRecord {
  std::string algorithm;
  std::string environment;
  std::string hyperparam_id;
  long seed = 0;
  double value = 0.0;
};

/// One sampled hyperparameter assignment; params hold named values drawn
/// from the declared grids.
struct HyperparamAssignment {
  std::string algorithm;
  std::string id;
  std::map<std::string, double> params;
};

enum class Aggregation { Mean, Median, Min };

Aggregation aggregation_from_string(const std::string& name);

/// Collapse per-seed records into one value per (environment, algorithm,
/// hyperparam_id); keys are the hyperparam ids.
ValueMap aggregate_values(const std::vector<RunRecord>& records,
                          Aggregation aggregation);

struct PipelineConfig {
  std::string mdp_source = "builtin:gridworld8";  // "builtin:<name>" or a fixture path
  std::string environment_name = "gridworld8";
  std::string behavior_level = "medium";
  BehaviorEpsilons epsilons;
  int n_trajectories = 999;
  double split_ratio = 0.8;
  std::vector<std::string> algorithms = {"bc", "cq"};
  int assignments_per_algorithm = 8;
  int seeds = 3;
  std::uint64_t master_seed = 0;
  Aggregation aggregation = Aggregation::Mean;
  // grids straddle the under/fully-trained boundary at the default data size
  std::vector<double> bc_alpha_grid = {0.0, 0.01, 0.1, 1.0, 10.0};
  std::vector<double> cq_alpha_grid = {0.0, 1.0, 10.0, 1e6};
  std::vector<double> cq_learning_rate_grid = {0.001, 0.003, 0.01, 0.05};
  std::vector<double> cq_sweeps_grid = {1, 2, 5, 15};
  int fqe_iterations = 300;
  double value_iteration_tol = 1e-8;

  void validate() const;  // throws with the offending field named
};

struct PipelineResult {
  std::vector<RunRecord> records;
  std::vector<ScoreTable> score_tables;  // one per seed round
  ValueMap values;                       // seed-aggregated, keyed by hyperparam id
  std::vector<HyperparamAssignment> assignments;
  TabularMdp mdp;
};

/// Full desk-scale pipeline: behavior policy -> dataset -> per-seed-round
/// split/train/score -> exact online evaluation. Deterministic given the
/// master seed.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace eop
