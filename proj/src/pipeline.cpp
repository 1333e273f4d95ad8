#include "eop/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "eop/random.hpp"
#include "eop/scores.hpp"
#include "eop/train.hpp"

namespace eop {

Aggregation aggregation_from_string(const std::string& name) {
  if (name == "mean") return Aggregation::Mean;
  if (name == "median") return Aggregation::Median;
  if (name == "min") return Aggregation::Min;
  throw std::invalid_argument("unknown aggregation: " + name);
}

ValueMap aggregate_values(const std::vector<RunRecord>& records,
                          Aggregation aggregation) {
  std::map<std::string, std::vector<double>> grouped;
  for (const RunRecord& r : records) grouped[r.hyperparam_id].push_back(r.value);

  ValueMap out;
  for (auto& [id, values] : grouped) {
    std::sort(values.begin(), values.end());
    switch (aggregation) {
      case Aggregation::Mean: {
        double sum = 0.0;
        for (double v : values) sum += v;
        out[id] = sum / static_cast<double>(values.size());
        break;
      }
      case Aggregation::Median: {
        const std::size_t n = values.size();
        out[id] = (n % 2 == 1) ? values[n / 2]
                               : 0.5 * (values[n / 2 - 1] + values[n / 2]);
        break;
      }
      case Aggregation::Min:
        out[id] = values.front();
        break;
    }
  }
  return out;
}

void PipelineConfig::validate() const {
  const auto fail = [](const std::string& message) {
    throw std::invalid_argument("config: " + message);
  };
  if (mdp_source.empty()) fail("mdp_source must not be empty");
  if (environment_name.empty()) fail("environment_name must not be empty");
  behavior_level_from_string(behavior_level);  // throws on a bad level
  epsilons.validate();
  if (n_trajectories < 2) fail("n_trajectories must be >= 2");
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) fail("split_ratio must lie in (0, 1)");
  if (algorithms.empty()) fail("algorithms must not be empty");
  for (const std::string& algo : algorithms) {
    if (algo != "bc" && algo != "cq") fail("unknown algorithm: " + algo);
  }
  if (assignments_per_algorithm < 1) fail("assignments_per_algorithm must be >= 1");
  if (seeds < 1) fail("seeds must be >= 1");
  if (bc_alpha_grid.empty()) fail("bc.alpha_grid must not be empty");
  if (cq_alpha_grid.empty()) fail("cq.alpha_grid must not be empty");
  if (cq_learning_rate_grid.empty()) fail("cq.learning_rate_grid must not be empty");
  if (cq_sweeps_grid.empty()) fail("cq.sweeps_grid must not be empty");
  if (fqe_iterations < 1) fail("fqe_iterations must be >= 1");
  if (value_iteration_tol <= 0.0) fail("value_iteration_tol must be positive");
}

namespace {

TabularMdp resolve_mdp(const std::string& source) {
  const std::string prefix = "builtin:";
  if (source.rfind(prefix, 0) == 0) return builtin_mdp(source.substr(prefix.size()));
  return load_mdp(source);
}

std::string assignment_id(const std::string& algorithm, int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%03d", index);
  return algorithm + "-" + buf;
}

double pick(Rng& rng, const std::vector<double>& grid) {
  return grid[rng.next_below(grid.size())];
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
  config.validate();

  PipelineResult result;
  result.mdp = resolve_mdp(config.mdp_source);

  const Eigen::MatrixXd q_star =
      value_iteration(result.mdp, config.value_iteration_tol);
  const TabularPolicy behavior = make_behavior_policy(
      behavior_level_from_string(config.behavior_level), q_star, config.epsilons);

  const std::uint64_t collect_seed = derive_seed(config.master_seed, 1);
  Dataset dataset = collect_dataset(result.mdp, behavior, config.n_trajectories,
                                    collect_seed);
  dataset.provenance = config.behavior_level + "/seed-" + std::to_string(collect_seed);

  // Hyperparameter assignments are sampled once and shared by all seed rounds.
  Rng sampler(derive_seed(config.master_seed, 2));
  for (const std::string& algo : config.algorithms) {
    for (int i = 0; i < config.assignments_per_algorithm; ++i) {
      HyperparamAssignment h;
      h.algorithm = algo;
      h.id = assignment_id(algo, i);
      if (algo == "bc") {
        h.params["laplace_alpha"] = pick(sampler, config.bc_alpha_grid);
      } else {
        h.params["penalty_alpha"] = pick(sampler, config.cq_alpha_grid);
        h.params["learning_rate"] = pick(sampler, config.cq_learning_rate_grid);
        h.params["sweeps"] = pick(sampler, config.cq_sweeps_grid);
      }
      result.assignments.push_back(std::move(h));
    }
  }

  // One round per seed: re-split, retrain every assignment, score on that
  // round's validation split, and evaluate exactly.
  for (int seed = 0; seed < config.seeds; ++seed) {
    const std::uint64_t split_seed =
        derive_seed(config.master_seed, 1000 + static_cast<std::uint64_t>(seed));
    const auto [train, validation] =
        split_train_validation(dataset, config.split_ratio, split_seed);

    ScoreTable table;
    table.set_direction("fqe", ScoreDirection::HigherIsBetter);
    table.set_direction("td_error", ScoreDirection::LowerIsBetter);
    table.set_direction("action_diff", ScoreDirection::LowerIsBetter);

    for (const HyperparamAssignment& h : result.assignments) {
      TabularPolicy policy;
      if (h.algorithm == "bc") {
        policy = train_bc(train, result.mdp.states, result.mdp.actions,
                          BcHyperparams{h.params.at("laplace_alpha")});
      } else {
        ConservativeQHyperparams cq;
        cq.penalty_alpha = h.params.at("penalty_alpha");
        cq.learning_rate = h.params.at("learning_rate");
        cq.sweeps = static_cast<int>(h.params.at("sweeps"));
        policy = train_conservative_q(train, result.mdp.states,
                                      result.mdp.actions, result.mdp.gamma, cq)
                     .policy;
      }

      result.records.push_back(RunRecord{
          h.algorithm, config.environment_name, h.id, seed,
          policy_evaluation_exact(result.mdp, policy)});

      const Eigen::MatrixXd fqe_q =
          fqe_q_table(policy, validation, result.mdp.states, result.mdp.actions,
                      result.mdp.gamma, config.fqe_iterations);
      double fqe_value = 0.0;
      std::size_t starts = 0;
      for (const Trajectory& trajectory : validation.trajectories) {
        if (trajectory.empty()) continue;
        const int s0 = trajectory.front().state;
        fqe_value += fqe_q.row(s0).dot(policy.probs.row(s0));
        ++starts;
      }
      fqe_value /= static_cast<double>(starts);

      table.set_score(h.id, "fqe", fqe_value);
      table.set_score(h.id, "td_error",
                      td_error_score(policy, fqe_q, validation, result.mdp.gamma));
      table.set_score(h.id, "action_diff",
                      action_difference_score(policy, validation));
    }
    result.score_tables.push_back(std::move(table));
  }

  result.values = aggregate_values(result.records, config.aggregation);
  return result;
}

}  // namespace eop
