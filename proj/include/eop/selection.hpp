#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eop/estimator.hpp"
#include "eop/metrics.hpp"

namespace eop {

enum class ScoreDirection { HigherIsBetter, LowerIsBetter };

/// OPS scores per policy per scoring method, with per-method direction
/// metadata. Every (policy, method) cell must be finite.
class ScoreTable {
 public:
  void set_score(const std::string& policy_id, const std::string& method,
                 double score);
  void set_direction(const std::string& method, ScoreDirection direction);

  double score(const std::string& policy_id, const std::string& method) const;
  ScoreDirection direction(const std::string& method) const;
  bool has_method(const std::string& method) const;

  std::vector<std::string> policy_ids() const;
  std::vector<std::string> methods() const;
  bool empty() const { return scores_.empty(); }

 private:
  std::map<std::string, std::map<std::string, double>> scores_;  // policy -> method -> score
  std::map<std::string, ScoreDirection> directions_;
};

/// uniform(seed): seeded random permutation. by_score(method): sort by the
/// method's score in its declared direction.
struct SelectionStrategy {
  enum class Kind { Uniform, ByScore };

  Kind kind = Kind::Uniform;
  std::string method;
  std::uint64_t seed = 0;

  static SelectionStrategy uniform(std::uint64_t seed) {
    return SelectionStrategy{Kind::Uniform, "", seed};
  }
  static SelectionStrategy by_score(std::string method) {
    return SelectionStrategy{Kind::ByScore, std::move(method), 0};
  }
  std::string name() const {
    return kind == Kind::Uniform ? "uniform" : method;
  }
};

/// Deterministic total order over the table's policies. by_score breaks score
/// ties by ascending policy id.
RankedList rank_policies(const ScoreTable& table, const SelectionStrategy& strategy);

/// Element b-1 is inverse_normalized_regret_at_k(ranking, values, b);
/// non-decreasing, last element 1.
Eigen::ArrayXd regret_curve(const RankedList& ranking, const ValueMap& values);

/// Plug-in EOP curve of the min-max-normalized values; the uniform-selection
/// regret-style report for uniform selection. Requires a non-degenerate value range.
EopCurve uniform_regret_eop(const ValueMap& values, int max_budget);

/// One SelectionRound per score table: policies ranked by that round's table
/// (or permuted uniformly) and their true values emitted in selection order,
/// truncated at max_budget. The replacement flag applies to the uniform
/// strategy only. Per-round uniform seeds derive from the strategy seed.
std::vector<SelectionRound> simulate_selection_rounds(
    const std::vector<ScoreTable>& tables, const ValueMap& values,
    const SelectionStrategy& strategy, int max_budget, bool with_replacement);

}  // namespace eop
