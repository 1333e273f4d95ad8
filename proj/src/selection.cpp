#include "eop/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "eop/random.hpp"

namespace eop {

void ScoreTable::set_score(const std::string& policy_id,
                           const std::string& method, double score) {
  if (!std::isfinite(score)) {
    throw std::invalid_argument("non-finite score for policy " + policy_id +
                                ", method " + method);
  }
  scores_[policy_id][method] = score;
}

void ScoreTable::set_direction(const std::string& method,
                               ScoreDirection direction) {
  directions_[method] = direction;
}

double ScoreTable::score(const std::string& policy_id,
                         const std::string& method) const {
  auto p = scores_.find(policy_id);
  if (p == scores_.end()) throw std::invalid_argument("unknown policy: " + policy_id);
  auto m = p->second.find(method);
  if (m == p->second.end()) {
    throw std::invalid_argument("policy " + policy_id + " has no score for method " + method);
  }
  return m->second;
}

ScoreDirection ScoreTable::direction(const std::string& method) const {
  auto it = directions_.find(method);
  if (it == directions_.end()) {
    throw std::invalid_argument("missing direction for method: " + method);
  }
  return it->second;
}

bool ScoreTable::has_method(const std::string& method) const {
  for (const auto& [id, row] : scores_) {
    if (row.count(method)) return true;
  }
  return false;
}

std::vector<std::string> ScoreTable::policy_ids() const {
  std::vector<std::string> out;
  out.reserve(scores_.size());
  for (const auto& [id, row] : scores_) out.push_back(id);
  return out;
}

std::vector<std::string> ScoreTable::methods() const {
  std::vector<std::string> out;
  for (const auto& [m, d] : directions_) out.push_back(m);
  return out;
}

RankedList rank_policies(const ScoreTable& table,
                         const SelectionStrategy& strategy) {
  if (table.empty()) throw std::invalid_argument("empty score table");
  std::vector<std::string> ids = table.policy_ids();  // ascending id order

  if (strategy.kind == SelectionStrategy::Kind::Uniform) {
    Rng rng(strategy.seed);
    rng.shuffle(ids);
    return RankedList(std::move(ids));
  }

  if (!table.has_method(strategy.method)) {
    throw std::invalid_argument("unknown method: " + strategy.method);
  }
  const ScoreDirection dir = table.direction(strategy.method);
  std::stable_sort(ids.begin(), ids.end(),
                   [&](const std::string& a, const std::string& b) {
                     const double sa = table.score(a, strategy.method);
                     const double sb = table.score(b, strategy.method);
                     return dir == ScoreDirection::HigherIsBetter ? sa > sb : sa < sb;
                   });
  return RankedList(std::move(ids));
}

Eigen::ArrayXd regret_curve(const RankedList& ranking, const ValueMap& values) {
  const int n = static_cast<int>(ranking.size());
  Eigen::ArrayXd curve(n);
  for (int b = 1; b <= n; ++b) {
    curve[b - 1] = inverse_normalized_regret_at_k(ranking, values, b);
  }
  return curve;
}

EopCurve uniform_regret_eop(const ValueMap& values, int max_budget) {
  if (values.size() < 2) throw std::invalid_argument("need at least two values");
  double lo = values.begin()->second;
  double hi = lo;
  for (const auto& [id, v] : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo == hi) throw std::invalid_argument("degenerate value range");

  // min-max normalization is increasing affine, so the normalized expected
  // max is the expected max of the normalized values
  Eigen::ArrayXd normalized(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const auto& [id, v] : values) normalized[i++] = (v - lo) / (hi - lo);
  return eop_plugin(ValueSample(std::move(normalized)), max_budget);
}

std::vector<SelectionRound> simulate_selection_rounds(
    const std::vector<ScoreTable>& tables, const ValueMap& values,
    const SelectionStrategy& strategy, int max_budget, bool with_replacement) {
  if (tables.empty()) throw std::invalid_argument("no score tables");
  if (max_budget < 1) throw std::invalid_argument("budget must be >= 1");

  std::vector<SelectionRound> rounds;
  rounds.reserve(tables.size());
  for (std::size_t r = 0; r < tables.size(); ++r) {
    const ScoreTable& table = tables[r];
    std::vector<std::string> ids = table.policy_ids();
    if (ids.size() != values.size()) {
      throw std::invalid_argument("score table does not cover the value set");
    }
    for (const std::string& id : ids) {
      if (!values.count(id)) {
        throw std::invalid_argument("score table does not cover the value set");
      }
    }

    const int take = std::min<int>(max_budget, static_cast<int>(ids.size()));
    std::vector<double> selected;
    selected.reserve(static_cast<std::size_t>(take));

    if (strategy.kind == SelectionStrategy::Kind::Uniform) {
      Rng rng(derive_seed(strategy.seed, static_cast<std::uint64_t>(r)));
      if (with_replacement) {
        for (int i = 0; i < take; ++i) {
          selected.push_back(values.at(ids[rng.next_below(ids.size())]));
        }
      } else {
        rng.shuffle(ids);
        for (int i = 0; i < take; ++i) {
          selected.push_back(values.at(ids[static_cast<std::size_t>(i)]));
        }
      }
    } else {
      const RankedList ranked = rank_policies(table, strategy);
      for (int i = 0; i < take; ++i) {
        selected.push_back(values.at(ranked.policy_ids()[static_cast<std::size_t>(i)]));
      }
    }
    rounds.emplace_back(selected);
  }
  return rounds;
}

}  // namespace eop
