#pragma once

#include <map>
#include <string>
#include <vector>

namespace eop {

/// Ordered list of distinct policy ids; position = rank, front = most preferred.
class RankedList {
 public:
  explicit RankedList(std::vector<std::string> policy_ids);

  const std::vector<std::string>& policy_ids() const { return ids_; }
  std::size_t size() const { return ids_.size(); }

 private:
  std::vector<std::string> ids_;
};

/// policy id -> true online value V(pi). std::map keeps iteration deterministic.
using ValueMap = std::map<std::string, double>;

/// (v - v_best) / (v_best + offset). The offset exists for environments with
/// non-positive reference returns; it must make v_best + offset positive.
double normalize_best_behavioral(double v, double v_best, double offset);

/// (V(best of first k ranked) - V(worst)) / (V(best) - V(worst)), with
/// best/worst taken over the full candidate set. 1 means the truly best
/// policy is inside the top-k prefix. All-equal values return 1.0 by
/// convention (a warning is printed to stderr).
double inverse_normalized_regret_at_k(const RankedList& ranking,
                                      const ValueMap& values, int k);

/// Tie-free Spearman rank correlation between two orderings of the same ids:
/// rho = 1 - 6 sum(d^2) / (n (n^2 - 1)).
double spearman_rho(const RankedList& ranking_a, const RankedList& ranking_b);

}  // namespace eop
