#include "eop/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace eop {

RankedList::RankedList(std::vector<std::string> policy_ids)
    : ids_(std::move(policy_ids)) {
  if (ids_.empty()) throw std::invalid_argument("empty ranking");
  std::set<std::string> seen;
  for (const std::string& id : ids_) {
    if (!seen.insert(id).second) {
      throw std::invalid_argument("duplicate policy id in ranking: " + id);
    }
  }
}

double normalize_best_behavioral(double v, double v_best, double offset) {
  if (!std::isfinite(v) || !std::isfinite(v_best) || !std::isfinite(offset)) {
    throw std::invalid_argument("non-finite input");
  }
  const double reference = v_best + offset;
  if (reference <= 0.0) {
    throw std::invalid_argument("non-positive reference value; supply offset");
  }
  return (v - v_best) / reference;
}

double inverse_normalized_regret_at_k(const RankedList& ranking,
                                      const ValueMap& values, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > ranking.size()) {
    throw std::invalid_argument("k out of range");
  }
  const auto lookup = [&values](const std::string& id) {
    auto it = values.find(id);
    if (it == values.end()) {
      throw std::invalid_argument("policy id missing from values: " + id);
    }
    return it->second;
  };

  double v_best = -std::numeric_limits<double>::infinity();
  double v_worst = std::numeric_limits<double>::infinity();
  for (const std::string& id : ranking.policy_ids()) {
    const double v = lookup(id);
    v_best = std::max(v_best, v);
    v_worst = std::min(v_worst, v);
  }
  if (v_best == v_worst) {
    std::cerr << "warning: all policy values equal; regret@" << k
              << " is 1.0 by convention\n";
    return 1.0;
  }

  double v_hat = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < k; ++i) {
    v_hat = std::max(v_hat, lookup(ranking.policy_ids()[static_cast<std::size_t>(i)]));
  }
  return (v_hat - v_worst) / (v_best - v_worst);
}

double spearman_rho(const RankedList& ranking_a, const RankedList& ranking_b) {
  const std::size_t n = ranking_a.size();
  if (ranking_b.size() != n) throw std::invalid_argument("mismatched id sets");
  if (n < 2) throw std::invalid_argument("need at least two ranked ids");

  std::unordered_map<std::string, std::size_t> rank_b;
  for (std::size_t i = 0; i < n; ++i) rank_b[ranking_b.policy_ids()[i]] = i;

  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto it = rank_b.find(ranking_a.policy_ids()[i]);
    if (it == rank_b.end()) throw std::invalid_argument("mismatched id sets");
    const double d = static_cast<double>(i) - static_cast<double>(it->second);
    sum_sq += d * d;
  }
  const double nn = static_cast<double>(n);
  return 1.0 - 6.0 * sum_sq / (nn * (nn * nn - 1.0));
}

}  // namespace eop
