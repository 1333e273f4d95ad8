#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace eop {

/// A set of online returns V(pi_i) from one hyperparameter search.
/// Values are kept in ascending order; construction from unsorted input is
/// permutation-invariant. Empty or non-finite input is rejected.
class ValueSample {
 public:
  explicit ValueSample(Eigen::ArrayXd values, std::string label = "");
  explicit ValueSample(const std::vector<double>& values, std::string label = "");

  const Eigen::ArrayXd& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }
  double min() const { return values_[0]; }
  double max() const { return values_[values_.size() - 1]; }
  double mean() const { return values_.mean(); }
  const std::string& label() const { return label_; }

 private:
  Eigen::ArrayXd values_;  // ascending
  std::string label_;
};

struct EopPoint {
  int budget = 0;
  double mean = 0.0;
  double std = 0.0;
};

/// Expected-maximum curve: means[i] / stds[i] belong to budget i + 1.
/// n is the estimator's sample size (N values for the plug-in estimator,
/// M rounds for the averaging estimator).
struct EopCurve {
  Eigen::ArrayXd means;
  Eigen::ArrayXd stds;
  long n = 0;

  int budgets() const { return static_cast<int>(means.size()); }
  EopPoint point(int budget) const;
};

/// Online values of policies in the order one OPS run selected them.
class SelectionRound {
 public:
  explicit SelectionRound(Eigen::ArrayXd ordered_values);
  explicit SelectionRound(const std::vector<double>& ordered_values);

  const Eigen::ArrayXd& ordered_values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }

 private:
  Eigen::ArrayXd values_;
};

struct MaxMoments {
  double mean = 0.0;
  double std = 0.0;
};

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// ECDF plug-in estimate of the expected maximum of b i.i.d. draws
/// (with replacement) from the sample, for b = 1..max_budget. Duplicate
/// values collapse to a single ECDF support point. The std is the
/// order-statistic standard deviation under the same ECDF.
EopCurve eop_plugin(const ValueSample& sample, int max_budget);

/// Exact expected maximum over all N^b ordered tuples, summed in ascending
/// tuple order. Throws "enumeration too large" past tuple_cap.
MaxMoments expected_max_bruteforce(const ValueSample& sample, int budget,
                                   std::uint64_t tuple_cap = 10'000'000);

/// Monte Carlo estimate of the expected maximum of b uniform-with-replacement
/// draws. Deterministic given seed. Requires trials >= 100.
MonteCarloEstimate expected_max_montecarlo(const ValueSample& sample, int budget,
                                           long trials, std::uint64_t seed);

/// Mean-of-running-maxima estimator over selection rounds; valid for
/// non-i.i.d. (strategy-driven) selection. The curve stops at
/// min(max_budget, shortest round length); std is the across-round sample
/// standard deviation (0 when there is a single round).
EopCurve eop_vanilla_average(const std::vector<SelectionRound>& rounds,
                             int max_budget);

}  // namespace eop
