#include "eop/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "eop/random.hpp"

namespace eop {

namespace {

void check_finite(const Eigen::ArrayXd& values) {
  if (!values.isFinite().all()) {
    throw std::invalid_argument("non-finite input");
  }
}

void check_budget(int budget) {
  if (budget < 1) throw std::invalid_argument("budget must be >= 1");
}

}  // namespace

ValueSample::ValueSample(Eigen::ArrayXd values, std::string label)
    : values_(std::move(values)), label_(std::move(label)) {
  if (values_.size() == 0) throw std::invalid_argument("empty sample");
  check_finite(values_);
  std::sort(values_.data(), values_.data() + values_.size());
}

ValueSample::ValueSample(const std::vector<double>& values, std::string label)
    : ValueSample(Eigen::Map<const Eigen::ArrayXd>(values.data(),
                                                   static_cast<Eigen::Index>(values.size())),
                  std::move(label)) {}

EopPoint EopCurve::point(int budget) const {
  if (budget < 1 || budget > budgets()) {
    throw std::out_of_range("budget outside curve range");
  }
  return EopPoint{budget, means[budget - 1], stds[budget - 1]};
}

SelectionRound::SelectionRound(Eigen::ArrayXd ordered_values)
    : values_(std::move(ordered_values)) {
  if (values_.size() == 0) throw std::invalid_argument("empty round");
  check_finite(values_);
}

SelectionRound::SelectionRound(const std::vector<double>& ordered_values)
    : SelectionRound(Eigen::Map<const Eigen::ArrayXd>(
          ordered_values.data(), static_cast<Eigen::Index>(ordered_values.size()))) {}

EopCurve eop_plugin(const ValueSample& sample, int max_budget) {
  check_budget(max_budget);
  const Eigen::ArrayXd& v = sample.values();
  const Eigen::Index n = v.size();

  // Merge ties into single support points; the ECDF jump covers duplicates.
  std::vector<double> support;
  std::vector<double> cdf;
  support.reserve(static_cast<std::size_t>(n));
  cdf.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!support.empty() && v[i] == support.back()) {
      cdf.back() = static_cast<double>(i + 1) / static_cast<double>(n);
    } else {
      support.push_back(v[i]);
      cdf.push_back(static_cast<double>(i + 1) / static_cast<double>(n));
    }
  }

  EopCurve curve;
  curve.n = static_cast<long>(n);
  curve.means.resize(max_budget);
  curve.stds.resize(max_budget);
  for (int b = 1; b <= max_budget; ++b) {
    double mean = 0.0;
    double second_moment = 0.0;
    double prev_pow = 0.0;  // F(v_0)^b := 0
    for (std::size_t k = 0; k < support.size(); ++k) {
      const double pow_k = std::pow(cdf[k], b);
      const double jump = pow_k - prev_pow;
      mean += support[k] * jump;
      second_moment += support[k] * support[k] * jump;
      prev_pow = pow_k;
    }
    curve.means[b - 1] = mean;
    // clamp against round-off when the distribution is (near-)degenerate
    curve.stds[b - 1] = std::sqrt(std::max(0.0, second_moment - mean * mean));
  }
  return curve;
}

MaxMoments expected_max_bruteforce(const ValueSample& sample, int budget,
                                   std::uint64_t tuple_cap) {
  check_budget(budget);
  const Eigen::ArrayXd& v = sample.values();
  const std::uint64_t n = static_cast<std::uint64_t>(v.size());

  std::uint64_t total = 1;
  for (int i = 0; i < budget; ++i) {
    if (total > tuple_cap / n) throw std::invalid_argument("enumeration too large");
    total *= n;
  }

  // Odometer over index tuples; digit 0 is the fastest-moving one, so tuples
  // are visited in ascending tuple-index order. prefix_max[i] is the max of
  // digits i..b-1, giving O(1) amortized updates of the tuple maximum.
  std::vector<std::uint64_t> digits(static_cast<std::size_t>(budget), 0);
  std::vector<double> prefix_max(static_cast<std::size_t>(budget) + 1);
  prefix_max[static_cast<std::size_t>(budget)] = -std::numeric_limits<double>::infinity();
  for (int i = budget - 1; i >= 0; --i) prefix_max[static_cast<std::size_t>(i)] = v[0];

  double sum = 0.0;
  for (std::uint64_t t = 0;; ++t) {
    sum += prefix_max[0];
    if (t + 1 == total) break;
    std::size_t pos = 0;
    while (digits[pos] == n - 1) {
      digits[pos] = 0;
      ++pos;
    }
    ++digits[pos];
    for (std::size_t i = pos + 1; i-- > 0;) {
      prefix_max[i] = std::max(v[static_cast<Eigen::Index>(digits[i])], prefix_max[i + 1]);
    }
  }
  const double mean = sum / static_cast<double>(total);

  // second pass: centered second moment in the same tuple order
  std::fill(digits.begin(), digits.end(), 0);
  for (int i = budget - 1; i >= 0; --i) prefix_max[static_cast<std::size_t>(i)] = v[0];
  double sq = 0.0;
  for (std::uint64_t t = 0;; ++t) {
    const double d = prefix_max[0] - mean;
    sq += d * d;
    if (t + 1 == total) break;
    std::size_t pos = 0;
    while (digits[pos] == n - 1) {
      digits[pos] = 0;
      ++pos;
    }
    ++digits[pos];
    for (std::size_t i = pos + 1; i-- > 0;) {
      prefix_max[i] = std::max(v[static_cast<Eigen::Index>(digits[i])], prefix_max[i + 1]);
    }
  }
  return MaxMoments{mean, std::sqrt(sq / static_cast<double>(total))};
}

MonteCarloEstimate expected_max_montecarlo(const ValueSample& sample, int budget,
                                           long trials, std::uint64_t seed) {
  check_budget(budget);
  if (trials < 100) throw std::invalid_argument("trials must be >= 100");
  const Eigen::ArrayXd& v = sample.values();
  const std::size_t n = static_cast<std::size_t>(v.size());

  Rng rng(seed);
  double sum = 0.0;
  double sq = 0.0;
  for (long t = 0; t < trials; ++t) {
    double m = v[static_cast<Eigen::Index>(rng.next_below(n))];
    for (int i = 1; i < budget; ++i) {
      m = std::max(m, v[static_cast<Eigen::Index>(rng.next_below(n))]);
    }
    sum += m;
    sq += m * m;
  }
  const double mean = sum / static_cast<double>(trials);
  const double var =
      std::max(0.0, sq / static_cast<double>(trials) - mean * mean);
  return MonteCarloEstimate{mean, std::sqrt(var / static_cast<double>(trials))};
}

EopCurve eop_vanilla_average(const std::vector<SelectionRound>& rounds,
                             int max_budget) {
  check_budget(max_budget);
  if (rounds.empty()) throw std::invalid_argument("no selection rounds");

  Eigen::Index shortest = rounds.front().size();
  for (const SelectionRound& r : rounds) shortest = std::min(shortest, r.size());
  const int budgets = std::min<int>(max_budget, static_cast<int>(shortest));
  const std::size_t m = rounds.size();

  // running maximum per round, then across-round mean/std per budget
  Eigen::MatrixXd running(static_cast<Eigen::Index>(m), budgets);
  for (std::size_t r = 0; r < m; ++r) {
    const Eigen::ArrayXd& vals = rounds[r].ordered_values();
    double cur = vals[0];
    running(static_cast<Eigen::Index>(r), 0) = cur;
    for (int b = 1; b < budgets; ++b) {
      cur = std::max(cur, vals[b]);
      running(static_cast<Eigen::Index>(r), b) = cur;
    }
  }

  EopCurve curve;
  curve.n = static_cast<long>(m);
  curve.means = running.colwise().mean().array();
  curve.stds.resize(budgets);
  if (m == 1) {
    curve.stds.setZero();
  } else {
    for (int b = 0; b < budgets; ++b) {
      const double mu = curve.means[b];
      const double ss = (running.col(b).array() - mu).square().sum();
      curve.stds[b] = std::sqrt(ss / static_cast<double>(m - 1));
    }
  }
  return curve;
}

}  // namespace eop
