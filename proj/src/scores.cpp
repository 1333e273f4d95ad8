#include "eop/scores.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace eop {

namespace {

void check_nonempty(const Dataset& validation) {
  if (validation.empty() || validation.transition_count() == 0) {
    throw std::invalid_argument("empty validation set");
  }
}

}  // namespace

Eigen::MatrixXd fqe_q_table(const TabularPolicy& policy, const Dataset& validation,
                            int states, int actions, double gamma, int iterations) {
  check_nonempty(validation);
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");

  // Empirical model per (s,a) cell: mean reward and next-state frequencies.
  // The regression fixed point only depends on these cell means, so iterating
  // on the model is equivalent to re-regressing over the raw transitions.
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(states, actions);
  Eigen::MatrixXd mean_reward = Eigen::MatrixXd::Zero(states, actions);
  std::vector<Eigen::MatrixXd> model(
      static_cast<std::size_t>(actions), Eigen::MatrixXd::Zero(states, states));
  for (const Trajectory& trajectory : validation.trajectories) {
    for (const Transition& t : trajectory) {
      counts(t.state, t.action) += 1.0;
      mean_reward(t.state, t.action) += t.reward;
      model[static_cast<std::size_t>(t.action)](t.state, t.next_state) += 1.0;
    }
  }
  for (int s = 0; s < states; ++s) {
    for (int a = 0; a < actions; ++a) {
      if (counts(s, a) > 0.0) {
        mean_reward(s, a) /= counts(s, a);
        model[static_cast<std::size_t>(a)].row(s) /= counts(s, a);
      }
    }
  }

  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(states, actions);
  Eigen::MatrixXd next(states, actions);
  for (int it = 0; it < iterations; ++it) {
    const Eigen::VectorXd v =
        (q.array() * policy.probs.array()).rowwise().sum();  // E_{a~pi} Q(s,a)
    for (int a = 0; a < actions; ++a) {
      next.col(a) = mean_reward.col(a) +
                    gamma * (model[static_cast<std::size_t>(a)] * v);
    }
    // keep cells with no data at 0
    q = (counts.array() > 0.0).select(next.array(), 0.0).matrix();
  }
  return q;
}

double fqe_score(const TabularPolicy& policy, const Dataset& validation,
                 int states, int actions, double gamma, int iterations) {
  const Eigen::MatrixXd q =
      fqe_q_table(policy, validation, states, actions, gamma, iterations);
  double sum = 0.0;
  std::size_t count = 0;
  for (const Trajectory& trajectory : validation.trajectories) {
    if (trajectory.empty()) continue;
    const int s0 = trajectory.front().state;
    sum += q.row(s0).dot(policy.probs.row(s0));
    ++count;
  }
  if (count == 0) throw std::invalid_argument("empty validation set");
  return sum / static_cast<double>(count);
}

double td_error_score(const TabularPolicy& policy, const Eigen::MatrixXd& q,
                      const Dataset& validation, double gamma) {
  check_nonempty(validation);
  const Eigen::VectorXd v = (q.array() * policy.probs.array()).rowwise().sum();
  double sum = 0.0;
  std::size_t count = 0;
  for (const Trajectory& trajectory : validation.trajectories) {
    for (const Transition& t : trajectory) {
      sum += std::abs(t.reward + gamma * v[t.next_state] - q(t.state, t.action));
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

double action_difference_score(const TabularPolicy& policy,
                               const Dataset& validation) {
  check_nonempty(validation);
  double sum = 0.0;
  std::size_t count = 0;
  for (const Trajectory& trajectory : validation.trajectories) {
    for (const Transition& t : trajectory) {
      sum += 1.0 - policy.probs(t.state, t.action);
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

}  // namespace eop
