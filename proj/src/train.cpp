#include "eop/train.hpp"

#include <stdexcept>

namespace eop {

TabularPolicy train_bc(const Dataset& train, int states, int actions,
                       const BcHyperparams& h) {
  if (h.laplace_alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");

  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(states, actions);
  for (const Trajectory& trajectory : train.trajectories) {
    for (const Transition& t : trajectory) counts(t.state, t.action) += 1.0;
  }

  TabularPolicy policy;
  policy.probs.resize(states, actions);
  const double a_count = static_cast<double>(actions);
  for (int s = 0; s < states; ++s) {
    const double total = counts.row(s).sum();
    if (total == 0.0 && h.laplace_alpha == 0.0) {
      policy.probs.row(s).setConstant(1.0 / a_count);  // unvisited state
    } else {
      policy.probs.row(s) = (counts.row(s).array() + h.laplace_alpha) /
                            (total + h.laplace_alpha * a_count);
    }
  }
  return policy;
}

ConservativeQResult train_conservative_q(const Dataset& train, int states,
                                         int actions, double gamma,
                                         const ConservativeQHyperparams& h) {
  if (train.empty() || train.transition_count() == 0) {
    throw std::invalid_argument("empty dataset");
  }
  if (h.penalty_alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
  if (h.learning_rate <= 0.0 || h.learning_rate > 1.0) {
    throw std::invalid_argument("learning rate must lie in (0, 1]");
  }
  if (h.sweeps < 1) throw std::invalid_argument("sweeps must be >= 1");

  ConservativeQResult result;
  result.q = Eigen::MatrixXd::Zero(states, actions);
  Eigen::MatrixXd seen = Eigen::MatrixXd::Zero(states, actions);

  for (int sweep = 0; sweep < h.sweeps; ++sweep) {
    for (const Trajectory& trajectory : train.trajectories) {
      for (const Transition& t : trajectory) {
        seen(t.state, t.action) = 1.0;
        const double target =
            t.reward + gamma * result.q.row(t.next_state).maxCoeff();
        result.q(t.state, t.action) +=
            h.learning_rate * (target - result.q(t.state, t.action));
      }
    }
  }

  result.penalized_q =
      result.q - h.penalty_alpha * (1.0 - seen.array()).matrix();
  result.policy = greedy_policy(result.penalized_q);
  return result;
}

}  // namespace eop
