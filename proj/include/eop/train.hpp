#pragma once

#include <Eigen/Dense>

#include "eop/dataset.hpp"
#include "eop/mdp.hpp"

namespace eop {

struct BcHyperparams {
  double laplace_alpha = 0.0;  // >= 0
};

/// Count-based behavioral cloning:
/// pi(a|s) = (count(s,a) + alpha) / (count(s) + alpha * A).
/// States absent from the data fall back to the uniform policy.
TabularPolicy train_bc(const Dataset& train, int states, int actions,
                       const BcHyperparams& h);

struct ConservativeQHyperparams {
  double penalty_alpha = 1.0;  // subtracted from unseen (s,a) cells
  double learning_rate = 0.5;
  int sweeps = 20;
};

struct ConservativeQResult {
  Eigen::MatrixXd q;            // learned Q, no penalty
  Eigen::MatrixXd penalized_q;  // q minus penalty on out-of-dataset cells
  TabularPolicy policy;         // greedy w.r.t. penalized_q
};

/// Tabular Q-learning over the dataset transitions in a fixed order for
/// `sweeps` epochs, then greedification of the penalized Q. Deterministic
/// given the dataset order.
ConservativeQResult train_conservative_q(const Dataset& train, int states,
                                         int actions, double gamma,
                                         const ConservativeQHyperparams& h);

}  // namespace eop
