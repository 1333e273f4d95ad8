#pragma once

#include <Eigen/Dense>

#include "eop/dataset.hpp"
#include "eop/mdp.hpp"

namespace eop {

/// Tabular fitted-Q evaluation: iterated regression
/// Q(s,a) <- mean over validation transitions from (s,a) of
///           r + gamma * E_{a'~pi}[Q(s',a')].
/// Cells with no data stay at 0.
Eigen::MatrixXd fqe_q_table(const TabularPolicy& policy, const Dataset& validation,
                            int states, int actions, double gamma, int iterations);

/// Initial-state value under the FQE Q: the empirical mean over the
/// validation trajectories' start states of E_{a~pi}[Q(s0, a)].
/// Higher is better.
double fqe_score(const TabularPolicy& policy, const Dataset& validation,
                 int states, int actions, double gamma, int iterations);

/// Mean absolute temporal-difference error of the given Q over validation
/// transitions: |r + gamma * E_{a'~pi}[Q(s',a')] - Q(s,a)|. Lower is better.
double td_error_score(const TabularPolicy& policy, const Eigen::MatrixXd& q,
                      const Dataset& validation, double gamma);

/// Mean action-mismatch probability 1 - pi(a|s) over validation pairs.
/// Lower is better (closer to the behavioral policy).
double action_difference_score(const TabularPolicy& policy,
                               const Dataset& validation);

}  // namespace eop
