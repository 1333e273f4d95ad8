#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace eop {

/// Finite MDP: transitions[a](s, s') is P(s' | s, a), rewards(s, a) is the
/// expected immediate reward. horizon caps episode length during data
/// collection only; planning operations are infinite-horizon discounted.
struct TabularMdp {
  int states = 0;
  int actions = 0;
  std::vector<Eigen::MatrixXd> transitions;
  Eigen::MatrixXd rewards;
  Eigen::VectorXd initial_dist;
  double gamma = 0.99;
  int horizon = 100;
  std::string name;

  void validate() const;  // throws std::invalid_argument on a broken model
  bool is_absorbing(int state) const;
};

/// Row-stochastic policy matrix probs(s, a).
struct TabularPolicy {
  Eigen::MatrixXd probs;

  void validate() const;
  int states() const { return static_cast<int>(probs.rows()); }
  int actions() const { return static_cast<int>(probs.cols()); }
};

/// Optimal Q via value iteration; stops when the sup-norm Bellman residual
/// is at most tol.
Eigen::MatrixXd value_iteration(const TabularMdp& mdp, double tol,
                                int max_iterations = 1'000'000);

/// Exact state values V_pi = (I - gamma P_pi)^{-1} r_pi.
Eigen::VectorXd policy_state_values(const TabularMdp& mdp,
                                    const TabularPolicy& policy);

/// Exact scalar value rho0 . V_pi; the ground-truth "online evaluation".
double policy_evaluation_exact(const TabularMdp& mdp,
                               const TabularPolicy& policy);

/// Deterministic argmax policy (ties to the lowest action index).
TabularPolicy greedy_policy(const Eigen::MatrixXd& q);

/// pi(a|s) = epsilon / A + (1 - epsilon) at the greedy action.
TabularPolicy make_epsilon_greedy(const Eigen::MatrixXd& q, double epsilon);

enum class BehaviorLevel { Low, Medium, High };

/// Exploration rates per expertise level; must decrease strictly from low to
/// high so that higher levels are better.
struct BehaviorEpsilons {
  double low = 0.6;
  double medium = 0.3;
  double high = 0.1;

  void validate() const;
  double at(BehaviorLevel level) const;
};

BehaviorLevel behavior_level_from_string(const std::string& name);
std::string to_string(BehaviorLevel level);

TabularPolicy make_behavior_policy(BehaviorLevel level,
                                   const Eigen::MatrixXd& q_star,
                                   const BehaviorEpsilons& epsilons);

/// The default desk-scale world: size x size grid, start top-left, absorbing
/// goal bottom-right, step penalty everywhere, goal bonus on entering the
/// goal. Windy cells move the agent one row down with wind_prob instead of
/// executing the chosen action.
struct GridworldConfig {
  int size = 8;
  double step_penalty = -1.0;
  double goal_bonus = 50.0;
  bool windy = true;
  double wind_prob = 0.3;
  double gamma = 0.95;
  int horizon = 100;
};

TabularMdp make_gridworld(const GridworldConfig& config);

/// "gridworld8" (windy, the default) or "gridworld8-det" (deterministic).
TabularMdp builtin_mdp(const std::string& name);

/// Plain-text fixture format; see README for the layout.
TabularMdp load_mdp(const std::string& path);
void save_mdp(const TabularMdp& mdp, const std::string& path);

}  // namespace eop
