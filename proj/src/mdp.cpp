#include "eop/mdp.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eop {

namespace {

constexpr double kRowSumTolerance = 1e-9;

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

void TabularMdp::validate() const {
  require(states > 0 && actions > 0, "MDP needs at least one state and action");
  require(static_cast<int>(transitions.size()) == actions,
          "one transition matrix per action required");
  require(rewards.rows() == states && rewards.cols() == actions,
          "reward matrix must be states x actions");
  require(initial_dist.size() == states, "rho0 must have one entry per state");
  require(gamma >= 0.0 && gamma < 1.0, "gamma must lie in [0, 1)");
  require(horizon >= 1, "horizon must be >= 1");
  for (int a = 0; a < actions; ++a) {
    require(transitions[a].rows() == states && transitions[a].cols() == states,
            "transition matrices must be states x states");
    require((transitions[a].array() >= 0.0).all(),
            "transition probabilities must be nonnegative");
    for (int s = 0; s < states; ++s) {
      require(std::abs(transitions[a].row(s).sum() - 1.0) <= kRowSumTolerance,
              "transition rows must sum to 1");
    }
  }
  require((initial_dist.array() >= 0.0).all(), "rho0 must be nonnegative");
  require(std::abs(initial_dist.sum() - 1.0) <= kRowSumTolerance,
          "rho0 must sum to 1");
  require(rewards.array().isFinite().all(), "rewards must be finite");
}

bool TabularMdp::is_absorbing(int state) const {
  for (int a = 0; a < actions; ++a) {
    if (transitions[a](state, state) != 1.0) return false;
    if (rewards(state, a) != 0.0) return false;
  }
  return true;
}

void TabularPolicy::validate() const {
  require(probs.rows() > 0 && probs.cols() > 0, "empty policy");
  require((probs.array() >= 0.0).all(), "policy probabilities must be nonnegative");
  for (Eigen::Index s = 0; s < probs.rows(); ++s) {
    require(std::abs(probs.row(s).sum() - 1.0) <= kRowSumTolerance,
            "policy rows must sum to 1");
  }
}

Eigen::MatrixXd value_iteration(const TabularMdp& mdp, double tol,
                                int max_iterations) {
  mdp.validate();
  require(tol > 0.0, "tol must be positive");

  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(mdp.states, mdp.actions);
  Eigen::MatrixXd next(mdp.states, mdp.actions);
  for (int it = 0; it < max_iterations; ++it) {
    const Eigen::VectorXd v = q.rowwise().maxCoeff();
    for (int a = 0; a < mdp.actions; ++a) {
      next.col(a) = mdp.rewards.col(a) + mdp.gamma * (mdp.transitions[a] * v);
    }
    const double delta = (next - q).cwiseAbs().maxCoeff();
    q.swap(next);
    // contraction: the Bellman residual of q is at most gamma * delta
    if (mdp.gamma * delta <= tol || delta == 0.0) return q;
  }
  throw std::runtime_error("value iteration did not converge");
}

Eigen::VectorXd policy_state_values(const TabularMdp& mdp,
                                    const TabularPolicy& policy) {
  mdp.validate();
  policy.validate();
  require(policy.states() == mdp.states && policy.actions() == mdp.actions,
          "policy shape does not match MDP");

  Eigen::MatrixXd p_pi = Eigen::MatrixXd::Zero(mdp.states, mdp.states);
  for (int a = 0; a < mdp.actions; ++a) {
    p_pi += policy.probs.col(a).asDiagonal() * mdp.transitions[a];
  }
  const Eigen::VectorXd r_pi =
      (mdp.rewards.array() * policy.probs.array()).rowwise().sum();

  const Eigen::MatrixXd system =
      Eigen::MatrixXd::Identity(mdp.states, mdp.states) - mdp.gamma * p_pi;
  return system.partialPivLu().solve(r_pi);
}

double policy_evaluation_exact(const TabularMdp& mdp,
                               const TabularPolicy& policy) {
  return mdp.initial_dist.dot(policy_state_values(mdp, policy));
}

TabularPolicy greedy_policy(const Eigen::MatrixXd& q) {
  TabularPolicy policy;
  policy.probs = Eigen::MatrixXd::Zero(q.rows(), q.cols());
  for (Eigen::Index s = 0; s < q.rows(); ++s) {
    Eigen::Index best = 0;
    q.row(s).maxCoeff(&best);
    policy.probs(s, best) = 1.0;
  }
  return policy;
}

TabularPolicy make_epsilon_greedy(const Eigen::MatrixXd& q, double epsilon) {
  require(epsilon >= 0.0 && epsilon <= 1.0, "epsilon must lie in [0, 1]");
  const double uniform = epsilon / static_cast<double>(q.cols());
  TabularPolicy policy;
  policy.probs = Eigen::MatrixXd::Constant(q.rows(), q.cols(), uniform);
  for (Eigen::Index s = 0; s < q.rows(); ++s) {
    Eigen::Index best = 0;
    q.row(s).maxCoeff(&best);
    policy.probs(s, best) += 1.0 - epsilon;
  }
  return policy;
}

void BehaviorEpsilons::validate() const {
  require(low >= 0.0 && low <= 1.0 && medium >= 0.0 && medium <= 1.0 &&
              high >= 0.0 && high <= 1.0,
          "epsilons must lie in [0, 1]");
  require(low > medium && medium > high,
          "epsilons must decrease strictly from low to high");
}

double BehaviorEpsilons::at(BehaviorLevel level) const {
  switch (level) {
    case BehaviorLevel::Low: return low;
    case BehaviorLevel::Medium: return medium;
    case BehaviorLevel::High: return high;
  }
  throw std::logic_error("unreachable");
}

BehaviorLevel behavior_level_from_string(const std::string& name) {
  if (name == "low") return BehaviorLevel::Low;
  if (name == "medium") return BehaviorLevel::Medium;
  if (name == "high") return BehaviorLevel::High;
  throw std::invalid_argument("unknown behavior level: " + name);
}

std::string to_string(BehaviorLevel level) {
  switch (level) {
    case BehaviorLevel::Low: return "low";
    case BehaviorLevel::Medium: return "medium";
    case BehaviorLevel::High: return "high";
  }
  throw std::logic_error("unreachable");
}

TabularPolicy make_behavior_policy(BehaviorLevel level,
                                   const Eigen::MatrixXd& q_star,
                                   const BehaviorEpsilons& epsilons) {
  epsilons.validate();
  return make_epsilon_greedy(q_star, epsilons.at(level));
}

TabularMdp make_gridworld(const GridworldConfig& config) {
  require(config.size >= 2, "grid must be at least 2x2");
  const int n = config.size;
  const int states = n * n;
  const int actions = 4;  // up, down, left, right
  const int goal = states - 1;

  TabularMdp mdp;
  mdp.states = states;
  mdp.actions = actions;
  mdp.gamma = config.gamma;
  mdp.horizon = config.horizon;
  mdp.name = "gridworld" + std::to_string(n) + (config.windy ? "" : "-det");
  mdp.transitions.assign(actions, Eigen::MatrixXd::Zero(states, states));
  mdp.rewards = Eigen::MatrixXd::Zero(states, actions);
  mdp.initial_dist = Eigen::VectorXd::Zero(states);
  mdp.initial_dist[0] = 1.0;  // start at the top-left corner

  const auto state_of = [n](int row, int col) { return row * n + col; };
  const auto move = [n](int row, int col, int action, int& out_row, int& out_col) {
    static const int dr[4] = {-1, 1, 0, 0};
    static const int dc[4] = {0, 0, -1, 1};
    out_row = row + dr[action];
    out_col = col + dc[action];
    if (out_row < 0 || out_row >= n || out_col < 0 || out_col >= n) {
      out_row = row;  // bump into the wall
      out_col = col;
    }
  };

  // windy cells: a short diagonal band in the middle of the grid
  const auto is_windy = [&](int row, int col) {
    if (!config.windy) return false;
    return row >= 2 && row <= n - 3 && col == row - 1;
  };

  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      const int s = state_of(row, col);
      if (s == goal) {
        for (int a = 0; a < actions; ++a) mdp.transitions[a](s, s) = 1.0;
        continue;  // absorbing, zero reward
      }
      for (int a = 0; a < actions; ++a) {
        int r2 = 0, c2 = 0;
        move(row, col, a, r2, c2);
        const int intended = state_of(r2, c2);
        if (is_windy(row, col)) {
          int wr = 0, wc = 0;
          move(row, col, 1, wr, wc);  // wind pushes one row down
          const int blown = state_of(wr, wc);
          mdp.transitions[a](s, intended) += 1.0 - config.wind_prob;
          mdp.transitions[a](s, blown) += config.wind_prob;
        } else {
          mdp.transitions[a](s, intended) = 1.0;
        }
        mdp.rewards(s, a) = config.step_penalty +
                            config.goal_bonus * mdp.transitions[a](s, goal);
      }
    }
  }
  mdp.validate();
  return mdp;
}

TabularMdp builtin_mdp(const std::string& name) {
  GridworldConfig config;
  if (name == "gridworld8") {
    return make_gridworld(config);
  }
  if (name == "gridworld8-det") {
    config.windy = false;
    return make_gridworld(config);
  }
  throw std::invalid_argument("unknown builtin MDP: " + name);
}

namespace {

// Tokenizer for the fixture format: whitespace-separated tokens, '#' starts
// a comment that runs to the end of the line.
class FixtureReader {
 public:
  explicit FixtureReader(const std::string& path) : in_(path), path_(path) {
    if (!in_) throw std::runtime_error("cannot open MDP fixture: " + path);
  }

  std::string next_token() {
    std::string token;
    while (in_ >> token) {
      if (token[0] == '#') {
        std::string rest;
        std::getline(in_, rest);
        continue;
      }
      return token;
    }
    throw std::runtime_error("unexpected end of MDP fixture: " + path_);
  }

  void expect(const std::string& keyword) {
    const std::string token = next_token();
    if (token != keyword) {
      throw std::runtime_error("MDP fixture " + path_ + ": expected '" +
                               keyword + "', got '" + token + "'");
    }
  }

  double next_number() {
    const std::string token = next_token();
    try {
      std::size_t used = 0;
      const double value = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      return value;
    } catch (const std::exception&) {
      throw std::runtime_error("MDP fixture " + path_ + ": bad number '" + token + "'");
    }
  }

  int next_int() { return static_cast<int>(next_number()); }

 private:
  std::ifstream in_;
  std::string path_;
};

void write_number(std::ostream& out, double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  out.write(buf, res.ptr - buf);
}

}  // namespace

TabularMdp load_mdp(const std::string& path) {
  FixtureReader reader(path);
  TabularMdp mdp;

  reader.expect("name");
  mdp.name = reader.next_token();
  reader.expect("states");
  mdp.states = reader.next_int();
  reader.expect("actions");
  mdp.actions = reader.next_int();
  reader.expect("gamma");
  mdp.gamma = reader.next_number();
  reader.expect("horizon");
  mdp.horizon = reader.next_int();
  if (mdp.states <= 0 || mdp.actions <= 0) {
    throw std::runtime_error("MDP fixture " + path + ": bad dimensions");
  }

  reader.expect("initial_dist");
  mdp.initial_dist.resize(mdp.states);
  for (int s = 0; s < mdp.states; ++s) mdp.initial_dist[s] = reader.next_number();

  reader.expect("rewards");
  mdp.rewards.resize(mdp.states, mdp.actions);
  for (int s = 0; s < mdp.states; ++s) {
    for (int a = 0; a < mdp.actions; ++a) mdp.rewards(s, a) = reader.next_number();
  }

  mdp.transitions.assign(mdp.actions, Eigen::MatrixXd(mdp.states, mdp.states));
  for (int a = 0; a < mdp.actions; ++a) {
    reader.expect("transitions");
    const int index = reader.next_int();
    if (index != a) {
      throw std::runtime_error("MDP fixture " + path + ": transition blocks out of order");
    }
    for (int s = 0; s < mdp.states; ++s) {
      for (int s2 = 0; s2 < mdp.states; ++s2) {
        mdp.transitions[a](s, s2) = reader.next_number();
      }
    }
  }
  mdp.validate();
  return mdp;
}

void save_mdp(const TabularMdp& mdp, const std::string& path) {
  mdp.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write MDP fixture: " + path);

  out << "# tabular MDP fixture\n";
  out << "name " << mdp.name << "\n";
  out << "states " << mdp.states << "\n";
  out << "actions " << mdp.actions << "\n";
  out << "gamma ";
  write_number(out, mdp.gamma);
  out << "\nhorizon " << mdp.horizon << "\n";

  out << "initial_dist\n";
  for (int s = 0; s < mdp.states; ++s) {
    write_number(out, mdp.initial_dist[s]);
    out << (s + 1 == mdp.states ? "\n" : " ");
  }

  out << "rewards\n";
  for (int s = 0; s < mdp.states; ++s) {
    for (int a = 0; a < mdp.actions; ++a) {
      write_number(out, mdp.rewards(s, a));
      out << (a + 1 == mdp.actions ? "\n" : " ");
    }
  }

  for (int a = 0; a < mdp.actions; ++a) {
    out << "transitions " << a << "\n";
    for (int s = 0; s < mdp.states; ++s) {
      for (int s2 = 0; s2 < mdp.states; ++s2) {
        write_number(out, mdp.transitions[a](s, s2));
        out << (s2 + 1 == mdp.states ? "\n" : " ");
      }
    }
  }
  if (!out) throw std::runtime_error("failed writing MDP fixture: " + path);
}

}  // namespace eop
