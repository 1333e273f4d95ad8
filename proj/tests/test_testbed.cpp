#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>
#include <vector>

#include "eop/dataset.hpp"
#include "eop/mdp.hpp"
#include "eop/random.hpp"
#include "eop/scores.hpp"
#include "eop/train.hpp"
#include "oracles.hpp"

using namespace eop;

namespace {

const std::string kDataDir = std::string(EOP_SOURCE_DIR) + "/data";

TabularMdp single_state_mdp(double reward, double gamma) {
  TabularMdp mdp;
  mdp.states = 1;
  mdp.actions = 1;
  mdp.transitions = {Eigen::MatrixXd::Ones(1, 1)};
  mdp.rewards = Eigen::MatrixXd::Constant(1, 1, reward);
  mdp.initial_dist = Eigen::VectorXd::Ones(1);
  mdp.gamma = gamma;
  mdp.horizon = 10;
  mdp.name = "single";
  return mdp;
}

// s0 -(r=0)-> s1 -(r=1)-> s2, s2 absorbing
TabularMdp chain_mdp(double gamma) {
  TabularMdp mdp;
  mdp.states = 3;
  mdp.actions = 1;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(3, 3);
  p(0, 1) = 1.0;
  p(1, 2) = 1.0;
  p(2, 2) = 1.0;
  mdp.transitions = {p};
  mdp.rewards = Eigen::MatrixXd::Zero(3, 1);
  mdp.rewards(1, 0) = 1.0;
  mdp.initial_dist = Eigen::VectorXd::Zero(3);
  mdp.initial_dist[0] = 1.0;
  mdp.gamma = gamma;
  mdp.horizon = 10;
  mdp.name = "chain";
  return mdp;
}

// Q^pi(s,a) = R(s,a) + gamma * sum_s' P(s,a,s') V^pi(s')
Eigen::MatrixXd exact_q_of_policy(const TabularMdp& mdp, const TabularPolicy& policy) {
  const Eigen::VectorXd v = policy_state_values(mdp, policy);
  Eigen::MatrixXd q(mdp.states, mdp.actions);
  for (int a = 0; a < mdp.actions; ++a) {
    q.col(a) = mdp.rewards.col(a) + mdp.gamma * (mdp.transitions[a] * v);
  }
  return q;
}

// one single-transition trajectory per (s, a) pair of a deterministic MDP
Dataset full_coverage_sweep(const TabularMdp& mdp) {
  Dataset data;
  for (int s = 0; s < mdp.states; ++s) {
    if (mdp.is_absorbing(s)) continue;
    for (int a = 0; a < mdp.actions; ++a) {
      Eigen::Index s2 = 0;
      mdp.transitions[a].row(s).maxCoeff(&s2);
      data.trajectories.push_back(
          {Transition{s, a, mdp.rewards(s, a), static_cast<int>(s2), true}});
    }
  }
  return data;
}

}  // namespace

TEST_CASE("value iteration closed forms") {
  // single state, reward 1, gamma 0.9: Q* = 1 / (1 - gamma) = 10
  const Eigen::MatrixXd q = value_iteration(single_state_mdp(1.0, 0.9), 1e-10);
  CHECK(q(0, 0) == doctest::Approx(10.0).epsilon(1e-9));

  // gamma = 0 collapses to the reward table
  GridworldConfig cfg;
  cfg.gamma = 0.0;
  const TabularMdp myopic = make_gridworld(cfg);
  const Eigen::MatrixXd q0 = value_iteration(myopic, 1e-12);
  CHECK((q0 - myopic.rewards).cwiseAbs().maxCoeff() <= 1e-12);

  // two-step chain, hand backward induction: Q(s1) = 1, Q(s0) = gamma
  const Eigen::MatrixXd qc = value_iteration(chain_mdp(0.5), 1e-12);
  CHECK(qc(1, 0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(qc(0, 0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(qc(2, 0) == doctest::Approx(0.0));
}

TEST_CASE("exact policy evaluation") {
  // gamma = 0: V = E[R(s0, a0)]
  TabularMdp mdp = chain_mdp(0.0);
  TabularPolicy policy;
  policy.probs = Eigen::MatrixXd::Ones(3, 1);
  CHECK(policy_evaluation_exact(mdp, policy) == doctest::Approx(0.0));
  mdp.initial_dist << 0.0, 1.0, 0.0;
  CHECK(policy_evaluation_exact(mdp, policy) == doctest::Approx(1.0));

  // greedy on Q* attains the optimal value
  const TabularMdp world = builtin_mdp("gridworld8");
  const Eigen::MatrixXd q_star = value_iteration(world, 1e-10);
  const double v_greedy = policy_evaluation_exact(world, greedy_policy(q_star));
  const double v_star = world.initial_dist.dot(q_star.rowwise().maxCoeff());
  CHECK(v_greedy == doctest::Approx(v_star).epsilon(1e-7));

  // mirrored rewards under the uniform policy cancel to zero
  TabularMdp sym;
  sym.states = 1;
  sym.actions = 2;
  sym.transitions = {Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Ones(1, 1)};
  sym.rewards = Eigen::MatrixXd(1, 2);
  sym.rewards << 1.0, -1.0;
  sym.initial_dist = Eigen::VectorXd::Ones(1);
  sym.gamma = 0.9;
  TabularPolicy uniform;
  uniform.probs = Eigen::MatrixXd::Constant(1, 2, 0.5);
  CHECK(policy_evaluation_exact(sym, uniform) == doctest::Approx(0.0));
}

TEST_CASE("epsilon-greedy policies") {
  const TabularMdp world = builtin_mdp("gridworld8");
  const Eigen::MatrixXd q_star = value_iteration(world, 1e-10);

  const TabularPolicy random = make_epsilon_greedy(q_star, 1.0);
  CHECK((random.probs.array() - 0.25).abs().maxCoeff() <= 1e-15);

  const TabularPolicy greedy = make_epsilon_greedy(q_star, 0.0);
  for (int s = 0; s < world.states; ++s) {
    CHECK(greedy.probs.row(s).maxCoeff() == 1.0);
  }

  CHECK_THROWS(make_behavior_policy(BehaviorLevel::Low, q_star,
                                    BehaviorEpsilons{0.1, 0.3, 0.6}));
}

TEST_CASE("behavior levels are strictly ordered on the shipped MDP") {
  const TabularMdp world = builtin_mdp("gridworld8");
  const Eigen::MatrixXd q_star = value_iteration(world, 1e-10);
  const BehaviorEpsilons eps;  // 0.6 / 0.3 / 0.1

  const double v_low = policy_evaluation_exact(
      world, make_behavior_policy(BehaviorLevel::Low, q_star, eps));
  const double v_medium = policy_evaluation_exact(
      world, make_behavior_policy(BehaviorLevel::Medium, q_star, eps));
  const double v_high = policy_evaluation_exact(
      world, make_behavior_policy(BehaviorLevel::High, q_star, eps));
  CHECK(v_high > v_medium);
  CHECK(v_medium > v_low);
}

TEST_CASE("mdp validation rejects broken models") {
  TabularMdp mdp = chain_mdp(0.5);
  mdp.gamma = 1.0;
  CHECK_THROWS(mdp.validate());
  mdp = chain_mdp(0.5);
  mdp.transitions[0](0, 1) = 0.5;
  CHECK_THROWS(mdp.validate());
  mdp = chain_mdp(0.5);
  mdp.initial_dist[0] = 0.7;
  CHECK_THROWS(mdp.validate());
}

TEST_CASE("fixture files match the builtin definitions") {
  for (const std::string name : {"gridworld8", "gridworld8-det"}) {
    const TabularMdp loaded = load_mdp(kDataDir + "/" + name + ".mdp");
    const TabularMdp builtin = builtin_mdp(name);
    CHECK(loaded.states == builtin.states);
    CHECK(loaded.actions == builtin.actions);
    CHECK(loaded.gamma == builtin.gamma);
    CHECK(loaded.horizon == builtin.horizon);
    CHECK(loaded.name == builtin.name);
    CHECK((loaded.rewards - builtin.rewards).cwiseAbs().maxCoeff() == 0.0);
    CHECK((loaded.initial_dist - builtin.initial_dist).cwiseAbs().maxCoeff() == 0.0);
    for (int a = 0; a < builtin.actions; ++a) {
      CHECK((loaded.transitions[a] - builtin.transitions[a]).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("save/load round-trip") {
  const TabularMdp world = builtin_mdp("gridworld8");
  const std::string path =
      (std::filesystem::temp_directory_path() / "eop_roundtrip.mdp").string();
  save_mdp(world, path);
  const TabularMdp loaded = load_mdp(path);
  for (int a = 0; a < world.actions; ++a) {
    CHECK((loaded.transitions[a] - world.transitions[a]).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK((loaded.rewards - world.rewards).cwiseAbs().maxCoeff() == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("dataset collection") {
  const TabularMdp world = builtin_mdp("gridworld8-det");
  const Eigen::MatrixXd q_star = value_iteration(world, 1e-10);

  const TabularPolicy greedy = make_epsilon_greedy(q_star, 0.0);
  const Dataset data = collect_dataset(world, greedy, 99, 7);
  CHECK(data.trajectories.size() == 99);

  // deterministic MDP + deterministic policy: all trajectories identical
  for (const Trajectory& t : data.trajectories) {
    REQUIRE(t.size() == data.trajectories.front().size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      CHECK(t[i].state == data.trajectories.front()[i].state);
      CHECK(t[i].action == data.trajectories.front()[i].action);
      CHECK(t[i].next_state == data.trajectories.front()[i].next_state);
    }
  }
  CHECK(data.trajectories.front().back().done);

  // every sampled transition is reachable under P
  const TabularMdp windy = builtin_mdp("gridworld8");
  const TabularPolicy medium = make_epsilon_greedy(q_star, 0.3);
  const Dataset wdata = collect_dataset(windy, medium, 50, 3);
  for (const Trajectory& t : wdata.trajectories) {
    for (const Transition& tr : t) {
      CHECK(windy.transitions[tr.action](tr.state, tr.next_state) > 0.0);
    }
  }

  // same seed, same data
  const Dataset again = collect_dataset(windy, medium, 50, 3);
  CHECK(again.transition_count() == wdata.transition_count());
}

TEST_CASE("empirical frequencies converge to the occupancy measure") {
  const TabularMdp world = builtin_mdp("gridworld8");
  const Eigen::MatrixXd q_star = value_iteration(world, 1e-10);
  const TabularPolicy behavior = make_epsilon_greedy(q_star, 0.3);

  const Dataset data = collect_dataset(world, behavior, 9999, 13);
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(world.states, world.actions);
  for (const Trajectory& t : data.trajectories) {
    for (const Transition& tr : t) counts(tr.state, tr.action) += 1.0;
  }
  const Eigen::MatrixXd empirical = counts / counts.sum();
  const Eigen::MatrixXd expected = eop::testing::occupancy_frequencies(world, behavior);
  const double total_variation = 0.5 * (empirical - expected).cwiseAbs().sum();
  CHECK(total_variation <= 0.02);
}

TEST_CASE("trajectory-wise split") {
  const TabularMdp world = builtin_mdp("gridworld8");
  const Eigen::MatrixXd q_star = value_iteration(world, 1e-10);
  const Dataset data =
      collect_dataset(world, make_epsilon_greedy(q_star, 0.5), 100, 21);

  const auto [train, validation] = split_train_validation(data, 0.8, 5);
  CHECK(train.trajectories.size() == 80);
  CHECK(validation.trajectories.size() == 20);

  const auto [train2, validation2] = split_train_validation(data, 0.8, 5);
  CHECK(train2.trajectories.size() == 80);
  CHECK(train2.trajectories.front().size() == train.trajectories.front().size());

  // union of the parts is the original multiset of trajectories
  auto key = [](const Trajectory& t) {
    std::vector<int> k;
    for (const Transition& tr : t) {
      k.push_back(tr.state);
      k.push_back(tr.action);
      k.push_back(tr.next_state);
    }
    return k;
  };
  std::multiset<std::vector<int>> original, recombined;
  for (const Trajectory& t : data.trajectories) original.insert(key(t));
  for (const Trajectory& t : train.trajectories) recombined.insert(key(t));
  for (const Trajectory& t : validation.trajectories) recombined.insert(key(t));
  CHECK(original == recombined);

  Dataset tiny;
  tiny.trajectories.resize(1);
  CHECK_THROWS(split_train_validation(tiny, 0.5, 0));
  CHECK_THROWS(split_train_validation(data, 0.0, 0));
  CHECK_THROWS(split_train_validation(data, 1.0, 0));
}

TEST_CASE("behavioral cloning") {
  // a state seen only with one action becomes deterministic at alpha = 0
  Dataset data;
  data.trajectories.push_back({Transition{0, 2, -1.0, 1, true}});
  const TabularPolicy bc = train_bc(data, 2, 4, BcHyperparams{0.0});
  CHECK(bc.probs(0, 2) == 1.0);
  CHECK(bc.probs(1, 0) == doctest::Approx(0.25));  // unvisited -> uniform

  // huge smoothing dominates the counts
  const TabularPolicy smoothed = train_bc(data, 2, 4, BcHyperparams{1e6});
  CHECK((smoothed.probs.array() - 0.25).abs().maxCoeff() <= 1e-3);

  // data from a deterministic greedy policy is recovered exactly in value
  const TabularMdp world = builtin_mdp("gridworld8-det");
  const Eigen::MatrixXd q_star = value_iteration(world, 1e-10);
  const TabularPolicy greedy = make_epsilon_greedy(q_star, 0.0);
  const Dataset rollouts = collect_dataset(world, greedy, 20, 11);
  const TabularPolicy recovered =
      train_bc(rollouts, world.states, world.actions, BcHyperparams{0.0});
  for (const Trajectory& t : rollouts.trajectories) {
    for (const Transition& tr : t) {
      CHECK(recovered.probs(tr.state, tr.action) == 1.0);  // visited states exact
    }
  }
  CHECK(policy_evaluation_exact(world, recovered) ==
        doctest::Approx(policy_evaluation_exact(world, greedy)).epsilon(1e-9));
}

TEST_CASE("conservative q-learning") {
  const TabularMdp world = builtin_mdp("gridworld8-det");
  const Dataset sweep = full_coverage_sweep(world);

  // alpha = 0 on full-coverage deterministic data reaches the optimal value
  ConservativeQHyperparams h;
  h.penalty_alpha = 0.0;
  h.learning_rate = 1.0;
  h.sweeps = 400;
  const ConservativeQResult plain =
      train_conservative_q(sweep, world.states, world.actions, world.gamma, h);
  const Eigen::MatrixXd q_star = value_iteration(world, 1e-10);
  const double v_star = world.initial_dist.dot(q_star.rowwise().maxCoeff());
  CHECK(policy_evaluation_exact(world, plain.policy) ==
        doctest::Approx(v_star).epsilon(1e-6));

  // huge penalty confines the policy to in-dataset actions
  const Eigen::MatrixXd q2 = value_iteration(world, 1e-10);
  const Dataset narrow =
      collect_dataset(world, make_epsilon_greedy(q2, 0.2), 30, 9);
  std::set<std::pair<int, int>> seen;
  for (const Trajectory& t : narrow.trajectories) {
    for (const Transition& tr : t) seen.insert({tr.state, tr.action});
  }
  h.penalty_alpha = 1e6;
  h.sweeps = 50;
  const ConservativeQResult pessimistic =
      train_conservative_q(narrow, world.states, world.actions, world.gamma, h);
  for (int s = 0; s < world.states; ++s) {
    bool state_seen = false;
    for (int a = 0; a < world.actions; ++a) {
      if (seen.count({s, a})) state_seen = true;
    }
    if (!state_seen) continue;
    for (int a = 0; a < world.actions; ++a) {
      if (pessimistic.policy.probs(s, a) > 0.0) CHECK(seen.count({s, a}) == 1);
    }
  }

  // training is deterministic given the dataset
  const ConservativeQResult again =
      train_conservative_q(narrow, world.states, world.actions, world.gamma, h);
  CHECK((again.policy.probs - pessimistic.policy.probs).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_WITH(train_conservative_q(Dataset{}, 2, 2, 0.9, h), "empty dataset");
}

TEST_CASE("fqe score") {
  const TabularMdp world = builtin_mdp("gridworld8-det");
  const Eigen::MatrixXd q_star = value_iteration(world, 1e-10);

  // full-coverage data from a deterministic MDP: FQE matches exact evaluation.
  // The sweep dataset starts trajectories everywhere, so compare against the
  // start-state average rather than rho0.
  const Dataset sweep = full_coverage_sweep(world);
  const TabularPolicy policy = make_epsilon_greedy(q_star, 0.3);
  const Eigen::MatrixXd q =
      fqe_q_table(policy, sweep, world.states, world.actions, world.gamma, 800);
  const Eigen::MatrixXd q_exact = exact_q_of_policy(world, policy);
  for (int s = 0; s < world.states; ++s) {
    if (world.is_absorbing(s)) continue;
    for (int a = 0; a < world.actions; ++a) {
      CHECK(std::abs(q(s, a) - q_exact(s, a)) <= 1e-4);
    }
  }

  // episodic data from the start state on the shipped windy MDP: the score
  // approximates the rho0-weighted exact value
  const TabularMdp windy = builtin_mdp("gridworld8");
  const Eigen::MatrixXd q_star_windy = value_iteration(windy, 1e-10);
  const TabularPolicy behavior = make_epsilon_greedy(q_star_windy, 0.3);
  const Dataset big = collect_dataset(windy, behavior, 999, 17);
  const double score =
      fqe_score(behavior, big, windy.states, windy.actions, windy.gamma, 800);
  const double truth = policy_evaluation_exact(windy, behavior);
  CHECK(std::abs(score - truth) <= 0.05 * std::abs(truth));

  // gamma = 0: score is the mean over start states of E_pi[rhat(s0, a)]
  Dataset tiny;
  tiny.trajectories.push_back({Transition{0, 0, 2.0, 1, true}});
  tiny.trajectories.push_back({Transition{0, 1, 4.0, 1, true}});
  TabularPolicy half;
  half.probs = Eigen::MatrixXd::Constant(2, 2, 0.5);
  const double myopic = fqe_score(half, tiny, 2, 2, 0.0, 10);
  CHECK(myopic == doctest::Approx(0.5 * 2.0 + 0.5 * 4.0).epsilon(1e-12));

  CHECK_THROWS_WITH(fqe_score(half, Dataset{}, 2, 2, 0.9, 10), "empty validation set");
}

TEST_CASE("td error score") {
  const TabularMdp world = builtin_mdp("gridworld8-det");
  const Eigen::MatrixXd q_star = value_iteration(world, 1e-10);
  const TabularPolicy policy = make_epsilon_greedy(q_star, 0.2);
  const Dataset data = collect_dataset(world, policy, 200, 23);

  // the Bellman identity makes the TD error vanish on deterministic dynamics
  const Eigen::MatrixXd q_exact = exact_q_of_policy(world, policy);
  CHECK(td_error_score(policy, q_exact, data, world.gamma) <= 1e-9);

  // Q = 0 and gamma = 0 reduce to the mean absolute reward
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(world.states, world.actions);
  double mean_abs_r = 0.0;
  for (const Trajectory& t : data.trajectories) {
    for (const Transition& tr : t) mean_abs_r += std::abs(tr.reward);
  }
  mean_abs_r /= static_cast<double>(data.transition_count());
  CHECK(td_error_score(policy, zero, data, 0.0) == doctest::Approx(mean_abs_r));

  // a perturbed Q scores strictly worse than the exact one
  Rng rng(77);
  Eigen::MatrixXd noisy = q_exact;
  for (int s = 0; s < world.states; ++s) {
    for (int a = 0; a < world.actions; ++a) noisy(s, a) += rng.next_in(-5.0, 5.0);
  }
  CHECK(td_error_score(policy, noisy, data, world.gamma) >
        td_error_score(policy, q_exact, data, world.gamma));
}

TEST_CASE("action difference score") {
  const TabularMdp world = builtin_mdp("gridworld8-det");
  const Eigen::MatrixXd q_star = value_iteration(world, 1e-10);
  const TabularPolicy greedy = make_epsilon_greedy(q_star, 0.0);
  const Dataset data = collect_dataset(world, greedy, 30, 29);

  CHECK(action_difference_score(greedy, data) == doctest::Approx(0.0));

  TabularPolicy uniform;
  uniform.probs = Eigen::MatrixXd::Constant(world.states, world.actions, 0.25);
  CHECK(action_difference_score(uniform, data) == doctest::Approx(0.75));

  // BC matches the behavior at least as well as the uniform policy
  const TabularPolicy bc =
      train_bc(data, world.states, world.actions, BcHyperparams{0.0});
  CHECK(action_difference_score(bc, data) <= action_difference_score(uniform, data));
}
