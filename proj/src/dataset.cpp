#include "eop/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "eop/random.hpp"

namespace eop {

std::size_t Dataset::transition_count() const {
  std::size_t count = 0;
  for (const Trajectory& t : trajectories) count += t.size();
  return count;
}

Dataset collect_dataset(const TabularMdp& mdp, const TabularPolicy& policy,
                        int n_trajectories, std::uint64_t seed) {
  mdp.validate();
  policy.validate();
  if (policy.states() != mdp.states || policy.actions() != mdp.actions) {
    throw std::invalid_argument("policy shape does not match MDP");
  }
  if (n_trajectories < 1) throw std::invalid_argument("need at least one trajectory");

  std::vector<bool> absorbing(static_cast<std::size_t>(mdp.states));
  for (int s = 0; s < mdp.states; ++s) absorbing[static_cast<std::size_t>(s)] = mdp.is_absorbing(s);

  Dataset dataset;
  dataset.trajectories.reserve(static_cast<std::size_t>(n_trajectories));
  Rng rng(seed);
  for (int i = 0; i < n_trajectories; ++i) {
    Trajectory trajectory;
    int s = static_cast<int>(rng.next_weighted(mdp.initial_dist));
    for (int t = 0; t < mdp.horizon; ++t) {
      if (absorbing[static_cast<std::size_t>(s)]) break;
      const int a = static_cast<int>(rng.next_weighted(policy.probs.row(s)));
      const int s2 = static_cast<int>(rng.next_weighted(mdp.transitions[a].row(s)));
      const bool last = (t + 1 == mdp.horizon) || absorbing[static_cast<std::size_t>(s2)];
      trajectory.push_back(Transition{s, a, mdp.rewards(s, a), s2, last});
      s = s2;
    }
    dataset.trajectories.push_back(std::move(trajectory));
  }
  return dataset;
}

std::pair<Dataset, Dataset> split_train_validation(const Dataset& dataset,
                                                   double ratio,
                                                   std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw std::invalid_argument("ratio must lie strictly between 0 and 1");
  }
  const std::size_t n = dataset.trajectories.size();
  if (n < 2) throw std::invalid_argument("need at least two trajectories to split");

  const std::size_t n_train =
      static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n)));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  std::vector<bool> in_train(n, false);
  for (std::size_t i = 0; i < n_train; ++i) in_train[order[i]] = true;

  Dataset train, validation;
  train.provenance = dataset.provenance;
  validation.provenance = dataset.provenance;
  for (std::size_t i = 0; i < n; ++i) {
    (in_train[i] ? train : validation).trajectories.push_back(dataset.trajectories[i]);
  }
  return {std::move(train), std::move(validation)};
}

}  // namespace eop
