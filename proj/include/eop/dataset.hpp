#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "eop/mdp.hpp"

namespace eop {

struct Transition {
  int state = 0;
  int action = 0;
  double reward = 0.0;
  int next_state = 0;
  bool done = false;
};

using Trajectory = std::vector<Transition>;

/// Logged trajectories plus a provenance tag (behavior level and seed).
struct Dataset {
  std::vector<Trajectory> trajectories;
  std::string provenance;

  std::size_t transition_count() const;
  bool empty() const { return trajectories.empty(); }
};

/// Samples n_trajectories full episodes under the policy. Episodes end on
/// entering an absorbing state or after mdp.horizon steps. No exploration
/// noise beyond the policy's own stochasticity; deterministic given seed.
Dataset collect_dataset(const TabularMdp& mdp, const TabularPolicy& policy,
                        int n_trajectories, std::uint64_t seed);

/// Trajectory-wise partition into (train, validation): floor(ratio * n)
/// trajectories in train, the rest in validation. Deterministic given seed;
/// relative trajectory order is preserved within each part.
std::pair<Dataset, Dataset> split_train_validation(const Dataset& dataset,
                                                   double ratio,
                                                   std::uint64_t seed);

}  // namespace eop
