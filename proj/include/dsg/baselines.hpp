#pragma once

#include <optional>
#include <vector>

#include "dsg/game.hpp"
#include "dsg/learner.hpp"

namespace dsg {

/// All mixed strategies (z_1/g, ..., z_n/g) with nonnegative integer
/// compositions of g, in lexicographic order of z. Throws SizeLimit when the
/// count C(g+n-1, n-1) exceeds 10^6.
std::vector<MixedStrategy> enumerate_grid_strategies(int n, int g);

struct QLearningConfig {
  int episodes = 1;
  int granularity = 10;
  double explore = 0.1;                 // epsilon-greedy exploration rate
  std::optional<double> alpha_override; // fixed learning rate for ablations
};

/// Learned table over (state, grid-strategy) pairs, entries masked to the
/// strategies supported inside each state's available action set.
struct QTable {
  std::vector<MixedStrategy> grid;              // shared strategy list
  std::vector<std::vector<int>> valid;          // per state, indices into grid
  std::vector<std::vector<double>> q;           // per state, per valid index
  std::vector<std::vector<int>> visits;
};

struct QLearningOutcome {
  RunResult run;
  QTable table;
};

/// Tabular epsilon-greedy Q-learning on the induced single-agent process;
/// rewards and transitions are observed only through play. The default
/// learning rate decays with the visit count of the updated pair.
QLearningOutcome q_learning_run(const Dsg& dsg, const FollowerOracle& oracle,
                                const QLearningConfig& cfg, RngStream& rng);

/// Greedy strategy per state from a learned table (ties to the lowest index).
std::vector<MixedStrategy> greedy_policy(const QTable& table);

/// Plays a strategy drawn uniformly from the available-action simplex at
/// every step.
RunResult random_policy_run(const Dsg& dsg, const FollowerOracle& oracle,
                            int episodes, RngStream& rng);

}  // namespace dsg
