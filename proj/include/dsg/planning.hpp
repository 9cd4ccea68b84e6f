#pragma once

#include <utility>
#include <vector>

#include "dsg/game.hpp"
#include "dsg/lp.hpp"

namespace dsg {

/// Per-state continuation values, indexed like global states.
struct ValueTable {
  std::vector<double> v;
};

/// Full-information plan: one mixed strategy per state plus its values.
struct PlannedPolicy {
  std::vector<MixedStrategy> strategies;  // per global state
  ValueTable values;
};

/// Best policy given the follower parameter: backward induction solving, for
/// each state and candidate response b, an LP that maximizes immediate plus
/// continuation value subject to b being a (weak) best response, keeping the
/// best b. Throws NumericalDegeneracy if no b is feasible at tolerance.
PlannedPolicy hindsight_policy(const Dsg& dsg, const Eigen::VectorXd& theta_star);

/// Same scheme with a margin of epsilon on every rival response. Throws
/// EpsilonInfeasible when some state admits no margin-feasible action.
PlannedPolicy epsilon_conservative_policy(const Dsg& dsg,
                                          const Eigen::VectorXd& theta_star,
                                          double epsilon);

/// Exact expected value of a fixed policy under the truthful follower,
/// computed layer by layer.
ValueTable evaluate_policy_exact(const Dsg& dsg, const FollowerOracle& oracle,
                                 const std::vector<MixedStrategy>& policy);

/// Monte Carlo cross-check: mean and standard error of N rollout returns.
std::pair<double, double> evaluate_policy_mc(const Dsg& dsg,
                                             const FollowerOracle& oracle,
                                             const std::vector<MixedStrategy>& policy,
                                             int num_rollouts, RngStream& rng);

}  // namespace dsg
