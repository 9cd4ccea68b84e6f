#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dsg/game.hpp"

namespace dsg {

struct RandomDsgSpec {
  std::vector<int> layer_sizes;  // layer_sizes[0] must be 1
  int n = 4;
  int m = 4;
  int p = 4;
  std::uint64_t seed = 0;
};

struct PoachingSpec {
  int regions = 4;
  std::vector<double> patrol_costs = {1, 1, 2, 2};  // budget units per region
  double budget = 6;
  int horizon = 4;
  int animal_types = 3;      // feature dimension becomes animal_types + 1
  double catch_value = 1.0;  // raw reward for catching the poacher
  std::uint64_t seed = 0;
};

/// A generated game plus everything an experiment needs to replay it.
struct GeneratedInstance {
  Dsg dsg;
  Eigen::VectorXd theta_star;
  double feature_scale = 1.0;  // constant applied by feature normalization
  std::string description;
};

/// Layered game with uniform rewards, uniform-simplex transition rows,
/// uniform [-1,1] feature entries (then normalized), full availability, and a
/// uniform unit-sphere follower parameter.
GeneratedInstance random_dsg(const RandomDsgSpec& spec);

/// Patrol scheduling domain: states are (step, remaining budget), leader
/// actions are the patrol regions plus a zero-cost stand-down, transitions
/// deterministically spend budget, and the follower picks a region to poach.
/// Catching (a == b, a not stand-down) carries feature (0,...,0,-1) and raw
/// reward catch_value; otherwise features are the region's animal densities
/// and raw reward is minus the step's severity-weighted density. Raw rewards
/// are affinely rescaled into [0,1].
GeneratedInstance poaching_dsg(const PoachingSpec& spec);

}  // namespace dsg
