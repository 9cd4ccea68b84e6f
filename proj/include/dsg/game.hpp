#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dsg/errors.hpp"
#include "dsg/rng.hpp"

namespace dsg {

/// State address: 1-based layer, 0-based index within the layer.
struct StateId {
  int layer = 1;
  int index = 0;

  friend bool operator==(const StateId&, const StateId&) = default;
};

/// Probability vector over the leader's full action set; entries outside the
/// state's available set must be zero.
struct MixedStrategy {
  Eigen::VectorXd probs;

  static MixedStrategy point_mass(int n, int action);
  static MixedStrategy uniform_over(int n, const std::vector<int>& actions);
};

/// Episodic layered game. States are globally indexed layer-major,
/// index-minor; all tensors use that order.
struct Dsg {
  int horizon = 1;                      // H
  std::vector<int> layer_sizes;         // layer_sizes[h-1] = |S_h|
  int n = 0;                            // leader actions
  int m = 0;                            // follower actions
  int p = 0;                            // feature dimension
  std::vector<std::vector<int>> available;     // per global state, sorted
  std::vector<double> reward;                  // [S][n][m], values in [0,1]
  std::vector<Eigen::VectorXd> transition;     // [S][n][m] -> next-layer row;
                                               // empty for last-layer states
  std::vector<Eigen::MatrixXd> features;       // m matrices, n x p

  int num_states() const;
  int layer_offset(int layer) const;           // global index of (layer, 0)
  int global_index(StateId s) const { return layer_offset(s.layer) + s.index; }
  StateId state_id(int global) const;
  int layer_of(int global) const { return state_id(global).layer; }

  double r(int state, int a, int b) const {
    return reward[(static_cast<std::size_t>(state) * n + a) * m + b];
  }
  double& r(int state, int a, int b) {
    return reward[(static_cast<std::size_t>(state) * n + a) * m + b];
  }
  const Eigen::VectorXd& trans_row(int state, int a, int b) const {
    return transition[(static_cast<std::size_t>(state) * n + a) * m + b];
  }
  Eigen::VectorXd& trans_row(int state, int a, int b) {
    return transition[(static_cast<std::size_t>(state) * n + a) * m + b];
  }

  /// Allocates all tensors for the given shape (rewards 0, transitions empty).
  static Dsg make_shape(std::vector<int> layer_sizes, int n, int m, int p);
};

/// The follower's private parameter and the tie tolerance used when deciding
/// whether two expected utilities count as equal.
struct FollowerOracle {
  Eigen::VectorXd theta_star;  // unit Euclidean norm
  double tie_tol = 1e-9;
};

/// Structural checks; returns human-readable violations (empty = valid).
std::vector<std::string> validate(const Dsg& dsg);

/// Scales every feature matrix by one positive constant c so that the largest
/// pairwise Frobenius norm of M_b - M_b' equals 1 (Frobenius upper-bounds the
/// operator norm, so the scaled pair differences have operator norm <= 1).
/// Returns the scaled game and c. Throws DegenerateFeatures when all feature
/// matrices are identical.
std::pair<Dsg, double> normalize_features(const Dsg& dsg);

/// Follower best response to mixed strategy x under parameter theta:
/// argmax_b x' M_b theta. Actions within tie_tol of the best utility are
/// ranked by the leader's expected immediate reward, then by lowest index.
int best_response(StateId s, const MixedStrategy& x, const Eigen::VectorXd& theta,
                  const Dsg& dsg, double tie_tol = 1e-9);

/// Leader's expected one-step reward against the truthful follower.
double leader_expected_reward(StateId s, const MixedStrategy& x, const Dsg& dsg,
                              const FollowerOracle& oracle);

/// Mixture of transition rows under x and the truthful follower's response.
Eigen::VectorXd aux_transition(StateId s, const MixedStrategy& x, const Dsg& dsg,
                               const FollowerOracle& oracle);

/// Samples the successor state of (s, a, b).
StateId step(StateId s, int a, int b, const Dsg& dsg, RngStream& rng);

/// True when x is a valid mixed strategy at state (length, nonnegativity,
/// sum ~1, zero mass outside the available set).
bool strategy_valid(const Dsg& dsg, int state, const MixedStrategy& x,
                    double tol = 1e-9);

/// q_b with q_b[a] = r(s,a,b) + P(s,a,b,.) . next_values. next_values spans
/// the next layer; pass an empty vector for last-layer states.
Eigen::VectorXd action_value_vector(const Dsg& dsg, int state, int b,
                                    const Eigen::VectorXd& next_values);

}  // namespace dsg
