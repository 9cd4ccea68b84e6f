#pragma once

#include <optional>
#include <vector>

#include "dsg/game.hpp"
#include "dsg/lp.hpp"

namespace dsg {

/// One state's optimistic planning problem: pick (x, theta, b) maximizing
/// q_b.x subject to x in the support simplex, theta unit-norm inside the
/// version space (rows c with c.theta >= 0), and decision margins
/// x' (M_b - M_b') theta >= epsilon against every rival action b'.
struct OptimisticProblem {
  int num_actions = 0;                       // n
  int feature_dim = 0;                       // p
  std::vector<int> support;                  // available leader actions
  std::vector<Eigen::VectorXd> objectives;   // per b, length n
  std::vector<Eigen::MatrixXd> margin_diffs; // [b * m + b'] = M_b - M_b'
  std::vector<Eigen::VectorXd> version_rows; // C
  double epsilon = 0.0;

  int num_follower_actions() const {
    return static_cast<int>(objectives.size());
  }
  const Eigen::MatrixXd& diff(int b, int b2) const {
    return margin_diffs[static_cast<std::size_t>(b) * objectives.size() + b2];
  }
};

struct OptimisticSolution {
  MixedStrategy x;
  Eigen::VectorXd theta;
  int action = 0;  // predicted follower response b
  double value = 0.0;
};

/// Builds the per-state problem from game tensors and next-layer values.
OptimisticProblem make_optimistic_problem(const Dsg& dsg, int state,
                                          const Eigen::VectorXd& next_values,
                                          const std::vector<Eigen::VectorXd>& version_rows,
                                          double epsilon);

/// Unit vectors theta with rows.theta >= -1e-12 componentwise. Draws by
/// rejection from the uniform sphere; when the acceptance rate collapses it
/// continues with geodesic hit-and-run from the last accepted point (seeded
/// through a feasibility LP if rejection never lands). Returns up to k
/// samples; throws SamplingExhausted when the region is (numerically) empty
/// or the proposal budget runs out with nothing accepted.
std::vector<Eigen::VectorXd> sample_version_space(
    const std::vector<Eigen::VectorXd>& rows, int p, int k, int budget,
    RngStream& rng);

/// Candidate-sampling heuristic for the optimistic problem. Guarantees of any
/// returned solution (the hard contract): theta is unit-norm with
/// rows.theta >= -1e-9, x lies on the support simplex, every margin is
/// >= epsilon - 1e-7, and value equals q_b.x. The value itself is best-effort:
/// the maximum over k sampled thetas crossed with every b, refined by one
/// margin-centering alternation round on the incumbent. Returns nullopt when
/// no (theta, b) candidate admits a feasible strategy (epsilon too large for
/// the current version space).
std::optional<OptimisticSolution> solve_optimistic_program(
    const OptimisticProblem& prob, int candidates, RngStream& rng,
    int budget = -1);

}  // namespace dsg
