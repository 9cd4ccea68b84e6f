#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "dsg/game.hpp"
#include "dsg/lp.hpp"
#include "dsg/optimistic.hpp"
#include "dsg/planning.hpp"
#include "dsg/rng.hpp"

namespace dsg::testutil {

/// Single-state game with the crossed 2x2 features used across the examples:
/// M_0 = I, M_1 = antidiagonal(1).
inline Dsg toy_game_2x2(double r00 = 0.2, double r10 = 0.8, double r01 = 0.0,
                        double r11 = 0.0) {
  Dsg g = Dsg::make_shape({1}, 2, 2, 2);
  g.features[0] << 1, 0, 0, 1;
  g.features[1] << 0, 1, 1, 0;
  g.r(0, 0, 0) = r00;
  g.r(0, 1, 0) = r10;
  g.r(0, 0, 1) = r01;
  g.r(0, 1, 1) = r11;
  return g;
}

/// Two-layer deterministic chain used by validate()-style tests; features are
/// pre-normalized so the game passes every structural check.
inline Dsg small_valid_game() {
  Dsg g = Dsg::make_shape({1, 2}, 2, 2, 2);
  double s = 1.0 / std::sqrt(2.0);
  g.features[0] << s, 0, 0, s;
  g.features[1] << 0, s, s, 0;
  for (int st = 0; st < 3; ++st)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) g.r(st, a, b) = 0.25 * (a + 1) + 0.1 * b;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      Eigen::VectorXd row(2);
      row << (a == 0 ? 1.0 : 0.3), (a == 0 ? 0.0 : 0.7);
      g.trans_row(0, a, b) = row;
    }
  }
  return g;
}

/// Brute-force solver for p=2 optimistic problems: sweeps theta over an angle
/// grid, solving the margin LP at every point, independent of the candidate
/// sampler it cross-checks.
inline double angle_grid_oracle(const OptimisticProblem& prob, int grid = 10000) {
  double best = -std::numeric_limits<double>::infinity();
  int m = prob.num_follower_actions();
  for (int i = 0; i < grid; ++i) {
    double alpha = 2.0 * std::numbers::pi * i / grid;
    Eigen::VectorXd theta(2);
    theta << std::cos(alpha), std::sin(alpha);
    bool inside = true;
    for (const auto& c : prob.version_rows)
      if (c.dot(theta) < 0.0) {
        inside = false;
        break;
      }
    if (!inside) continue;
    for (int b = 0; b < m; ++b) {
      SimplexLp lp;
      lp.num_actions = prob.num_actions;
      lp.support = prob.support;
      lp.objective.resize(prob.support.size());
      for (std::size_t j = 0; j < prob.support.size(); ++j)
        lp.objective[j] = prob.objectives[b][prob.support[j]];
      for (int b2 = 0; b2 < m; ++b2) {
        if (b2 == b) continue;
        Eigen::VectorXd row_full = prob.diff(b, b2) * theta;
        std::vector<double> row(prob.support.size());
        for (std::size_t j = 0; j < prob.support.size(); ++j)
          row[j] = row_full[prob.support[j]];
        lp.rows.push_back(std::move(row));
        lp.rhs.push_back(prob.epsilon);
      }
      LpSolution sol = solve_simplex_lp(lp);
      if (sol.status == LpSolution::Status::Optimal && sol.value > best)
        best = sol.value;
    }
  }
  return best;
}

/// Grid-search value of a single-state game under the true follower: 1-D
/// sweep for n = 2, uniform simplex samples otherwise.
inline double hindsight_grid_oracle(const Dsg& dsg, const FollowerOracle& oracle,
                                    int points = 10000) {
  double best = -std::numeric_limits<double>::infinity();
  RngStream rng(977);
  for (int i = 0; i <= points; ++i) {
    MixedStrategy x;
    x.probs = Eigen::VectorXd::Zero(dsg.n);
    if (dsg.n == 2) {
      double t = static_cast<double>(i) / points;
      x.probs << t, 1.0 - t;
    } else {
      std::vector<double> w = rng.simplex_uniform(dsg.n);
      for (int a = 0; a < dsg.n; ++a) x.probs[a] = w[a];
    }
    best = std::max(best, leader_expected_reward(StateId{1, 0}, x, dsg, oracle));
  }
  return best;
}

/// Backward-induction optimistic values where every per-state program is
/// solved by the p=2 angle grid with theta_star appended as a candidate.
/// Exact enough to witness the optimistic-value lower bound.
inline double grid_optimistic_root_value(const Dsg& dsg,
                                         const std::vector<Eigen::VectorXd>& rows,
                                         double epsilon,
                                         const Eigen::VectorXd& theta_star,
                                         int grid = 2000) {
  std::vector<Eigen::VectorXd> thetas;
  for (int i = 0; i < grid; ++i) {
    double alpha = 2.0 * std::numbers::pi * i / grid;
    Eigen::VectorXd theta(2);
    theta << std::cos(alpha), std::sin(alpha);
    bool inside = true;
    for (const auto& c : rows)
      if (c.dot(theta) < 0.0) inside = false;
    if (inside) thetas.push_back(theta);
  }
  thetas.push_back(theta_star);

  Eigen::VectorXd next(0);
  double root = 0.0;
  for (int layer = dsg.horizon; layer >= 1; --layer) {
    int offset = dsg.layer_offset(layer);
    int size = dsg.layer_sizes[layer - 1];
    Eigen::VectorXd layer_values(size);
    for (int idx = 0; idx < size; ++idx) {
      int s = offset + idx;
      OptimisticProblem prob = make_optimistic_problem(dsg, s, next, rows, epsilon);
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& theta : thetas) {
        for (int b = 0; b < dsg.m; ++b) {
          SimplexLp lp;
          lp.num_actions = prob.num_actions;
          lp.support = prob.support;
          lp.objective.resize(prob.support.size());
          for (std::size_t j = 0; j < prob.support.size(); ++j)
            lp.objective[j] = prob.objectives[b][prob.support[j]];
          for (int b2 = 0; b2 < dsg.m; ++b2) {
            if (b2 == b) continue;
            Eigen::VectorXd row_full = prob.diff(b, b2) * theta;
            std::vector<double> row(prob.support.size());
            for (std::size_t j = 0; j < prob.support.size(); ++j)
              row[j] = row_full[prob.support[j]];
            lp.rows.push_back(std::move(row));
            lp.rhs.push_back(prob.epsilon);
          }
          LpSolution sol = solve_simplex_lp(lp);
          if (sol.status == LpSolution::Status::Optimal) best = std::max(best, sol.value);
        }
      }
      layer_values[idx] = best;
      if (s == 0) root = best;
    }
    next = layer_values;
  }
  return root;
}

}  // namespace dsg::testutil
