#include "dsg/planning.hpp"

#include <cmath>

namespace dsg {

namespace {

PlannedPolicy plan_backward(const Dsg& dsg, const Eigen::VectorXd& theta_star,
                            double margin, bool epsilon_mode) {
  int states = dsg.num_states();
  PlannedPolicy out;
  out.strategies.resize(static_cast<std::size_t>(states));
  out.values.v.assign(static_cast<std::size_t>(states), 0.0);

  Eigen::VectorXd next_values(0);
  for (int layer = dsg.horizon; layer >= 1; --layer) {
    int offset = dsg.layer_offset(layer);
    int size = dsg.layer_sizes[layer - 1];
    Eigen::VectorXd layer_values(size);
    for (int idx = 0; idx < size; ++idx) {
      int s = offset + idx;
      const auto& support = dsg.available[s];
      int d = static_cast<int>(support.size());

      bool found = false;
      double best_value = 0.0;
      MixedStrategy best_x;
      for (int b = 0; b < dsg.m; ++b) {
        SimplexLp lp;
        lp.num_actions = dsg.n;
        lp.support = support;
        Eigen::VectorXd q = action_value_vector(dsg, s, b, next_values);
        lp.objective.resize(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) lp.objective[j] = q[support[j]];
        for (int b2 = 0; b2 < dsg.m; ++b2) {
          if (b2 == b) continue;
          Eigen::VectorXd g = (dsg.features[b] - dsg.features[b2]) * theta_star;
          std::vector<double> row(static_cast<std::size_t>(d));
          for (int j = 0; j < d; ++j) row[j] = g[support[j]];
          lp.rows.push_back(std::move(row));
          lp.rhs.push_back(margin);
        }
        LpSolution sol = solve_simplex_lp(lp);
        if (sol.status != LpSolution::Status::Optimal) continue;
        if (!found || sol.value > best_value) {
          found = true;
          best_value = sol.value;
          best_x = sol.x;
        }
      }
      if (!found) {
        if (epsilon_mode)
          throw EpsilonInfeasible("no follower action admits the margin at a state");
        throw NumericalDegeneracy("no feasible follower action at tolerance");
      }
      out.strategies[static_cast<std::size_t>(s)] = best_x;
      out.values.v[static_cast<std::size_t>(s)] = best_value;
      layer_values[idx] = best_value;
    }
    next_values = layer_values;
  }
  return out;
}

}  // namespace

PlannedPolicy hindsight_policy(const Dsg& dsg, const Eigen::VectorXd& theta_star) {
  return plan_backward(dsg, theta_star, 0.0, false);
}

PlannedPolicy epsilon_conservative_policy(const Dsg& dsg,
                                          const Eigen::VectorXd& theta_star,
                                          double epsilon) {
  if (epsilon <= 0.0) throw SpecError("epsilon must be positive");
  return plan_backward(dsg, theta_star, epsilon, true);
}

ValueTable evaluate_policy_exact(const Dsg& dsg, const FollowerOracle& oracle,
                                 const std::vector<MixedStrategy>& policy) {
  int states = dsg.num_states();
  ValueTable table;
  table.v.assign(static_cast<std::size_t>(states), 0.0);
  Eigen::VectorXd next_values(0);
  for (int layer = dsg.horizon; layer >= 1; --layer) {
    int offset = dsg.layer_offset(layer);
    int size = dsg.layer_sizes[layer - 1];
    Eigen::VectorXd layer_values(size);
    for (int idx = 0; idx < size; ++idx) {
      int s = offset + idx;
      const MixedStrategy& x = policy[static_cast<std::size_t>(s)];
      int b = best_response(StateId{layer, idx}, x, oracle.theta_star, dsg,
                            oracle.tie_tol);
      double v = x.probs.dot(action_value_vector(dsg, s, b, next_values));
      table.v[static_cast<std::size_t>(s)] = v;
      layer_values[idx] = v;
    }
    next_values = layer_values;
  }
  return table;
}

std::pair<double, double> evaluate_policy_mc(const Dsg& dsg,
                                             const FollowerOracle& oracle,
                                             const std::vector<MixedStrategy>& policy,
                                             int num_rollouts, RngStream& rng) {
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < num_rollouts; ++i) {
    StateId s{1, 0};
    double ret = 0.0;
    for (int h = 1; h <= dsg.horizon; ++h) {
      int state = dsg.global_index(s);
      const MixedStrategy& x = policy[static_cast<std::size_t>(state)];
      int b = best_response(s, x, oracle.theta_star, dsg, oracle.tie_tol);
      int a = rng.categorical(x.probs);
      ret += dsg.r(state, a, b);
      if (h < dsg.horizon) s = step(s, a, b, dsg, rng);
    }
    sum += ret;
    sum_sq += ret * ret;
  }
  double mean = sum / num_rollouts;
  double stderr_ = 0.0;
  if (num_rollouts > 1) {
    double var = (sum_sq - num_rollouts * mean * mean) / (num_rollouts - 1);
    stderr_ = std::sqrt(std::max(var, 0.0) / num_rollouts);
  }
  return {mean, stderr_};
}

}  // namespace dsg
