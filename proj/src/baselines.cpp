#include "dsg/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace dsg {

namespace {

constexpr long long kGridCap = 1'000'000;

long long composition_count(int n, int g) {
  // C(g + n - 1, n - 1), capped to avoid overflow.
  long long count = 1;
  for (int i = 1; i <= n - 1; ++i) {
    count = count * (g + i) / i;
    if (count > 4 * kGridCap) return count;
  }
  return count;
}

void enumerate_rec(int n, int g, int pos, int remaining, std::vector<int>& z,
                   std::vector<MixedStrategy>& out) {
  if (pos == n - 1) {
    z[pos] = remaining;
    MixedStrategy x;
    x.probs = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) x.probs[i] = static_cast<double>(z[i]) / g;
    out.push_back(std::move(x));
    return;
  }
  for (int take = 0; take <= remaining; ++take) {
    z[pos] = take;
    enumerate_rec(n, g, pos + 1, remaining - take, z, out);
  }
}

EpisodeSummary make_summary(int episode, double realized) {
  EpisodeSummary s;
  s.episode = episode;
  s.realized_return = realized;
  return s;
}

}  // namespace

std::vector<MixedStrategy> enumerate_grid_strategies(int n, int g) {
  if (n < 1 || g < 1) throw SpecError("grid needs n >= 1 and g >= 1");
  if (composition_count(n, g) > kGridCap)
    throw SizeLimit("grid strategy count exceeds 10^6");
  std::vector<MixedStrategy> out;
  std::vector<int> z(static_cast<std::size_t>(n), 0);
  enumerate_rec(n, g, 0, g, z, out);
  return out;
}

QLearningOutcome q_learning_run(const Dsg& dsg, const FollowerOracle& oracle,
                                const QLearningConfig& cfg, RngStream& rng) {
  QLearningOutcome out;
  QTable& table = out.table;
  table.grid = enumerate_grid_strategies(dsg.n, cfg.granularity);

  int states = dsg.num_states();
  table.valid.resize(static_cast<std::size_t>(states));
  for (int s = 0; s < states; ++s) {
    const auto& avail = dsg.available[s];
    for (std::size_t i = 0; i < table.grid.size(); ++i) {
      bool ok = true;
      for (int a = 0; a < dsg.n; ++a) {
        if (table.grid[i].probs[a] > 0.0 &&
            std::find(avail.begin(), avail.end(), a) == avail.end()) {
          ok = false;
          break;
        }
      }
      if (ok) table.valid[s].push_back(static_cast<int>(i));
    }
  }
  table.q.resize(static_cast<std::size_t>(states));
  table.visits.resize(static_cast<std::size_t>(states));
  for (int s = 0; s < states; ++s) {
    table.q[s].assign(table.valid[s].size(), 0.0);
    table.visits[s].assign(table.valid[s].size(), 0);
  }

  auto greedy_index = [&](int s) {
    const auto& q = table.q[s];
    double best = *std::max_element(q.begin(), q.end());
    std::vector<int> ties;
    for (std::size_t i = 0; i < q.size(); ++i)
      if (q[i] == best) ties.push_back(static_cast<int>(i));
    return ties[rng.uniform_int(static_cast<int>(ties.size()))];
  };

  for (int t = 1; t <= cfg.episodes; ++t) {
    StateId s{1, 0};
    double realized = 0.0;
    for (int h = 1; h <= dsg.horizon; ++h) {
      int state = dsg.global_index(s);
      int choice = (rng.uniform01() < cfg.explore)
                       ? rng.uniform_int(static_cast<int>(table.valid[state].size()))
                       : greedy_index(state);
      const MixedStrategy& x = table.grid[table.valid[state][choice]];

      int b = best_response(s, x, oracle.theta_star, dsg, oracle.tie_tol);
      int a = rng.categorical(x.probs);
      double reward = dsg.r(state, a, b);
      realized += reward;

      double continuation = 0.0;
      StateId next{0, 0};
      if (h < dsg.horizon) {
        next = step(s, a, b, dsg, rng);
        const auto& next_q = table.q[dsg.global_index(next)];
        continuation = *std::max_element(next_q.begin(), next_q.end());
      }

      int visits = ++table.visits[state][choice];
      double alpha = cfg.alpha_override
                         ? *cfg.alpha_override
                         : std::clamp(1.0 / std::ceil(visits / 10.0), 0.05, 1.0);
      double& q = table.q[state][choice];
      q += alpha * (reward + continuation - q);

      if (h < dsg.horizon) s = next;
    }
    out.run.episodes.push_back(make_summary(t, realized));
  }
  return out;
}

std::vector<MixedStrategy> greedy_policy(const QTable& table) {
  std::vector<MixedStrategy> policy;
  policy.reserve(table.q.size());
  for (std::size_t s = 0; s < table.q.size(); ++s) {
    const auto& q = table.q[s];
    int best = 0;
    for (std::size_t i = 1; i < q.size(); ++i)
      if (q[i] > q[best]) best = static_cast<int>(i);
    policy.push_back(table.grid[table.valid[s][best]]);
  }
  return policy;
}

RunResult random_policy_run(const Dsg& dsg, const FollowerOracle& oracle,
                            int episodes, RngStream& rng) {
  RunResult out;
  for (int t = 1; t <= episodes; ++t) {
    StateId s{1, 0};
    double realized = 0.0;
    for (int h = 1; h <= dsg.horizon; ++h) {
      int state = dsg.global_index(s);
      const auto& avail = dsg.available[state];
      std::vector<double> w = rng.simplex_uniform(static_cast<int>(avail.size()));
      MixedStrategy x;
      x.probs = Eigen::VectorXd::Zero(dsg.n);
      for (std::size_t i = 0; i < avail.size(); ++i) x.probs[avail[i]] = w[i];

      int b = best_response(s, x, oracle.theta_star, dsg, oracle.tie_tol);
      int a = rng.categorical(x.probs);
      realized += dsg.r(state, a, b);
      if (h < dsg.horizon) s = step(s, a, b, dsg, rng);
    }
    out.episodes.push_back(make_summary(t, realized));
  }
  return out;
}

}  // namespace dsg
