#include "dsg/learner.hpp"

#include <cmath>
#include <limits>

namespace dsg {

double VersionSpace::min_slack(const Eigen::VectorXd& theta) const {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& c : rows) worst = std::min(worst, c.dot(theta));
  return worst;
}

VersionSpace update(const VersionSpace& vs, const MixedStrategy& x, int b_obs,
                    const std::vector<Eigen::MatrixXd>& features) {
  VersionSpace out = vs;
  int m = static_cast<int>(features.size());
  for (int b2 = 0; b2 < m; ++b2) {
    if (b2 == b_obs) continue;
    Eigen::VectorXd row = (features[b_obs] - features[b2]).transpose() * x.probs;
    if (row.lpNorm<Eigen::Infinity>() < 1e-12) continue;
    bool duplicate = false;
    for (const auto& existing : out.rows) {
      if ((existing - row).lpNorm<Eigen::Infinity>() <= 1e-12) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) out.rows.push_back(std::move(row));
  }
  return out;
}

double epsilon_schedule(int episodes, int p) {
  return 2.0 * std::pow(static_cast<double>(episodes), -1.0 / p);
}

double mistake_budget(double epsilon, int p) {
  return std::pow(2.0 / epsilon, p - 1);
}

PolicyTable get_policy(const Dsg& dsg, const VersionSpace& vs, double epsilon,
                       const GetPolicyOptions& opts, RngStream& rng) {
  PolicyTable table;
  table.entries.resize(static_cast<std::size_t>(dsg.num_states()));

  Eigen::VectorXd next_values(0);
  for (int layer = dsg.horizon; layer >= 1; --layer) {
    int offset = dsg.layer_offset(layer);
    int size = dsg.layer_sizes[layer - 1];
    Eigen::VectorXd layer_values(size);
    for (int idx = 0; idx < size; ++idx) {
      int s = offset + idx;
      RngStream state_rng = rng.split(kStateStream, static_cast<std::uint64_t>(s));
      int budget = opts.budget_factor * opts.candidates;

      PolicyEntry entry;
      double eps_local = epsilon;
      std::optional<OptimisticSolution> sol;
      while (true) {
        OptimisticProblem prob =
            make_optimistic_problem(dsg, s, next_values, vs.rows, eps_local);
        RngStream attempt_rng = state_rng.split(0, 0);
        sol = solve_optimistic_program(prob, opts.candidates, attempt_rng, budget);
        if (sol) break;
        eps_local *= 0.5;
        if (eps_local < opts.epsilon_floor) break;
      }

      if (sol) {
        entry.x = sol->x;
        entry.theta = sol->theta;
        entry.predicted_action = sol->action;
        entry.vtilde = sol->value;
        entry.epsilon_used = eps_local;
      } else {
        // Degradation path: uniform play with any in-version-space parameter
        // and its induced response; no margin is promised.
        RngStream fb_rng = state_rng.split(1, 0);
        auto thetas = sample_version_space(vs.rows, dsg.p, 1,
                                           opts.budget_factor * opts.candidates,
                                           fb_rng);
        entry.x = MixedStrategy::uniform_over(dsg.n, dsg.available[s]);
        entry.theta = thetas.front();
        entry.predicted_action =
            best_response(StateId{layer, idx}, entry.x, entry.theta, dsg, opts.tie_tol);
        entry.vtilde = entry.x.probs.dot(
            action_value_vector(dsg, s, entry.predicted_action, next_values));
        entry.epsilon_used = 0.0;
        entry.fallback = true;
        ++table.fallback_count;
      }
      layer_values[idx] = entry.vtilde;
      table.entries[static_cast<std::size_t>(s)] = std::move(entry);
    }
    next_values = layer_values;
  }
  return table;
}

std::pair<EpisodeLog, VersionSpace> run_episode(const Dsg& dsg,
                                                const FollowerOracle& oracle,
                                                const PolicyTable& policy,
                                                const VersionSpace& vs,
                                                RngStream& rng) {
  EpisodeLog log;
  log.steps.reserve(static_cast<std::size_t>(dsg.horizon));
  VersionSpace current = vs;
  StateId s{1, 0};
  for (int h = 1; h <= dsg.horizon; ++h) {
    int state = dsg.global_index(s);
    const PolicyEntry& entry = policy.entries[static_cast<std::size_t>(state)];

    StepLog step_log;
    step_log.state = state;
    step_log.x = entry.x;
    step_log.theta = entry.theta;
    step_log.predicted_action = entry.predicted_action;
    step_log.epsilon_used = entry.epsilon_used;
    step_log.fallback = entry.fallback;

    int b_obs = best_response(s, entry.x, oracle.theta_star, dsg, oracle.tie_tol);
    step_log.observed_action = b_obs;
    step_log.mistake = (b_obs != entry.predicted_action);
    current = update(current, entry.x, b_obs, dsg.features);

    int a = rng.categorical(entry.x.probs);
    step_log.sampled_action = a;
    step_log.reward = dsg.r(state, a, b_obs);
    log.steps.push_back(std::move(step_log));

    if (h < dsg.horizon) s = step(s, a, b_obs, dsg, rng);
  }
  return {std::move(log), std::move(current)};
}

int RunResult::mistake_episodes() const {
  int count = 0;
  for (const auto& ep : episodes)
    if (ep.mistake_steps > 0) ++count;
  return count;
}

namespace {

void play_block(const Dsg& dsg, const FollowerOracle& oracle, int episodes,
                double epsilon, const LearnerConfig& cfg, const RngStream& root,
                int first_episode, VersionSpace& vs, RunResult& out) {
  GetPolicyOptions opts;
  opts.candidates = cfg.candidates;
  opts.tie_tol = cfg.tie_tol;
  for (int t = 0; t < episodes; ++t) {
    int episode = first_episode + t;
    RngStream policy_rng = root.split(kPolicyStream, static_cast<std::uint64_t>(episode));
    RngStream episode_rng = root.split(kEpisodeStream, static_cast<std::uint64_t>(episode));
    PolicyTable policy = get_policy(dsg, vs, epsilon, opts, policy_rng);
    auto [log, grown] = run_episode(dsg, oracle, policy, vs, episode_rng);
    vs = std::move(grown);

    EpisodeSummary summary;
    summary.episode = episode;
    summary.vtilde_root = policy.entries[0].vtilde;
    summary.epsilon = epsilon;
    summary.fallback_events = policy.fallback_count;
    for (const auto& step_log : log.steps) {
      summary.realized_return += step_log.reward;
      if (step_log.mistake) ++summary.mistake_steps;
    }
    out.episodes.push_back(summary);
    out.logs.push_back(std::move(log));
  }
}

}  // namespace

RunResult run_learning(const Dsg& dsg, const FollowerOracle& oracle,
                       const LearnerConfig& cfg) {
  double epsilon = cfg.epsilon ? *cfg.epsilon : epsilon_schedule(cfg.episodes, dsg.p);
  RngStream root(cfg.seed);
  RunResult out;
  VersionSpace vs;
  play_block(dsg, oracle, cfg.episodes, epsilon, cfg, root, 1, vs, out);
  out.version_space = std::move(vs);
  return out;
}

RunResult run_anytime(const Dsg& dsg, const FollowerOracle& oracle, int t0,
                      int segments, const LearnerConfig& cfg) {
  if (t0 < 1) throw SpecError("anytime initial segment must be >= 1");
  RngStream root(cfg.seed);
  RunResult out;
  VersionSpace vs;
  int next_episode = 1;
  for (int i = 0; i < segments; ++i) {
    int length = t0 << i;
    double epsilon = cfg.epsilon ? *cfg.epsilon : epsilon_schedule(length, dsg.p);
    out.segments.push_back(SegmentInfo{next_episode, length, epsilon,
                                       static_cast<int>(vs.rows.size())});
    play_block(dsg, oracle, length, epsilon, cfg, root, next_episode, vs, out);
    next_episode += length;
  }
  out.version_space = std::move(vs);
  return out;
}

}  // namespace dsg
