#pragma once

#include <optional>
#include <vector>

#include "dsg/game.hpp"
#include "dsg/optimistic.hpp"

namespace dsg {

/// Append-only set of halfspace rows {theta : c.theta >= 0} cut out of the
/// unit sphere by observed (strategy, response) pairs.
struct VersionSpace {
  std::vector<Eigen::VectorXd> rows;

  /// Smallest row value at theta; >= -tol means theta is still a member.
  double min_slack(const Eigen::VectorXd& theta) const;
};

/// Appends one row per rival action b' != b_obs: ((M_{b_obs} - M_{b'})' x).
/// Rows that duplicate an existing row within 1e-12 (or are numerically
/// zero) are skipped; nothing is ever removed.
VersionSpace update(const VersionSpace& vs, const MixedStrategy& x, int b_obs,
                    const std::vector<Eigen::MatrixXd>& features);

/// Margin schedule from the fixed-horizon analysis: 2 * T^(-1/p).
double epsilon_schedule(int episodes, int p);

struct PolicyEntry {
  MixedStrategy x;
  Eigen::VectorXd theta;
  int predicted_action = 0;
  double vtilde = 0.0;
  double epsilon_used = 0.0;  // margin actually enforced (0 for fallback)
  bool fallback = false;
};

/// One policy per state, planned against the current version space.
struct PolicyTable {
  std::vector<PolicyEntry> entries;  // per global state
  int fallback_count = 0;
};

struct GetPolicyOptions {
  int candidates = 128;
  double tie_tol = 1e-9;
  double epsilon_floor = 1e-6;  // fall back to uniform play below this
  int budget_factor = 200;      // sampling proposals per candidate
};

/// Backward pass solving the optimistic program per state (layer H down
/// to 1), threading optimistic continuation values. If a state is infeasible
/// at the requested margin, the margin is halved locally until feasible; at
/// epsilon_floor the state degrades to uniform play over its available
/// actions with a sampled in-version-space parameter.
PolicyTable get_policy(const Dsg& dsg, const VersionSpace& vs, double epsilon,
                       const GetPolicyOptions& opts, RngStream& rng);

struct StepLog {
  int state = 0;  // global index
  MixedStrategy x;
  Eigen::VectorXd theta;
  int predicted_action = 0;
  int observed_action = 0;
  int sampled_action = 0;
  double reward = 0.0;
  double epsilon_used = 0.0;
  bool fallback = false;
  bool mistake = false;  // observed != predicted
};

struct EpisodeLog {
  std::vector<StepLog> steps;  // exactly H entries
};

struct EpisodeSummary {
  int episode = 0;  // 1-based
  double realized_return = 0.0;
  double vtilde_root = 0.0;
  int mistake_steps = 0;
  double epsilon = 0.0;  // scheduled margin in force this episode
  int fallback_events = 0;
};

struct SegmentInfo {
  int first_episode = 0;  // 1-based
  int length = 0;
  double epsilon = 0.0;
  int version_rows_at_start = 0;
};

/// Per-run record: episode summaries, full step logs, the final version
/// space, and (for the anytime wrapper) segment boundaries.
struct RunResult {
  std::vector<EpisodeSummary> episodes;
  std::vector<EpisodeLog> logs;
  VersionSpace version_space;
  std::vector<SegmentInfo> segments;

  /// Episodes containing at least one mistake, the quantity the mistake
  /// budget bounds.
  int mistake_episodes() const;
};

struct LearnerConfig {
  int episodes = 1;                  // T
  std::optional<double> epsilon;     // empty = schedule from (T, p)
  int candidates = 128;
  std::uint64_t seed = 0;
  double tie_tol = 1e-9;
};

/// Plays one episode from the root with a fixed policy table, growing the
/// version space at every step, and returns the log with the grown space.
std::pair<EpisodeLog, VersionSpace> run_episode(const Dsg& dsg,
                                                const FollowerOracle& oracle,
                                                const PolicyTable& policy,
                                                const VersionSpace& vs,
                                                RngStream& rng);

/// Full learning run: plan, play, update, T times.
RunResult run_learning(const Dsg& dsg, const FollowerOracle& oracle,
                       const LearnerConfig& cfg);

/// Doubling-trick wrapper: segments of length 2^i * T0, each planned with the
/// margin schedule for its own length; the version space carries across
/// segment boundaries.
RunResult run_anytime(const Dsg& dsg, const FollowerOracle& oracle, int t0,
                      int segments, const LearnerConfig& cfg);

/// Mistake budget (2/epsilon)^(p-1) from the version-space packing bound.
double mistake_budget(double epsilon, int p);

}  // namespace dsg
