#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dsg/learner.hpp"
#include "dsg/scenarios.hpp"

namespace dsg {

struct ScenarioConfig {
  enum class Kind { Random, Poaching, File };
  Kind kind = Kind::Random;
  RandomDsgSpec random;
  PoachingSpec poaching;
  std::string path;  // Kind::File
  /// When set, every run seed plays the same instance generated from this
  /// seed; otherwise each run seed generates its own instance.
  std::optional<std::uint64_t> instance_seed;
};

struct AnytimeConfig {
  int t0 = 1;
  int segments = 1;
};

struct ExperimentConfig {
  ScenarioConfig scenario;
  std::vector<std::string> learners;  // version_space | q_learning | random | hindsight
  int episodes = 20;
  std::vector<std::uint64_t> seeds;
  std::optional<double> epsilon;  // empty = schedule from (T, p)
  std::optional<AnytimeConfig> anytime;
  int candidates = 128;
  int q_granularity = 10;
  double q_explore = 0.1;
  std::string out_dir = "out";
  int threads = 1;
};

ExperimentConfig parse_experiment_config(const nlohmann::json& doc);
nlohmann::json experiment_config_to_json(const ExperimentConfig& config);

/// Builds (or loads) the instance a given run seed plays. Loaded games are
/// feature-normalized here; generated games already are.
GeneratedInstance make_instance(const ScenarioConfig& scenario, std::uint64_t seed);

/// Per-episode average-regret series: at t, (1/(tH)) sum_{i<=t} (V* - ret_i).
/// Uses the exact optimal value in place of sampled optimal-policy rewards.
std::vector<double> average_regret(const RunResult& run, double opt_value,
                                   int horizon);

/// Per-episode average cumulative reward: at t, (1/(tH)) sum_{i<=t} ret_i.
std::vector<double> average_cumulative_reward(const RunResult& run, int horizon);

/// Mistake-budget check per margin segment: budget (2/eps)^(p-1) against the
/// episodes-with-a-mistake count under that margin.
struct BoundsReport {
  struct Entry {
    double epsilon = 0.0;
    double budget = 0.0;
    int mistakes = 0;
    bool ok = true;
  };
  std::vector<Entry> entries;
  bool ok = true;
};

BoundsReport report_bounds(const RunResult& run, const Dsg& dsg);
nlohmann::json bounds_to_json(const BoundsReport& report);

struct ExperimentOutcome {
  bool bounds_ok = true;
  std::string results_path;
  std::string summary_path;
  std::string manifest_path;
};

/// Runs every (seed, learner) cell, writes results.csv (one metrics row per
/// episode), summary.csv (seed-averaged curves), and manifest.json (config,
/// per-cell normalization constants, fallback events, bound outcomes).
/// Deterministic: identical configs produce byte-identical CSVs.
ExperimentOutcome run_experiment(const ExperimentConfig& config);

}  // namespace dsg
