#include "dsg/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <thread>

#include "dsg/baselines.hpp"
#include "dsg/json_io.hpp"
#include "dsg/planning.hpp"

namespace dsg {

using nlohmann::json;

namespace {

const std::vector<std::string> kKnownLearners = {"version_space", "q_learning",
                                                 "random", "hindsight"};

}  // namespace

ExperimentConfig parse_experiment_config(const json& doc) {
  try {
    ExperimentConfig config;
    const json& scenario = doc.at("scenario");
    std::string kind = scenario.at("kind").get<std::string>();
    if (kind == "random") {
      config.scenario.kind = ScenarioConfig::Kind::Random;
      config.scenario.random.layer_sizes =
          scenario.at("layer_sizes").get<std::vector<int>>();
      config.scenario.random.n = scenario.at("n").get<int>();
      config.scenario.random.m = scenario.at("m").get<int>();
      config.scenario.random.p = scenario.at("p").get<int>();
    } else if (kind == "poaching") {
      config.scenario.kind = ScenarioConfig::Kind::Poaching;
      PoachingSpec& ps = config.scenario.poaching;
      ps.regions = scenario.at("regions").get<int>();
      ps.patrol_costs = scenario.at("patrol_costs").get<std::vector<double>>();
      ps.budget = scenario.at("budget").get<double>();
      ps.horizon = scenario.at("horizon").get<int>();
      ps.animal_types = scenario.at("animal_types").get<int>();
      if (scenario.contains("catch_value"))
        ps.catch_value = scenario.at("catch_value").get<double>();
    } else if (kind == "file") {
      config.scenario.kind = ScenarioConfig::Kind::File;
      config.scenario.path = scenario.at("path").get<std::string>();
    } else {
      throw ConfigError("unknown scenario kind: " + kind);
    }
    if (scenario.contains("instance_seed"))
      config.scenario.instance_seed = scenario.at("instance_seed").get<std::uint64_t>();

    config.learners = doc.at("learners").get<std::vector<std::string>>();
    if (config.learners.empty()) throw ConfigError("need at least one learner");
    for (const auto& name : config.learners)
      if (std::find(kKnownLearners.begin(), kKnownLearners.end(), name) ==
          kKnownLearners.end())
        throw ConfigError("unknown learner: " + name);

    config.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
    if (config.seeds.empty()) throw ConfigError("need at least one seed");

    config.episodes = doc.at("episodes").get<int>();
    if (config.episodes < 1) throw ConfigError("episodes must be >= 1");

    if (doc.contains("epsilon") && !doc.at("epsilon").is_null()) {
      if (doc.at("epsilon").is_string()) {
        if (doc.at("epsilon").get<std::string>() != "auto")
          throw ConfigError("epsilon must be a number or \"auto\"");
      } else {
        config.epsilon = doc.at("epsilon").get<double>();
        if (*config.epsilon <= 0.0) throw ConfigError("epsilon must be positive");
      }
    }
    if (doc.contains("anytime") && !doc.at("anytime").is_null()) {
      AnytimeConfig any;
      any.t0 = doc.at("anytime").at("t0").get<int>();
      any.segments = doc.at("anytime").at("segments").get<int>();
      if (any.t0 < 1 || any.segments < 1)
        throw ConfigError("anytime needs t0 >= 1 and segments >= 1");
      config.anytime = any;
    }
    if (doc.contains("candidates")) config.candidates = doc.at("candidates").get<int>();
    if (config.candidates < 1) throw ConfigError("candidates must be >= 1");
    if (doc.contains("q_granularity"))
      config.q_granularity = doc.at("q_granularity").get<int>();
    if (doc.contains("q_explore")) config.q_explore = doc.at("q_explore").get<double>();
    if (doc.contains("out_dir")) config.out_dir = doc.at("out_dir").get<std::string>();
    if (doc.contains("threads")) config.threads = doc.at("threads").get<int>();
    if (config.threads < 1) config.threads = 1;
    return config;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed experiment config: ") + e.what());
  }
}

json experiment_config_to_json(const ExperimentConfig& config) {
  json scenario;
  switch (config.scenario.kind) {
    case ScenarioConfig::Kind::Random:
      scenario["kind"] = "random";
      scenario["layer_sizes"] = config.scenario.random.layer_sizes;
      scenario["n"] = config.scenario.random.n;
      scenario["m"] = config.scenario.random.m;
      scenario["p"] = config.scenario.random.p;
      break;
    case ScenarioConfig::Kind::Poaching:
      scenario["kind"] = "poaching";
      scenario["regions"] = config.scenario.poaching.regions;
      scenario["patrol_costs"] = config.scenario.poaching.patrol_costs;
      scenario["budget"] = config.scenario.poaching.budget;
      scenario["horizon"] = config.scenario.poaching.horizon;
      scenario["animal_types"] = config.scenario.poaching.animal_types;
      scenario["catch_value"] = config.scenario.poaching.catch_value;
      break;
    case ScenarioConfig::Kind::File:
      scenario["kind"] = "file";
      scenario["path"] = config.scenario.path;
      break;
  }
  if (config.scenario.instance_seed)
    scenario["instance_seed"] = *config.scenario.instance_seed;

  json doc;
  doc["scenario"] = std::move(scenario);
  doc["learners"] = config.learners;
  doc["episodes"] = config.episodes;
  doc["seeds"] = config.seeds;
  if (config.epsilon)
    doc["epsilon"] = *config.epsilon;
  else
    doc["epsilon"] = "auto";
  if (config.anytime)
    doc["anytime"] = {{"t0", config.anytime->t0},
                      {"segments", config.anytime->segments}};
  doc["candidates"] = config.candidates;
  doc["q_granularity"] = config.q_granularity;
  doc["q_explore"] = config.q_explore;
  doc["out_dir"] = config.out_dir;
  doc["threads"] = config.threads;
  return doc;
}

GeneratedInstance make_instance(const ScenarioConfig& scenario, std::uint64_t seed) {
  std::uint64_t instance_seed = scenario.instance_seed.value_or(seed);
  switch (scenario.kind) {
    case ScenarioConfig::Kind::Random: {
      RandomDsgSpec spec = scenario.random;
      spec.seed = instance_seed;
      return random_dsg(spec);
    }
    case ScenarioConfig::Kind::Poaching: {
      PoachingSpec spec = scenario.poaching;
      spec.seed = instance_seed;
      return poaching_dsg(spec);
    }
    case ScenarioConfig::Kind::File: {
      LoadedGame loaded = dsg_from_json(load_json_file(scenario.path));
      if (!loaded.theta_star)
        throw ConfigError(scenario.path + " carries no theta_star; experiments need one");
      auto violations = validate(loaded.dsg);
      if (!violations.empty())
        throw ConfigError(scenario.path + ": " + violations.front());
      GeneratedInstance inst;
      auto [normalized, scale] = normalize_features(loaded.dsg);
      inst.dsg = std::move(normalized);
      inst.feature_scale = scale;
      inst.theta_star = loaded.theta_star->normalized();
      inst.description = "file(" + scenario.path + ")";
      return inst;
    }
  }
  throw ConfigError("unreachable scenario kind");
}

std::vector<double> average_regret(const RunResult& run, double opt_value,
                                   int horizon) {
  std::vector<double> out;
  out.reserve(run.episodes.size());
  double cum = 0.0;
  for (std::size_t t = 0; t < run.episodes.size(); ++t) {
    cum += opt_value - run.episodes[t].realized_return;
    out.push_back(cum / (static_cast<double>(t + 1) * horizon));
  }
  return out;
}

std::vector<double> average_cumulative_reward(const RunResult& run, int horizon) {
  std::vector<double> out;
  out.reserve(run.episodes.size());
  double cum = 0.0;
  for (std::size_t t = 0; t < run.episodes.size(); ++t) {
    cum += run.episodes[t].realized_return;
    out.push_back(cum / (static_cast<double>(t + 1) * horizon));
  }
  return out;
}

BoundsReport report_bounds(const RunResult& run, const Dsg& dsg) {
  BoundsReport report;
  std::vector<SegmentInfo> segments = run.segments;
  if (segments.empty() && !run.episodes.empty()) {
    segments.push_back(SegmentInfo{1, static_cast<int>(run.episodes.size()),
                                   run.episodes.front().epsilon, 0});
  }
  for (const auto& seg : segments) {
    BoundsReport::Entry entry;
    entry.epsilon = seg.epsilon;
    entry.budget = mistake_budget(seg.epsilon, dsg.p);
    for (int t = seg.first_episode; t < seg.first_episode + seg.length; ++t) {
      const auto& ep = run.episodes[static_cast<std::size_t>(t - 1)];
      if (ep.mistake_steps > 0) ++entry.mistakes;
    }
    entry.ok = entry.mistakes <= entry.budget;
    report.ok = report.ok && entry.ok;
    report.entries.push_back(entry);
  }
  return report;
}

json bounds_to_json(const BoundsReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries)
    entries.push_back({{"epsilon", e.epsilon},
                       {"budget", e.budget},
                       {"mistakes", e.mistakes},
                       {"ok", e.ok}});
  return {{"ok", report.ok}, {"segments", std::move(entries)}};
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

RunResult rollout_policy(const Dsg& dsg, const FollowerOracle& oracle,
                         const std::vector<MixedStrategy>& policy, int episodes,
                         RngStream& rng) {
  RunResult out;
  for (int t = 1; t <= episodes; ++t) {
    StateId s{1, 0};
    double realized = 0.0;
    for (int h = 1; h <= dsg.horizon; ++h) {
      int state = dsg.global_index(s);
      const MixedStrategy& x = policy[static_cast<std::size_t>(state)];
      int b = best_response(s, x, oracle.theta_star, dsg, oracle.tie_tol);
      int a = rng.categorical(x.probs);
      realized += dsg.r(state, a, b);
      if (h < dsg.horizon) s = step(s, a, b, dsg, rng);
    }
    EpisodeSummary summary;
    summary.episode = t;
    summary.realized_return = realized;
    out.episodes.push_back(summary);
  }
  return out;
}

struct CellResult {
  RunResult run;
  json manifest_entry;
  bool bounds_ok = true;
};

struct SeedResult {
  std::vector<CellResult> cells;  // one per learner, config order
  double opt_value = 0.0;
};

SeedResult run_seed(const ExperimentConfig& config, std::uint64_t seed) {
  SeedResult result;
  GeneratedInstance inst = make_instance(config.scenario, seed);
  const Dsg& dsg = inst.dsg;
  FollowerOracle oracle{inst.theta_star, 1e-9};

  PlannedPolicy hindsight = hindsight_policy(dsg, inst.theta_star);
  result.opt_value = hindsight.values.v[0];

  for (const auto& name : config.learners) {
    CellResult cell;
    if (name == "version_space") {
      LearnerConfig cfg;
      cfg.episodes = config.episodes;
      cfg.epsilon = config.epsilon;
      cfg.candidates = config.candidates;
      cfg.seed = seed;
      cell.run = config.anytime
                     ? run_anytime(dsg, oracle, config.anytime->t0,
                                   config.anytime->segments, cfg)
                     : run_learning(dsg, oracle, cfg);
      BoundsReport bounds = report_bounds(cell.run, dsg);
      cell.bounds_ok = bounds.ok;
      cell.manifest_entry["bounds"] = bounds_to_json(bounds);
      int fallback_total = 0;
      for (const auto& ep : cell.run.episodes) fallback_total += ep.fallback_events;
      cell.manifest_entry["fallback_events"] = fallback_total;
    } else if (name == "q_learning") {
      QLearningConfig cfg;
      cfg.episodes = config.episodes;
      cfg.granularity = config.q_granularity;
      cfg.explore = config.q_explore;
      RngStream rng = RngStream(seed).split(kBaselineStream, 1);
      cell.run = q_learning_run(dsg, oracle, cfg, rng).run;
    } else if (name == "random") {
      RngStream rng = RngStream(seed).split(kBaselineStream, 2);
      cell.run = random_policy_run(dsg, oracle, config.episodes, rng);
    } else {  // hindsight
      RngStream rng = RngStream(seed).split(kBaselineStream, 3);
      cell.run = rollout_policy(dsg, oracle, hindsight.strategies,
                                config.episodes, rng);
    }
    cell.manifest_entry["seed"] = seed;
    cell.manifest_entry["learner"] = name;
    cell.manifest_entry["instance"] = inst.description;
    cell.manifest_entry["feature_scale"] = inst.feature_scale;
    cell.manifest_entry["opt_value"] = result.opt_value;
    cell.manifest_entry["episodes"] = static_cast<int>(cell.run.episodes.size());
    cell.manifest_entry["mistake_episodes"] = cell.run.mistake_episodes();
    result.cells.push_back(std::move(cell));
  }
  return result;
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);

  std::vector<SeedResult> per_seed(config.seeds.size());
  int threads = std::min<int>(config.threads, static_cast<int>(config.seeds.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < config.seeds.size(); ++i)
      per_seed[i] = run_seed(config, config.seeds[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next.fetch_add(1); i < config.seeds.size();
               i = next.fetch_add(1))
            per_seed[i] = run_seed(config, config.seeds[i]);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& err : errors)
      if (err) std::rethrow_exception(err);
  }

  GeneratedInstance probe = make_instance(config.scenario, config.seeds[0]);
  int horizon = probe.dsg.horizon;
  int state_count = probe.dsg.num_states();
  int feature_dim = probe.dsg.p;

  ExperimentOutcome outcome;
  outcome.results_path = config.out_dir + "/results.csv";
  outcome.summary_path = config.out_dir + "/summary.csv";
  outcome.manifest_path = config.out_dir + "/manifest.json";

  std::ofstream results(outcome.results_path);
  if (!results) throw ConfigError("cannot write " + outcome.results_path);
  results << "episode,seed,learner,avg_regret,avg_cum_reward,mistakes_cum,epsilon,"
             "p,state_count\n";

  // learner -> per-episode sums of (regret, cum reward, mistakes, epsilon)
  std::map<std::string, std::vector<std::array<double, 4>>> sums;
  json cells_json = json::array();
  bool bounds_ok = true;

  for (std::size_t li = 0; li < config.learners.size(); ++li) {
    const std::string& name = config.learners[li];
    for (std::size_t si = 0; si < config.seeds.size(); ++si) {
      const CellResult& cell = per_seed[si].cells[li];
      const RunResult& run = cell.run;
      std::vector<double> regret = average_regret(run, per_seed[si].opt_value, horizon);
      std::vector<double> cum = average_cumulative_reward(run, horizon);
      int mistakes_cum = 0;
      auto& acc = sums[name];
      if (acc.size() < run.episodes.size())
        acc.resize(run.episodes.size(), {0.0, 0.0, 0.0, 0.0});
      for (std::size_t t = 0; t < run.episodes.size(); ++t) {
        const auto& ep = run.episodes[t];
        if (ep.mistake_steps > 0) ++mistakes_cum;
        results << ep.episode << ',' << config.seeds[si] << ',' << name << ','
                << format_double(regret[t]) << ',' << format_double(cum[t]) << ','
                << mistakes_cum << ',' << format_double(ep.epsilon) << ','
                << feature_dim << ',' << state_count << '\n';
        acc[t][0] += regret[t];
        acc[t][1] += cum[t];
        acc[t][2] += mistakes_cum;
        acc[t][3] += ep.epsilon;
      }
    }
  }
  results.close();

  for (std::size_t si = 0; si < config.seeds.size(); ++si) {
    for (std::size_t li = 0; li < config.learners.size(); ++li) {
      const CellResult& cell = per_seed[si].cells[li];
      bounds_ok = bounds_ok && cell.bounds_ok;
      cells_json.push_back(cell.manifest_entry);
    }
  }

  std::ofstream summary(outcome.summary_path);
  if (!summary) throw ConfigError("cannot write " + outcome.summary_path);
  summary << "episode,learner,avg_regret,avg_cum_reward,mistakes_cum,epsilon,p,"
             "state_count\n";
  double inv = 1.0 / static_cast<double>(config.seeds.size());
  for (const auto& name : config.learners) {
    const auto& acc = sums[name];
    for (std::size_t t = 0; t < acc.size(); ++t) {
      summary << (t + 1) << ',' << name << ',' << format_double(acc[t][0] * inv)
              << ',' << format_double(acc[t][1] * inv) << ','
              << format_double(acc[t][2] * inv) << ','
              << format_double(acc[t][3] * inv) << ',' << feature_dim << ','
              << state_count << '\n';
    }
  }
  summary.close();

  json manifest;
  manifest["config"] = experiment_config_to_json(config);
  manifest["cells"] = std::move(cells_json);
  manifest["outputs"] = {{"results", "results.csv"}, {"summary", "summary.csv"}};
  manifest["bounds_ok"] = bounds_ok;
  write_json_file(outcome.manifest_path, manifest);

  outcome.bounds_ok = bounds_ok;
  return outcome;
}

}  // namespace dsg
