// Command-line front end: generate game instances, run experiment configs,
// and report bound checks and summaries from a manifest.
//
//   dsg generate --config presets/gen_random.json --out game.json
//   dsg run --config presets/baseline_comparison.json --out results/
//   dsg report --manifest results/manifest.json
//
// Exit codes: 0 success, 2 configuration/I/O error, 3 invariant failure
// (a mistake-budget violation in a run counts as one).

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dsg/harness.hpp"
#include "dsg/json_io.hpp"

namespace {

using nlohmann::json;

int cmd_generate(const std::string& config_path, const std::string& out_path,
                 std::optional<std::uint64_t> seed_override) {
  json doc = dsg::load_json_file(config_path);
  json scenario = doc.contains("scenario") ? doc.at("scenario") : doc;
  std::uint64_t seed = seed_override.value_or(
      doc.contains("seed") ? doc.at("seed").get<std::uint64_t>() : 0);

  dsg::ScenarioConfig config;
  std::string kind = scenario.at("kind").get<std::string>();
  if (kind == "random") {
    config.kind = dsg::ScenarioConfig::Kind::Random;
    config.random.layer_sizes = scenario.at("layer_sizes").get<std::vector<int>>();
    config.random.n = scenario.at("n").get<int>();
    config.random.m = scenario.at("m").get<int>();
    config.random.p = scenario.at("p").get<int>();
  } else if (kind == "poaching") {
    config.kind = dsg::ScenarioConfig::Kind::Poaching;
    config.poaching.regions = scenario.at("regions").get<int>();
    config.poaching.patrol_costs =
        scenario.at("patrol_costs").get<std::vector<double>>();
    config.poaching.budget = scenario.at("budget").get<double>();
    config.poaching.horizon = scenario.at("horizon").get<int>();
    config.poaching.animal_types = scenario.at("animal_types").get<int>();
    if (scenario.contains("catch_value"))
      config.poaching.catch_value = scenario.at("catch_value").get<double>();
  } else {
    throw dsg::ConfigError("generate supports scenario kinds random and poaching");
  }

  dsg::GeneratedInstance inst = dsg::make_instance(config, seed);
  dsg::write_json_file(out_path, dsg::instance_to_json(inst, seed));
  std::cout << "wrote " << out_path << " (" << inst.description
            << ", feature_scale=" << inst.feature_scale << ")\n";
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_override, int threads) {
  json doc = dsg::load_json_file(config_path);
  if (doc.contains("config")) doc = doc.at("config");  // accept a manifest
  dsg::ExperimentConfig config = dsg::parse_experiment_config(doc);
  if (!out_dir.empty()) config.out_dir = out_dir;
  if (seed_override) config.seeds = {*seed_override};
  if (threads > 0) config.threads = threads;

  dsg::ExperimentOutcome outcome = dsg::run_experiment(config);
  std::cout << "wrote " << outcome.results_path << '\n'
            << "wrote " << outcome.summary_path << '\n'
            << "wrote " << outcome.manifest_path << '\n';
  if (!outcome.bounds_ok) {
    std::cerr << "mistake budget violated in at least one run\n";
    return 3;
  }
  return 0;
}

int cmd_report(const std::string& manifest_path) {
  json manifest = dsg::load_json_file(manifest_path);
  bool ok = true;
  std::cout << "cells:\n";
  for (const auto& cell : manifest.at("cells")) {
    std::cout << "  seed=" << cell.at("seed") << " learner="
              << cell.at("learner").get<std::string>()
              << " episodes=" << cell.at("episodes")
              << " mistake_episodes=" << cell.at("mistake_episodes");
    if (cell.contains("bounds")) {
      const json& bounds = cell.at("bounds");
      bool cell_ok = bounds.at("ok").get<bool>();
      ok = ok && cell_ok;
      std::cout << " bounds=" << (cell_ok ? "pass" : "FAIL");
      for (const auto& seg : bounds.at("segments"))
        std::cout << " [eps=" << seg.at("epsilon").get<double>()
                  << " budget=" << seg.at("budget").get<double>()
                  << " mistakes=" << seg.at("mistakes") << "]";
    }
    std::cout << '\n';
  }
  std::cout << "mistake budgets: " << (ok ? "all pass" : "VIOLATED") << '\n';
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"episodic dynamic Stackelberg game simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string manifest_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;

  CLI::App* generate = app.add_subcommand("generate", "emit a game JSON from a spec");
  generate->add_option("--config", config_path, "generator spec JSON")->required();
  generate->add_option("--out", out_path, "output game path")->required();
  generate->add_option("--seed", seed, "seed override")->each([&](const std::string&) {
    seed_set = true;
  });

  CLI::App* run = app.add_subcommand("run", "execute an experiment config");
  run->add_option("--config", config_path, "experiment config or manifest JSON")
      ->required();
  run->add_option("--out", out_path, "output directory override");
  run->add_option("--seed", seed, "replace the seed list with one seed")
      ->each([&](const std::string&) { seed_set = true; });
  run->add_option("--threads", threads, "worker threads across seeds");

  CLI::App* report = app.add_subcommand("report", "bound checks from a manifest");
  report->add_option("--manifest", manifest_path, "manifest.json path")->required();

  CLI11_PARSE(app, argc, argv);

  std::optional<std::uint64_t> seed_override;
  if (seed_set) seed_override = seed;

  try {
    if (generate->parsed()) return cmd_generate(config_path, out_path, seed_override);
    if (run->parsed()) return cmd_run(config_path, out_path, seed_override, threads);
    return cmd_report(manifest_path);
  } catch (const dsg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const dsg::SpecError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
