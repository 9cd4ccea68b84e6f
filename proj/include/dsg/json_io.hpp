#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "dsg/game.hpp"
#include "dsg/learner.hpp"
#include "dsg/scenarios.hpp"

namespace dsg {

/// Game document with keys horizon, layer_sizes, available, reward,
/// transition, features, and (optionally) theta_star. States appear
/// layer-major, index-minor everywhere.
nlohmann::json dsg_to_json(const Dsg& dsg,
                           const std::optional<Eigen::VectorXd>& theta_star = {});

struct LoadedGame {
  Dsg dsg;
  std::optional<Eigen::VectorXd> theta_star;
};

LoadedGame dsg_from_json(const nlohmann::json& doc);

/// Generator output: the game document plus a metadata block with the spec
/// description, seed, and feature normalization constant.
nlohmann::json instance_to_json(const GeneratedInstance& inst, std::uint64_t seed);

/// Episode records: {episode, realized_return, vtilde_root, mistakes,
/// epsilon, fallback_events} per episode; anytime runs also carry segments.
nlohmann::json run_result_to_json(const RunResult& run);

nlohmann::json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& doc);

}  // namespace dsg
