#include "dsg/json_io.hpp"

#include <fstream>

namespace dsg {

using nlohmann::json;

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const json& arr) {
  Eigen::VectorXd v(static_cast<int>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<int>(i)] = arr[i].get<double>();
  return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

json dsg_to_json(const Dsg& dsg, const std::optional<Eigen::VectorXd>& theta_star) {
  json doc;
  doc["horizon"] = dsg.horizon;
  doc["layer_sizes"] = dsg.layer_sizes;
  doc["available"] = dsg.available;

  int states = dsg.num_states();
  json reward = json::array();
  json transition = json::array();
  for (int s = 0; s < states; ++s) {
    json r_s = json::array();
    json t_s = json::array();
    for (int a = 0; a < dsg.n; ++a) {
      json r_a = json::array();
      json t_a = json::array();
      for (int b = 0; b < dsg.m; ++b) {
        r_a.push_back(dsg.r(s, a, b));
        t_a.push_back(vector_to_json(dsg.trans_row(s, a, b)));
      }
      r_s.push_back(std::move(r_a));
      t_s.push_back(std::move(t_a));
    }
    reward.push_back(std::move(r_s));
    transition.push_back(std::move(t_s));
  }
  doc["reward"] = std::move(reward);
  doc["transition"] = std::move(transition);

  json features = json::array();
  for (const auto& mat : dsg.features) features.push_back(matrix_to_json(mat));
  doc["features"] = std::move(features);

  if (theta_star) doc["theta_star"] = vector_to_json(*theta_star);
  return doc;
}

LoadedGame dsg_from_json(const json& doc) {
  try {
    LoadedGame out;
    Dsg& g = out.dsg;
    g.horizon = doc.at("horizon").get<int>();
    g.layer_sizes = doc.at("layer_sizes").get<std::vector<int>>();
    g.available = doc.at("available").get<std::vector<std::vector<int>>>();

    const json& features = doc.at("features");
    g.m = static_cast<int>(features.size());
    if (g.m == 0) throw ConfigError("game document lists no feature matrices");
    g.n = static_cast<int>(features[0].size());
    g.p = static_cast<int>(features[0][0].size());
    for (const auto& mat_json : features) {
      Eigen::MatrixXd mat(g.n, g.p);
      for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.p; ++j) mat(i, j) = mat_json.at(i).at(j).get<double>();
      g.features.push_back(std::move(mat));
    }

    int states = g.num_states();
    const json& reward = doc.at("reward");
    const json& transition = doc.at("transition");
    g.reward.assign(static_cast<std::size_t>(states) * g.n * g.m, 0.0);
    g.transition.assign(static_cast<std::size_t>(states) * g.n * g.m,
                        Eigen::VectorXd());
    for (int s = 0; s < states; ++s) {
      for (int a = 0; a < g.n; ++a) {
        for (int b = 0; b < g.m; ++b) {
          g.r(s, a, b) = reward.at(s).at(a).at(b).get<double>();
          const json& row = transition.at(s).at(a).at(b);
          if (!row.empty()) g.trans_row(s, a, b) = vector_from_json(row);
        }
      }
    }

    if (doc.contains("theta_star"))
      out.theta_star = vector_from_json(doc.at("theta_star"));
    return out;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed game document: ") + e.what());
  }
}

json instance_to_json(const GeneratedInstance& inst, std::uint64_t seed) {
  json doc = dsg_to_json(inst.dsg, inst.theta_star);
  doc["metadata"] = {{"spec", inst.description},
                     {"seed", seed},
                     {"feature_scale", inst.feature_scale}};
  return doc;
}

json run_result_to_json(const RunResult& run) {
  json episodes = json::array();
  for (const auto& ep : run.episodes) {
    episodes.push_back({{"episode", ep.episode},
                        {"realized_return", ep.realized_return},
                        {"vtilde_root", ep.vtilde_root},
                        {"mistakes", ep.mistake_steps},
                        {"epsilon", ep.epsilon},
                        {"fallback_events", ep.fallback_events}});
  }
  json doc;
  doc["episodes"] = std::move(episodes);
  if (!run.segments.empty()) {
    json segments = json::array();
    for (const auto& seg : run.segments) {
      segments.push_back({{"first_episode", seg.first_episode},
                          {"length", seg.length},
                          {"epsilon", seg.epsilon},
                          {"version_rows_at_start", seg.version_rows_at_start}});
    }
    doc["segments"] = std::move(segments);
  }
  return doc;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << doc.dump(2) << '\n';
}

}  // namespace dsg
