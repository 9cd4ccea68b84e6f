#include "dsg/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dsg {

GeneratedInstance random_dsg(const RandomDsgSpec& spec) {
  if (spec.layer_sizes.empty() || spec.layer_sizes[0] != 1)
    throw SpecError("random game needs layer_sizes starting with 1");
  for (int size : spec.layer_sizes)
    if (size < 1) throw SpecError("random game layer sizes must be >= 1");
  if (spec.n < 1 || spec.m < 1 || spec.p < 1)
    throw SpecError("random game needs n, m, p >= 1");

  RngStream rng = RngStream(spec.seed).split(kInstanceStream);
  Dsg g = Dsg::make_shape(spec.layer_sizes, spec.n, spec.m, spec.p);
  int states = g.num_states();

  for (int s = 0; s < states; ++s)
    for (int a = 0; a < g.n; ++a)
      for (int b = 0; b < g.m; ++b) g.r(s, a, b) = rng.uniform01();

  for (int s = 0; s < states; ++s) {
    int layer = g.layer_of(s);
    if (layer == g.horizon) continue;
    int next_size = g.layer_sizes[layer];
    for (int a = 0; a < g.n; ++a) {
      for (int b = 0; b < g.m; ++b) {
        std::vector<double> row = rng.simplex_uniform(next_size);
        Eigen::VectorXd& target = g.trans_row(s, a, b);
        target.resize(next_size);
        for (int j = 0; j < next_size; ++j) target[j] = row[j];
      }
    }
  }

  for (int b = 0; b < g.m; ++b)
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.p; ++j) g.features[b](i, j) = rng.uniform(-1.0, 1.0);

  GeneratedInstance inst;
  auto [normalized, scale] = normalize_features(g);
  inst.dsg = std::move(normalized);
  inst.feature_scale = scale;
  inst.theta_star = rng.unit_sphere(g.p);

  std::ostringstream desc;
  desc << "random(layers=";
  for (std::size_t i = 0; i < spec.layer_sizes.size(); ++i)
    desc << (i ? "," : "") << spec.layer_sizes[i];
  desc << " n=" << spec.n << " m=" << spec.m << " p=" << spec.p
       << " seed=" << spec.seed << ")";
  inst.description = desc.str();
  return inst;
}

namespace {

// Budget values reachable at each step under exact forward closure;
// duplicates within 1e-9 merged, each layer sorted descending.
std::vector<std::vector<double>> budget_layers(const PoachingSpec& spec) {
  std::vector<std::vector<double>> layers(static_cast<std::size_t>(spec.horizon));
  layers[0] = {spec.budget};
  for (int h = 1; h < spec.horizon; ++h) {
    std::vector<double> next;
    auto add = [&next](double v) {
      for (double existing : next)
        if (std::abs(existing - v) <= 1e-9) return;
      next.push_back(v);
    };
    for (double remaining : layers[h - 1]) {
      add(remaining);  // stand-down costs nothing
      for (double cost : spec.patrol_costs)
        if (cost <= remaining + 1e-9) add(remaining - cost);
    }
    std::sort(next.begin(), next.end(), std::greater<>());
    layers[h] = std::move(next);
  }
  return layers;
}

int budget_index(const std::vector<double>& layer, double value) {
  for (std::size_t i = 0; i < layer.size(); ++i)
    if (std::abs(layer[i] - value) <= 1e-9) return static_cast<int>(i);
  throw SpecError("budget closure missed a reachable value");
}

}  // namespace

GeneratedInstance poaching_dsg(const PoachingSpec& spec) {
  if (spec.regions < 1) throw SpecError("poaching domain needs at least one region");
  if (static_cast<int>(spec.patrol_costs.size()) != spec.regions)
    throw SpecError("patrol_costs must list one cost per region");
  for (double c : spec.patrol_costs)
    if (c < 0.0) throw SpecError("patrol costs must be nonnegative");
  if (spec.horizon < 1 || spec.animal_types < 1 || spec.budget < 0.0)
    throw SpecError("poaching domain needs horizon >= 1, animals >= 1, budget >= 0");

  int regions = spec.regions;
  int animals = spec.animal_types;
  int n = regions + 1;  // action 0 stands down, action i patrols region i-1
  int m = regions;
  int p = animals + 1;

  RngStream rng = RngStream(spec.seed).split(kInstanceStream);

  std::vector<std::vector<double>> layers = budget_layers(spec);
  std::vector<int> sizes;
  sizes.reserve(layers.size());
  for (const auto& layer : layers) sizes.push_back(static_cast<int>(layer.size()));

  Dsg g = Dsg::make_shape(sizes, n, m, p);

  // Densities per (region, animal) and severities per (step, animal).
  Eigen::MatrixXd density(regions, animals);
  for (int r = 0; r < regions; ++r)
    for (int k = 0; k < animals; ++k) density(r, k) = rng.uniform01();
  Eigen::MatrixXd severity(spec.horizon, animals);
  for (int h = 0; h < spec.horizon; ++h)
    for (int k = 0; k < animals; ++k) severity(h, k) = rng.uniform01();

  for (int b = 0; b < m; ++b) {
    for (int a = 0; a < n; ++a) {
      if (a == b + 1) {
        g.features[b].row(a).setZero();
        g.features[b](a, p - 1) = -1.0;
      } else {
        for (int k = 0; k < animals; ++k) g.features[b](a, k) = density(b, k);
        g.features[b](a, p - 1) = 0.0;
      }
    }
  }

  for (int layer = 1; layer <= spec.horizon; ++layer) {
    int offset = g.layer_offset(layer);
    for (std::size_t idx = 0; idx < layers[layer - 1].size(); ++idx) {
      int s = offset + static_cast<int>(idx);
      double remaining = layers[layer - 1][idx];

      std::vector<int> avail = {0};
      for (int r = 0; r < regions; ++r)
        if (spec.patrol_costs[r] <= remaining + 1e-9) avail.push_back(r + 1);
      g.available[s] = std::move(avail);

      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < m; ++b) {
          if (a == b + 1)
            g.r(s, a, b) = spec.catch_value;
          else
            g.r(s, a, b) = -severity.row(layer - 1).dot(density.row(b));
        }
      }

      if (layer == spec.horizon) continue;
      for (int a = 0; a < n; ++a) {
        double cost = (a == 0) ? 0.0 : spec.patrol_costs[a - 1];
        double next_budget = (cost <= remaining + 1e-9) ? remaining - cost : remaining;
        int next_idx = budget_index(layers[layer], next_budget);
        for (int b = 0; b < m; ++b) {
          Eigen::VectorXd& row = g.trans_row(s, a, b);
          row = Eigen::VectorXd::Zero(static_cast<int>(layers[layer].size()));
          row[next_idx] = 1.0;
        }
      }
    }
  }

  // Affine rescale of raw rewards into [0,1]; order within every (s,b) slice
  // is preserved, so follower-facing structure is untouched.
  double lo = *std::min_element(g.reward.begin(), g.reward.end());
  double hi = *std::max_element(g.reward.begin(), g.reward.end());
  if (hi - lo > 1e-12) {
    for (double& r : g.reward) r = (r - lo) / (hi - lo);
  } else {
    for (double& r : g.reward) r = 0.5;
  }

  GeneratedInstance inst;
  auto [normalized, scale] = normalize_features(g);
  inst.dsg = std::move(normalized);
  inst.feature_scale = scale;
  inst.theta_star = rng.unit_sphere(p);
  inst.theta_star[p - 1] = std::abs(inst.theta_star[p - 1]);  // being caught hurts

  std::ostringstream desc;
  desc << "poaching(regions=" << regions << " budget=" << spec.budget
       << " horizon=" << spec.horizon << " animals=" << animals
       << " seed=" << spec.seed << ")";
  inst.description = desc.str();
  return inst;
}

}  // namespace dsg
