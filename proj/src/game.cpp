#include "dsg/game.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace dsg {

MixedStrategy MixedStrategy::point_mass(int n, int action) {
  MixedStrategy x;
  x.probs = Eigen::VectorXd::Zero(n);
  x.probs[action] = 1.0;
  return x;
}

MixedStrategy MixedStrategy::uniform_over(int n, const std::vector<int>& actions) {
  MixedStrategy x;
  x.probs = Eigen::VectorXd::Zero(n);
  for (int a : actions) x.probs[a] = 1.0 / static_cast<double>(actions.size());
  return x;
}

int Dsg::num_states() const {
  return std::accumulate(layer_sizes.begin(), layer_sizes.end(), 0);
}

int Dsg::layer_offset(int layer) const {
  int off = 0;
  for (int h = 1; h < layer; ++h) off += layer_sizes[h - 1];
  return off;
}

StateId Dsg::state_id(int global) const {
  int layer = 1;
  while (global >= layer_sizes[layer - 1]) {
    global -= layer_sizes[layer - 1];
    ++layer;
  }
  return StateId{layer, global};
}

Dsg Dsg::make_shape(std::vector<int> sizes, int n, int m, int p) {
  Dsg g;
  g.horizon = static_cast<int>(sizes.size());
  g.layer_sizes = std::move(sizes);
  g.n = n;
  g.m = m;
  g.p = p;
  int states = g.num_states();
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  g.available.assign(states, all);
  g.reward.assign(static_cast<std::size_t>(states) * n * m, 0.0);
  g.transition.assign(static_cast<std::size_t>(states) * n * m, Eigen::VectorXd());
  g.features.assign(m, Eigen::MatrixXd::Zero(n, p));
  return g;
}

namespace {

std::string state_str(const Dsg& dsg, int global) {
  StateId id = dsg.state_id(global);
  std::ostringstream out;
  out << "s=(" << id.layer << "," << id.index << ")";
  return out.str();
}

}  // namespace

std::vector<std::string> validate(const Dsg& dsg) {
  std::vector<std::string> out;
  auto fail = [&out](const std::string& msg) { out.push_back(msg); };

  if (dsg.horizon < 1) fail("horizon must be >= 1");
  if (static_cast<int>(dsg.layer_sizes.size()) != dsg.horizon)
    fail("layer_sizes length must equal horizon");
  if (!dsg.layer_sizes.empty() && dsg.layer_sizes[0] != 1)
    fail("layer 1 must contain exactly one state");
  for (std::size_t h = 0; h < dsg.layer_sizes.size(); ++h)
    if (dsg.layer_sizes[h] < 1) fail("layer " + std::to_string(h + 1) + " is empty");
  if (dsg.n < 1) fail("leader action count must be >= 1");
  if (dsg.m < 1) fail("follower action count must be >= 1");
  if (dsg.p < 1) fail("feature dimension must be >= 1");
  if (!out.empty()) return out;  // shape is broken; tensor checks would misindex

  int states = dsg.num_states();
  if (static_cast<int>(dsg.available.size()) != states)
    fail("available must have one entry per state");
  if (dsg.reward.size() != static_cast<std::size_t>(states) * dsg.n * dsg.m)
    fail("reward tensor has wrong size");
  if (dsg.transition.size() != static_cast<std::size_t>(states) * dsg.n * dsg.m)
    fail("transition tensor has wrong size");
  if (static_cast<int>(dsg.features.size()) != dsg.m)
    fail("features must hold one matrix per follower action");
  if (!out.empty()) return out;

  for (int s = 0; s < states; ++s) {
    if (dsg.available[s].empty())
      fail("no available leader action at " + state_str(dsg, s));
    for (int a : dsg.available[s])
      if (a < 0 || a >= dsg.n)
        fail("available action index out of range at " + state_str(dsg, s));
  }

  for (int s = 0; s < states; ++s) {
    bool terminal = dsg.layer_of(s) == dsg.horizon;
    int next_size = terminal ? 0 : dsg.layer_sizes[dsg.layer_of(s)];
    for (int a = 0; a < dsg.n; ++a) {
      for (int b = 0; b < dsg.m; ++b) {
        double r = dsg.r(s, a, b);
        if (!std::isfinite(r) || r < 0.0 || r > 1.0) {
          std::ostringstream msg;
          msg << "reward outside [0,1] at " << state_str(dsg, s) << " a=" << a
              << " b=" << b << " value=" << r;
          fail(msg.str());
        }
        const Eigen::VectorXd& row = dsg.trans_row(s, a, b);
        if (terminal) {
          if (row.size() != 0)
            fail("last-layer state has a transition row at " + state_str(dsg, s));
          continue;
        }
        if (row.size() != next_size) {
          fail("transition row has wrong width at " + state_str(dsg, s));
          continue;
        }
        double sum = 0.0;
        bool neg = false;
        for (int j = 0; j < row.size(); ++j) {
          if (!std::isfinite(row[j]) || row[j] < -1e-12) neg = true;
          sum += row[j];
        }
        if (neg || std::abs(sum - 1.0) > 1e-9) {
          std::ostringstream msg;
          msg << "transition row is not a distribution at " << state_str(dsg, s)
              << " a=" << a << " b=" << b << " sum=" << sum;
          fail(msg.str());
        }
      }
    }
  }

  double max_diff = 0.0;
  bool finite = true;
  for (int b = 0; b < dsg.m; ++b) {
    if (dsg.features[b].rows() != dsg.n || dsg.features[b].cols() != dsg.p)
      fail("feature matrix " + std::to_string(b) + " has wrong shape");
    if (!dsg.features[b].allFinite()) finite = false;
    for (int b2 = 0; b2 < b; ++b2)
      max_diff = std::max(max_diff, (dsg.features[b] - dsg.features[b2]).norm());
  }
  if (!finite) fail("feature matrices contain non-finite entries");
  if (dsg.m > 1 && finite && max_diff == 0.0)
    fail("all feature matrices are identical; follower responses carry no signal");

  return out;
}

std::pair<Dsg, double> normalize_features(const Dsg& dsg) {
  for (const auto& mat : dsg.features)
    if (!mat.allFinite()) throw DegenerateFeatures("non-finite feature entries");
  double max_diff = 0.0;
  for (int b = 0; b < dsg.m; ++b)
    for (int b2 = 0; b2 < b; ++b2)
      max_diff = std::max(max_diff, (dsg.features[b] - dsg.features[b2]).norm());
  if (max_diff == 0.0)
    throw DegenerateFeatures("all feature matrices are identical");
  double c = 1.0 / max_diff;
  Dsg out = dsg;
  for (auto& mat : out.features) mat *= c;
  return {std::move(out), c};
}

bool strategy_valid(const Dsg& dsg, int state, const MixedStrategy& x, double tol) {
  if (x.probs.size() != dsg.n) return false;
  double sum = 0.0;
  for (int a = 0; a < dsg.n; ++a) {
    double v = x.probs[a];
    if (!std::isfinite(v) || v < -tol) return false;
    sum += v;
  }
  if (std::abs(sum - 1.0) > tol) return false;
  const auto& avail = dsg.available[state];
  for (int a = 0; a < dsg.n; ++a) {
    if (std::abs(x.probs[a]) <= tol) continue;
    if (std::find(avail.begin(), avail.end(), a) == avail.end()) return false;
  }
  return true;
}

int best_response(StateId s, const MixedStrategy& x, const Eigen::VectorXd& theta,
                  const Dsg& dsg, double tie_tol) {
  int state = dsg.global_index(s);
  if (!strategy_valid(dsg, state, x))
    throw InvalidStrategy("invalid mixed strategy at " + state_str(dsg, state));
  if (dsg.m == 1) return 0;

  Eigen::VectorXd utilities(dsg.m);
  for (int b = 0; b < dsg.m; ++b)
    utilities[b] = x.probs.dot(dsg.features[b] * theta);
  double best_u = utilities.maxCoeff();

  int best = -1;
  double best_leader = -1.0;
  for (int b = 0; b < dsg.m; ++b) {
    if (utilities[b] < best_u - tie_tol) continue;
    double leader = 0.0;
    for (int a = 0; a < dsg.n; ++a) leader += x.probs[a] * dsg.r(state, a, b);
    if (best < 0 || leader > best_leader) {
      best = b;
      best_leader = leader;
    }
  }
  return best;
}

double leader_expected_reward(StateId s, const MixedStrategy& x, const Dsg& dsg,
                              const FollowerOracle& oracle) {
  int b = best_response(s, x, oracle.theta_star, dsg, oracle.tie_tol);
  int state = dsg.global_index(s);
  double value = 0.0;
  for (int a = 0; a < dsg.n; ++a) value += x.probs[a] * dsg.r(state, a, b);
  return value;
}

Eigen::VectorXd aux_transition(StateId s, const MixedStrategy& x, const Dsg& dsg,
                               const FollowerOracle& oracle) {
  if (s.layer >= dsg.horizon)
    throw TerminalState("no transition from the last layer");
  int b = best_response(s, x, oracle.theta_star, dsg, oracle.tie_tol);
  int state = dsg.global_index(s);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dsg.layer_sizes[s.layer]);
  for (int a = 0; a < dsg.n; ++a)
    if (x.probs[a] > 0.0) out += x.probs[a] * dsg.trans_row(state, a, b);
  return out;
}

StateId step(StateId s, int a, int b, const Dsg& dsg, RngStream& rng) {
  if (s.layer >= dsg.horizon)
    throw TerminalState("no transition from the last layer");
  const Eigen::VectorXd& row = dsg.trans_row(dsg.global_index(s), a, b);
  return StateId{s.layer + 1, rng.categorical(row)};
}

Eigen::VectorXd action_value_vector(const Dsg& dsg, int state, int b,
                                    const Eigen::VectorXd& next_values) {
  Eigen::VectorXd q(dsg.n);
  bool terminal = dsg.layer_of(state) == dsg.horizon;
  for (int a = 0; a < dsg.n; ++a) {
    q[a] = dsg.r(state, a, b);
    if (!terminal && next_values.size() > 0)
      q[a] += dsg.trans_row(state, a, b).dot(next_values);
  }
  return q;
}

}  // namespace dsg
