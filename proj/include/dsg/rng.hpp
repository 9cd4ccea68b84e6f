#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace dsg {

/// splitmix64 finalizer; used to derive independent child seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Seeded random stream. Every stochastic operation in the library takes one
/// of these explicitly, so whole runs replay bit-identically from a seed.
///
/// split(tag, index) derives a child stream from the seed this stream was
/// constructed with; it does not disturb the parent. Children with distinct
/// (tag, index) pairs are independent for all practical purposes, and the
/// derivation is order-free, so per-state work may run in parallel.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : base_(seed), engine_(mix64(seed)) {}

  RngStream split(std::uint64_t tag, std::uint64_t index = 0) const {
    return RngStream(mix64(base_ ^ mix64(tag)) ^ mix64(index ^ 0x5851f42d4c957f2dull));
  }

  std::uint64_t seed() const { return base_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Unbiased integer in [0, n).
  int uniform_int(int n) {
    auto range = static_cast<std::uint64_t>(n);
    std::uint64_t threshold = (-range) % range;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x < threshold);
    return static_cast<int>(x % range);
  }

  /// Standard normal via Box-Muller (engine-only, no cached state).
  double gaussian() {
    double u1 = 1.0 - uniform01();  // (0, 1]
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniform direction on the unit sphere in R^p.
  Eigen::VectorXd unit_sphere(int p) {
    Eigen::VectorXd v(p);
    double norm = 0.0;
    do {
      for (int i = 0; i < p; ++i) v[i] = gaussian();
      norm = v.norm();
    } while (norm < 1e-12);
    return v / norm;
  }

  /// Uniform point on the probability simplex via sorted spacings.
  std::vector<double> simplex_uniform(int d) {
    if (d == 1) return {1.0};
    std::vector<double> cuts(static_cast<std::size_t>(d) - 1);
    for (auto& c : cuts) c = uniform01();
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> w(static_cast<std::size_t>(d));
    w[0] = cuts[0];
    for (int i = 1; i < d - 1; ++i) w[i] = cuts[i] - cuts[i - 1];
    w[d - 1] = 1.0 - cuts[d - 2];
    return w;
  }

  /// Sample an index from a probability vector (entries sum to ~1).
  int categorical(const Eigen::VectorXd& probs) {
    double u = uniform01();
    double cum = 0.0;
    int last_positive = 0;
    for (int i = 0; i < probs.size(); ++i) {
      if (probs[i] > 0.0) last_positive = i;
      cum += probs[i];
      if (u < cum) return i;
    }
    return last_positive;
  }

 private:
  std::uint64_t base_;
  std::mt19937_64 engine_;
};

/// Salt tags for stream derivation; keeps sub-streams from colliding.
enum StreamTag : std::uint64_t {
  kInstanceStream = 1,
  kPolicyStream = 2,
  kEpisodeStream = 3,
  kEvalStream = 4,
  kStateStream = 5,
  kBaselineStream = 6,
};

}  // namespace dsg
