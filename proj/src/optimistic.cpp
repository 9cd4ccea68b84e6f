#include "dsg/optimistic.hpp"

#include <cmath>
#include <numbers>

namespace dsg {

namespace {

constexpr double kFeasTol = 1e-12;       // sampler output tolerance
constexpr double kHardVersionTol = 1e-9; // hard-contract tolerance on rows
constexpr double kHardMarginTol = 1e-7;  // hard-contract tolerance on margins
constexpr int kRejectionStreak = 64;     // switch to hit-and-run after this
constexpr int kHitAndRunThin = 4;

bool rows_satisfied(const std::vector<Eigen::VectorXd>& rows,
                    const Eigen::VectorXd& theta, double tol) {
  for (const auto& c : rows)
    if (c.dot(theta) < -tol) return false;
  return true;
}

// Nudges theta onto the feasible side of slightly violated rows by repeated
// projection onto the worst violated hyperplane, then renormalizes. Returns
// false if the point cannot be polished to tolerance.
bool polish(Eigen::VectorXd& theta, const std::vector<Eigen::VectorXd>& rows) {
  for (int pass = 0; pass < 64; ++pass) {
    theta.normalize();
    double worst = 0.0;
    int worst_row = -1;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double v = rows[i].dot(theta);
      if (v < worst) {
        worst = v;
        worst_row = static_cast<int>(i);
      }
    }
    if (worst >= -kFeasTol * 0.5) return true;
    const Eigen::VectorXd& c = rows[static_cast<std::size_t>(worst_row)];
    double nsq = c.squaredNorm();
    if (nsq < 1e-24) return false;
    theta -= (c.dot(theta) / nsq) * c;
    if (theta.norm() < 1e-9) return false;
  }
  theta.normalize();
  return rows_satisfied(rows, theta, kFeasTol);
}

// Feasibility LP over the inf-norm box of radius beta = p^{-1/2}: maximizes
// the minimum row slack. Any unit vector satisfying all rows scales into the
// box, so a strictly negative optimum certifies an empty version space.
// Returns a nonzero feasible point, or nullopt when the region is empty or
// collapses to the origin.
std::optional<Eigen::VectorXd> lp_feasible_seed(
    const std::vector<Eigen::VectorXd>& rows, int p, RngStream& rng) {
  double beta = 1.0 / std::sqrt(static_cast<double>(p));
  double bound = 1e-6;
  for (const auto& c : rows) bound = std::max(bound, c.norm());

  // Variables z = (w_1..w_p, tau), theta = w - beta*1, slack t = tau - bound.
  auto build_rows = [&](std::vector<std::vector<double>>& A, std::vector<double>& b,
                        bool with_slack) {
    for (const auto& c : rows) {
      std::vector<double> row(static_cast<std::size_t>(p) + (with_slack ? 1 : 0), 0.0);
      for (int j = 0; j < p; ++j) row[j] = -c[j];
      if (with_slack) row[p] = 1.0;
      A.push_back(std::move(row));
      b.push_back((with_slack ? bound : 0.0) - beta * c.sum());
    }
    for (int j = 0; j < p; ++j) {
      std::vector<double> row(static_cast<std::size_t>(p) + (with_slack ? 1 : 0), 0.0);
      row[j] = 1.0;
      A.push_back(std::move(row));
      b.push_back(2.0 * beta);
    }
    if (with_slack) {
      std::vector<double> row(static_cast<std::size_t>(p) + 1, 0.0);
      row[p] = 1.0;
      A.push_back(std::move(row));
      b.push_back(2.0 * bound);
    }
  };

  std::vector<std::vector<double>> A;
  std::vector<double> b;
  build_rows(A, b, true);
  std::vector<double> c(static_cast<std::size_t>(p) + 1, 0.0);
  c[p] = 1.0;
  StandardLpResult stage1 = solve_standard_lp(A, b, c);
  if (stage1.status != StandardLpResult::Status::Optimal) return std::nullopt;
  if (stage1.value - bound < -1e-9) return std::nullopt;  // certified empty

  Eigen::VectorXd theta(p);
  for (int j = 0; j < p; ++j) theta[j] = stage1.z[j] - beta;
  if (theta.norm() >= 1e-9) return theta;

  // Slack optimum pinned at zero and the LP landed on the origin; look for a
  // nonzero direction inside {C theta >= 0} with random objectives.
  for (int attempt = 0; attempt < 2 * p + 4; ++attempt) {
    Eigen::VectorXd obj = rng.unit_sphere(p);
    std::vector<std::vector<double>> A2;
    std::vector<double> b2;
    build_rows(A2, b2, false);
    std::vector<double> c2(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) c2[j] = obj[j];
    StandardLpResult stage2 = solve_standard_lp(A2, b2, c2);
    if (stage2.status != StandardLpResult::Status::Optimal) continue;
    for (int j = 0; j < p; ++j) theta[j] = stage2.z[j] - beta;
    if (theta.norm() >= 1e-9) return theta;
  }
  return std::nullopt;
}

// One geodesic hit-and-run move on the sphere: picks a random great circle
// through `cur` and samples uniformly from the arc satisfying all rows.
bool hit_and_run_step(Eigen::VectorXd& cur, const std::vector<Eigen::VectorXd>& rows,
                      RngStream& rng) {
  int p = static_cast<int>(cur.size());
  Eigen::VectorXd dir;
  for (int tries = 0; tries < 8; ++tries) {
    Eigen::VectorXd g = rng.unit_sphere(p);
    dir = g - g.dot(cur) * cur;
    double norm = dir.norm();
    if (norm > 1e-9) {
      dir /= norm;
      break;
    }
    dir.resize(0);
  }
  if (dir.size() == 0) return false;

  constexpr double kHalfPi = std::numbers::pi / 2.0;
  double lo = -std::numbers::pi;
  double hi = std::numbers::pi;
  for (const auto& c : rows) {
    double a = c.dot(cur);
    double b = c.dot(dir);
    double radius = std::hypot(a, b);
    if (radius < 1e-15) continue;  // row vanishes on this circle
    double phi = std::atan2(b, a);
    lo = std::max(lo, phi - kHalfPi);
    hi = std::min(hi, phi + kHalfPi);
  }
  if (lo > hi) return false;  // numeric edge; stay put
  double margin = std::min(1e-9, (hi - lo) / 8.0);
  double alpha = (hi - lo > 2.0 * margin)
                     ? rng.uniform(lo + margin, hi - margin)
                     : 0.5 * (lo + hi);
  Eigen::VectorXd next = std::cos(alpha) * cur + std::sin(alpha) * dir;
  next.normalize();
  if (!rows_satisfied(rows, next, kFeasTol) && !polish(next, rows)) return false;
  cur = next;
  return true;
}

}  // namespace

std::vector<Eigen::VectorXd> sample_version_space(
    const std::vector<Eigen::VectorXd>& all_rows, int p, int k, int budget,
    RngStream& rng) {
  // Near-zero rows constrain nothing a unit vector can violate at tolerance.
  std::vector<Eigen::VectorXd> rows;
  rows.reserve(all_rows.size());
  for (const auto& c : all_rows)
    if (c.lpNorm<Eigen::Infinity>() >= 1e-12) rows.push_back(c);

  std::vector<Eigen::VectorXd> samples;
  samples.reserve(static_cast<std::size_t>(k));

  if (p == 1) {
    std::vector<double> feasible;
    for (double sign : {1.0, -1.0}) {
      Eigen::VectorXd theta(1);
      theta[0] = sign;
      if (rows_satisfied(rows, theta, kFeasTol)) feasible.push_back(sign);
    }
    if (feasible.empty()) throw SamplingExhausted("no feasible sign in dimension 1");
    for (int i = 0; i < k; ++i) {
      Eigen::VectorXd theta(1);
      theta[0] = feasible[rng.uniform_int(static_cast<int>(feasible.size()))];
      samples.push_back(theta);
    }
    return samples;
  }

  bool hit_and_run = false;
  Eigen::VectorXd cur;
  int streak = 0;
  int proposals = 0;
  int chain_steps = 0;
  while (static_cast<int>(samples.size()) < k && proposals < budget) {
    if (!hit_and_run) {
      ++proposals;
      Eigen::VectorXd theta = rng.unit_sphere(p);
      if (rows_satisfied(rows, theta, kFeasTol)) {
        samples.push_back(theta);
        cur = theta;
        streak = 0;
        continue;
      }
      if (++streak < kRejectionStreak) continue;
      if (cur.size() == 0) {
        auto seed = lp_feasible_seed(rows, p, rng);
        if (!seed) throw SamplingExhausted("version space is empty at tolerance");
        cur = *seed;
        cur.normalize();
        if (!rows_satisfied(rows, cur, kFeasTol) && !polish(cur, rows))
          throw SamplingExhausted("could not polish a feasible seed point");
      }
      hit_and_run = true;
      chain_steps = 0;
      continue;
    }
    ++proposals;
    if (hit_and_run_step(cur, rows, rng)) ++chain_steps;
    if (chain_steps >= kHitAndRunThin) {
      samples.push_back(cur);
      chain_steps = 0;
    }
  }

  if (samples.empty())
    throw SamplingExhausted("proposal budget exhausted with no feasible sample");
  return samples;
}

OptimisticProblem make_optimistic_problem(
    const Dsg& dsg, int state, const Eigen::VectorXd& next_values,
    const std::vector<Eigen::VectorXd>& version_rows, double epsilon) {
  OptimisticProblem prob;
  prob.num_actions = dsg.n;
  prob.feature_dim = dsg.p;
  prob.support = dsg.available[state];
  prob.objectives.reserve(static_cast<std::size_t>(dsg.m));
  for (int b = 0; b < dsg.m; ++b)
    prob.objectives.push_back(action_value_vector(dsg, state, b, next_values));
  prob.margin_diffs.resize(static_cast<std::size_t>(dsg.m) * dsg.m);
  for (int b = 0; b < dsg.m; ++b)
    for (int b2 = 0; b2 < dsg.m; ++b2)
      prob.margin_diffs[static_cast<std::size_t>(b) * dsg.m + b2] =
          dsg.features[b] - dsg.features[b2];
  prob.version_rows = version_rows;
  prob.epsilon = epsilon;
  return prob;
}

namespace {

// x-LP for a fixed (theta, b): margins become linear rows over the support.
LpSolution solve_x_lp(const OptimisticProblem& prob, const Eigen::VectorXd& theta,
                      int b) {
  int m = prob.num_follower_actions();
  int d = static_cast<int>(prob.support.size());
  SimplexLp lp;
  lp.num_actions = prob.num_actions;
  lp.support = prob.support;
  lp.objective.resize(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j)
    lp.objective[j] = prob.objectives[b][prob.support[j]];
  for (int b2 = 0; b2 < m; ++b2) {
    if (b2 == b) continue;
    Eigen::VectorXd g = prob.diff(b, b2) * theta;
    std::vector<double> row(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) row[j] = g[prob.support[j]];
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(prob.epsilon);
  }
  return solve_simplex_lp(lp);
}

bool meets_hard_contract(const OptimisticProblem& prob, const MixedStrategy& x,
                         const Eigen::VectorXd& theta, int b) {
  if (std::abs(theta.norm() - 1.0) > 1e-9) return false;
  if (!rows_satisfied(prob.version_rows, theta, kHardVersionTol)) return false;
  int m = prob.num_follower_actions();
  for (int b2 = 0; b2 < m; ++b2) {
    if (b2 == b) continue;
    if (x.probs.dot(prob.diff(b, b2) * theta) < prob.epsilon - kHardMarginTol)
      return false;
  }
  return true;
}

// Margin-centering step: with x fixed, maximize the worst margin over the
// version cone intersected with the inf-norm box of radius p^{-1/2}. The box
// sits inside the unit ball, margins and version rows are positively
// homogeneous in theta, so scaling the optimum up to unit norm only helps.
std::optional<Eigen::VectorXd> recenter_theta(const OptimisticProblem& prob,
                                              const MixedStrategy& x, int b) {
  int p = prob.feature_dim;
  int m = prob.num_follower_actions();
  double beta = 1.0 / std::sqrt(static_cast<double>(p));

  std::vector<Eigen::VectorXd> gs;
  double bound = 1e-6;
  for (int b2 = 0; b2 < m; ++b2) {
    if (b2 == b) continue;
    Eigen::VectorXd g = prob.diff(b, b2).transpose() * x.probs;
    bound = std::max(bound, g.norm());
    gs.push_back(std::move(g));
  }
  if (gs.empty()) return std::nullopt;

  // Variables z = (w_1..w_p, tau); theta = w - beta*1, margin slack = tau - bound.
  std::vector<std::vector<double>> A;
  std::vector<double> rhs;
  for (const auto& g : gs) {
    std::vector<double> row(static_cast<std::size_t>(p) + 1, 0.0);
    for (int j = 0; j < p; ++j) row[j] = -g[j];
    row[p] = 1.0;
    A.push_back(std::move(row));
    rhs.push_back(bound - beta * g.sum());
  }
  for (const auto& c : prob.version_rows) {
    std::vector<double> row(static_cast<std::size_t>(p) + 1, 0.0);
    for (int j = 0; j < p; ++j) row[j] = -c[j];
    A.push_back(std::move(row));
    rhs.push_back(-beta * c.sum());
  }
  for (int j = 0; j < p; ++j) {
    std::vector<double> row(static_cast<std::size_t>(p) + 1, 0.0);
    row[j] = 1.0;
    A.push_back(std::move(row));
    rhs.push_back(2.0 * beta);
  }
  {
    std::vector<double> row(static_cast<std::size_t>(p) + 1, 0.0);
    row[p] = 1.0;
    A.push_back(std::move(row));
    rhs.push_back(2.0 * bound);
  }
  std::vector<double> obj(static_cast<std::size_t>(p) + 1, 0.0);
  obj[p] = 1.0;

  StandardLpResult res = solve_standard_lp(A, rhs, obj);
  if (res.status != StandardLpResult::Status::Optimal) return std::nullopt;
  Eigen::VectorXd theta(p);
  for (int j = 0; j < p; ++j) theta[j] = res.z[j] - beta;
  double norm = theta.norm();
  if (norm < 1e-9) return std::nullopt;
  theta /= norm;
  if (!rows_satisfied(prob.version_rows, theta, kHardVersionTol)) {
    if (!polish(theta, prob.version_rows)) return std::nullopt;
    if (!rows_satisfied(prob.version_rows, theta, kHardVersionTol)) return std::nullopt;
  }
  return theta;
}

}  // namespace

std::optional<OptimisticSolution> solve_optimistic_program(
    const OptimisticProblem& prob, int candidates, RngStream& rng, int budget) {
  if (prob.epsilon <= 0.0) throw SolverError("epsilon must be positive");
  int m = prob.num_follower_actions();
  if (budget < 0) budget = 200 * std::max(candidates, 1);
  int k = (m == 1) ? 1 : candidates;

  std::vector<Eigen::VectorXd> thetas =
      sample_version_space(prob.version_rows, prob.feature_dim, k, budget, rng);

  std::optional<OptimisticSolution> best;
  auto consider = [&](const MixedStrategy& x, const Eigen::VectorXd& theta, int b,
                      double value) {
    if (best && value <= best->value) return;
    if (!meets_hard_contract(prob, x, theta, b)) return;
    best = OptimisticSolution{x, theta, b, value};
  };

  for (const auto& theta : thetas) {
    for (int b = 0; b < m; ++b) {
      LpSolution sol = solve_x_lp(prob, theta, b);
      if (sol.status != LpSolution::Status::Optimal) continue;
      consider(sol.x, theta, b, sol.value);
    }
  }

  if (best && m > 1) {
    auto theta = recenter_theta(prob, best->x, best->action);
    if (theta) {
      LpSolution sol = solve_x_lp(prob, *theta, best->action);
      if (sol.status == LpSolution::Status::Optimal)
        consider(sol.x, *theta, best->action, sol.value);
    }
  }

  return best;
}

}  // namespace dsg
