#pragma once

#include <vector>

#include "dsg/game.hpp"

namespace dsg {

/// Dense standard-form LP: maximize c.z subject to A z <= b, z >= 0.
/// Low-level backend shared by the simplex-domain solver and the
/// margin-centering step of the optimistic solver.
struct StandardLpResult {
  enum class Status { Optimal, Infeasible, Unbounded, Error };
  Status status = Status::Error;
  std::vector<double> z;
  double value = 0.0;
};

StandardLpResult solve_standard_lp(const std::vector<std::vector<double>>& A,
                                   const std::vector<double>& b,
                                   const std::vector<double>& c);

/// Maximize objective.y over the probability simplex restricted to `support`,
/// subject to rows[i].y >= rhs[i]. Vectors are indexed by support position;
/// solutions are reported as full-length mixed strategies.
struct SimplexLp {
  int num_actions = 0;
  std::vector<int> support;
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
};

struct LpSolution {
  enum class Status { Optimal, Infeasible };
  Status status = Status::Infeasible;
  MixedStrategy x;
  double value = 0.0;
};

/// Deterministic dense solve; ties in pivoting broken by variable index so
/// repeated runs return the same vertex. Throws SolverError on numeric
/// failure (an unbounded result cannot occur on a simplex domain).
LpSolution solve_simplex_lp(const SimplexLp& lp);

}  // namespace dsg
