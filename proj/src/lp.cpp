#include "dsg/lp.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace dsg {

namespace {

constexpr double kEps = 1e-9;
constexpr int kBlandAfter = 500;   // switch to Bland's rule if pivoting stalls
constexpr int kPivotCap = 20000;

// Dense tableau simplex (two-phase). Entering variable: most negative reduced
// cost, ties by variable index; after kBlandAfter pivots, first negative by
// variable index, which cannot cycle. Leaving variable: ratio test with ties
// by variable index.
class Tableau {
 public:
  Tableau(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
          const std::vector<double>& c)
      : m_(static_cast<int>(b.size())),
        n_(static_cast<int>(c.size())),
        nonbasic_(n_ + 1),
        basic_(m_),
        d_(m_ + 2, std::vector<double>(n_ + 2, 0.0)) {
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < n_; ++j) d_[i][j] = A[i][j];
    for (int i = 0; i < m_; ++i) {
      basic_[i] = n_ + i;
      d_[i][n_] = -1.0;
      d_[i][n_ + 1] = b[i];
    }
    for (int j = 0; j < n_; ++j) {
      nonbasic_[j] = j;
      d_[m_][j] = -c[j];
    }
    nonbasic_[n_] = -1;
    d_[m_ + 1][n_] = 1.0;
  }

  StandardLpResult solve() {
    StandardLpResult res;
    int r = 0;
    for (int i = 1; i < m_; ++i)
      if (d_[i][n_ + 1] < d_[r][n_ + 1]) r = i;
    if (m_ > 0 && d_[r][n_ + 1] < -kEps) {
      pivot(r, n_);
      if (!run_phase(2) || d_[m_ + 1][n_ + 1] < -kEps) {
        res.status = failed_ ? StandardLpResult::Status::Error
                             : StandardLpResult::Status::Infeasible;
        return res;
      }
      for (int i = 0; i < m_; ++i) {
        if (basic_[i] != -1) continue;
        int s = 0;
        for (int j = 1; j <= n_; ++j)
          if (prefer(d_[i][j], nonbasic_[j], d_[i][s], nonbasic_[s])) s = j;
        pivot(i, s);
      }
    }
    bool bounded = run_phase(1);
    if (failed_) {
      res.status = StandardLpResult::Status::Error;
      return res;
    }
    if (!bounded) {
      res.status = StandardLpResult::Status::Unbounded;
      return res;
    }
    res.status = StandardLpResult::Status::Optimal;
    res.z.assign(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < m_; ++i)
      if (basic_[i] < n_) res.z[basic_[i]] = d_[i][n_ + 1];
    res.value = d_[m_][n_ + 1];
    return res;
  }

 private:
  static bool prefer(double va, int ia, double vb, int ib) {
    return va < vb || (va == vb && ia < ib);
  }

  void pivot(int r, int s) {
    ++pivots_;
    double inv = 1.0 / d_[r][s];
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r || std::abs(d_[i][s]) <= kEps) continue;
      double factor = d_[i][s] * inv;
      for (int j = 0; j < n_ + 2; ++j) d_[i][j] -= d_[r][j] * factor;
      d_[i][s] = d_[r][s] * factor;
    }
    for (int j = 0; j < n_ + 2; ++j)
      if (j != s) d_[r][j] *= inv;
    for (int i = 0; i < m_ + 2; ++i)
      if (i != r) d_[i][s] *= -inv;
    d_[r][s] = inv;
    std::swap(basic_[r], nonbasic_[s]);
  }

  bool run_phase(int phase) {
    int x = m_ + phase - 1;
    for (;;) {
      if (pivots_ > kPivotCap) {
        failed_ = true;
        return false;
      }
      int s = -1;
      if (pivots_ > kBlandAfter) {
        int best_var = std::numeric_limits<int>::max();
        for (int j = 0; j <= n_; ++j) {
          if (nonbasic_[j] == -phase || d_[x][j] >= -kEps) continue;
          if (nonbasic_[j] < best_var) {
            best_var = nonbasic_[j];
            s = j;
          }
        }
        if (s == -1) return true;
      } else {
        for (int j = 0; j <= n_; ++j) {
          if (nonbasic_[j] == -phase) continue;
          if (s == -1 || prefer(d_[x][j], nonbasic_[j], d_[x][s], nonbasic_[s])) s = j;
        }
        if (d_[x][s] >= -kEps) return true;
      }
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (d_[i][s] <= kEps) continue;
        if (r == -1) {
          r = i;
          continue;
        }
        double lhs = d_[i][n_ + 1] * d_[r][s];
        double rhs = d_[r][n_ + 1] * d_[i][s];
        if (lhs < rhs || (lhs == rhs && basic_[i] < basic_[r])) r = i;
      }
      if (r == -1) return false;  // unbounded in this direction
      pivot(r, s);
    }
  }

  int m_;
  int n_;
  std::vector<int> nonbasic_;
  std::vector<int> basic_;
  std::vector<std::vector<double>> d_;
  int pivots_ = 0;
  bool failed_ = false;
};

}  // namespace

StandardLpResult solve_standard_lp(const std::vector<std::vector<double>>& A,
                                   const std::vector<double>& b,
                                   const std::vector<double>& c) {
  for (const auto& row : A)
    for (double v : row)
      if (!std::isfinite(v)) throw SolverError("non-finite LP coefficient");
  for (double v : b)
    if (!std::isfinite(v)) throw SolverError("non-finite LP bound");
  for (double v : c)
    if (!std::isfinite(v)) throw SolverError("non-finite LP objective");
  return Tableau(A, b, c).solve();
}

LpSolution solve_simplex_lp(const SimplexLp& lp) {
  int d = static_cast<int>(lp.support.size());
  if (d == 0) throw SolverError("empty support");
  if (static_cast<int>(lp.objective.size()) != d)
    throw SolverError("objective length does not match support");
  if (lp.rows.size() != lp.rhs.size())
    throw SolverError("row/rhs count mismatch");
  for (const auto& row : lp.rows)
    if (static_cast<int>(row.size()) != d)
      throw SolverError("constraint row length does not match support");

  std::vector<std::vector<double>> A;
  std::vector<double> b;
  A.reserve(lp.rows.size() + 2);
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) row[j] = -lp.rows[i][j];
    A.push_back(std::move(row));
    b.push_back(-lp.rhs[i]);
  }
  A.emplace_back(static_cast<std::size_t>(d), 1.0);
  b.push_back(1.0);
  A.emplace_back(static_cast<std::size_t>(d), -1.0);
  b.push_back(-1.0);

  StandardLpResult res = solve_standard_lp(A, b, lp.objective);
  LpSolution sol;
  if (res.status == StandardLpResult::Status::Infeasible) {
    sol.status = LpSolution::Status::Infeasible;
    return sol;
  }
  if (res.status != StandardLpResult::Status::Optimal)
    throw SolverError("LP backend failed on a simplex-domain problem");

  double sum = 0.0;
  for (auto& v : res.z) {
    if (v < 0.0) {
      if (v < -1e-7) throw SolverError("simplex solution left the domain");
      v = 0.0;
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw SolverError("simplex solution mass drifted from 1");
  for (auto& v : res.z) v /= sum;

  double value = 0.0;
  for (int j = 0; j < d; ++j) value += lp.objective[j] * res.z[j];
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    double lhs = 0.0;
    for (int j = 0; j < d; ++j) lhs += lp.rows[i][j] * res.z[j];
    if (lhs < lp.rhs[i] - 1e-7)
      throw SolverError("optimal vertex violates a constraint beyond tolerance");
  }

  sol.status = LpSolution::Status::Optimal;
  sol.value = value;
  sol.x.probs = Eigen::VectorXd::Zero(lp.num_actions);
  for (int j = 0; j < d; ++j) sol.x.probs[lp.support[j]] = res.z[j];
  return sol;
}

}  // namespace dsg
