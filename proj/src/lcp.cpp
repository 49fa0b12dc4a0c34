#include "lcp.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef NDEBUG
#include <set>
#endif

#include <Eigen/Dense>

namespace msg {

const char* to_string(LcpStatus status) {
  switch (status) {
    case LcpStatus::solved: return "solved";
    case LcpStatus::ray_termination: return "ray_termination";
    case LcpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

LcpResidualReport verify_lcp(const LcpProblem& problem, const Eigen::VectorXd& z) {
  if (problem.M.rows() != problem.M.cols() || problem.M.rows() != problem.b.size() ||
      z.size() != problem.b.size()) {
    throw std::invalid_argument("LCP dimensions disagree");
  }
  LcpResidualReport report;
  const Eigen::VectorXd w = problem.M * z + problem.b;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    report.min_z = std::min(report.min_z, z(i));
    if (w(i) < report.min_w) {
      report.min_w = w(i);
      report.worst_feasibility_row = static_cast<int>(i);
    }
    report.complementarity = std::max(report.complementarity, std::abs(z(i) * w(i)));
  }
  return report;
}

namespace {

// Variable ids: [0, n) the slacks w_i, [n, 2n) the z_i, 2n the auxiliary.
std::string var_name(int id, int n) {
  if (id == 2 * n) return "z0";
  if (id < n) return "w" + std::to_string(id + 1);
  return "z" + std::to_string(id - n + 1);
}

class LemkeTableau {
 public:
  LemkeTableau(const LcpProblem& problem, double scale)
      : n_(static_cast<int>(problem.b.size())),
        rhs_col_(2 * n_ + 1),
        zero_tol_(1e-12 * std::max(1.0, scale)),
        t_(n_, 2 * n_ + 2),
        basis_(n_) {
    t_.block(0, 0, n_, n_).setIdentity();
    t_.block(0, n_, n_, n_) = -problem.M;
    t_.col(2 * n_).setConstant(-1.0);
    t_.col(rhs_col_) = problem.b;
    for (int i = 0; i < n_; ++i) basis_[i] = i;
  }

  int n() const { return n_; }
  int basis(int row) const { return basis_[row]; }
  double rhs(int row) const { return t_(row, rhs_col_); }

  // Lexicographic comparison of rows r and i scaled by the entering column:
  // returns true when row i is strictly smaller. Both column entries must be
  // positive (guaranteed by the caller for the ratio test).
  bool lex_less(int i, int r, int col) const {
    const double ti = t_(i, col);
    const double tr = t_(r, col);
    const double tol = zero_tol_ * std::max(1.0, std::abs(ti * tr));
    double d = t_(i, rhs_col_) * tr - t_(r, rhs_col_) * ti;
    if (d < -tol) return true;
    if (d > tol) return false;
    for (int c = 0; c < n_; ++c) {
      d = t_(i, c) * tr - t_(r, c) * ti;
      if (d < -tol) return true;
      if (d > tol) return false;
    }
    return false;
  }

  // Row that must leave when the auxiliary variable enters: the most negative
  // rhs, ties resolved lexicographically (the auxiliary column is constant).
  int initial_leaving_row() const {
    int r = -1;
    for (int i = 0; i < n_; ++i) {
      if (t_(i, rhs_col_) >= -zero_tol_) continue;
      if (r < 0) {
        r = i;
        continue;
      }
      const double d = t_(i, rhs_col_) - t_(r, rhs_col_);
      if (d < -zero_tol_) {
        r = i;
      } else if (d <= zero_tol_ && !lex_identity_less(r, i)) {
        r = i;
      }
    }
    return r;
  }

  // Minimum-ratio row for an entering column, lexicographic tie-breaking,
  // preferring the auxiliary variable's row when it ties so the run can end.
  int ratio_leaving_row(int col) const {
    int best = -1;
    for (int i = 0; i < n_; ++i) {
      if (t_(i, col) <= zero_tol_) continue;
      if (best < 0 || lex_less(i, best, col)) best = i;
    }
    if (best < 0) return -1;
    for (int i = 0; i < n_; ++i) {
      if (basis_[i] != 2 * n_ || t_(i, col) <= zero_tol_) continue;
      const double best_ratio = t_(best, rhs_col_) / t_(best, col);
      const double aux_ratio = t_(i, rhs_col_) / t_(i, col);
      if (aux_ratio <= best_ratio + zero_tol_ * std::max(1.0, std::abs(best_ratio))) {
        return i;
      }
    }
    return best;
  }

  // Gauss-Jordan step; returns the variable that left the basis.
  int pivot(int row, int col_var) {
    const int col = column_of(col_var);
    const double p = t_(row, col);
    t_.row(row) /= p;
    for (int i = 0; i < n_; ++i) {
      if (i == row) continue;
      const double factor = t_(i, col);
      if (factor != 0.0) t_.row(i) -= factor * t_.row(row);
    }
    // Roundoff guard: the lexicographic rule keeps the rhs nonnegative in
    // exact arithmetic.
    for (int i = 0; i < n_; ++i) {
      if (t_(i, rhs_col_) < 0.0 && t_(i, rhs_col_) > -zero_tol_) {
        t_(i, rhs_col_) = 0.0;
      }
    }
    const int left = basis_[row];
    basis_[row] = col_var;
    return left;
  }

  Eigen::VectorXd solution() const {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < n_; ++i) {
      if (basis_[i] >= n_ && basis_[i] < 2 * n_) {
        z(basis_[i] - n_) = std::max(0.0, t_(i, rhs_col_));
      }
    }
    return z;
  }

 private:
  int column_of(int var) const { return var; }  // ids coincide with columns

  // Compares identity-block rows without scaling (used before any pivot).
  bool lex_identity_less(int i, int j) const {
    for (int c = 0; c < n_; ++c) {
      const double d = t_(i, c) - t_(j, c);
      if (d < -zero_tol_) return true;
      if (d > zero_tol_) return false;
    }
    return false;
  }

  int n_;
  int rhs_col_;
  double zero_tol_;
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
};

// Re-solves the final basis against the original data to strip accumulated
// tableau roundoff; returns an empty vector when the basis is singular.
Eigen::VectorXd polish_basis(const LcpProblem& problem, const LemkeTableau& tab) {
  const int n = tab.n();
  Eigen::MatrixXd basis_cols(n, n);
  for (int i = 0; i < n; ++i) {
    const int var = tab.basis(i);
    if (var < n) {
      basis_cols.col(i) = Eigen::VectorXd::Unit(n, var);
    } else {
      basis_cols.col(i) = -problem.M.col(var - n);
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_cols);
  if (!lu.isInvertible()) return {};
  const Eigen::VectorXd coeffs = lu.solve(problem.b);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    const int var = tab.basis(i);
    if (var >= n && var < 2 * n) z(var - n) = coeffs(i);
  }
  return z;
}

double worst_violation(const LcpResidualReport& r) {
  return std::max({-r.min_z, -r.min_w, r.complementarity});
}

}  // namespace

LcpSolution lemke_solve(const LcpProblem& problem, const LcpOptions& options) {
  if (problem.M.rows() != problem.M.cols() || problem.M.rows() != problem.b.size()) {
    throw std::invalid_argument("LCP dimensions disagree");
  }
  if (!problem.M.allFinite() || !problem.b.allFinite()) {
    throw std::invalid_argument("LCP data must be finite");
  }
  if (!(options.tolerance > 0.0)) {
    throw std::invalid_argument("tolerance must be positive");
  }

  const int n = static_cast<int>(problem.b.size());
  LcpSolution result;
  result.z = Eigen::VectorXd::Zero(n);
  if (n == 0) {
    result.status = LcpStatus::solved;
    return result;
  }
  const double scale =
      std::max(problem.M.cwiseAbs().maxCoeff(), problem.b.cwiseAbs().maxCoeff());
  // Entry threshold matches the tableau's zero tolerance, so the first
  // leaving row always exists once the phase starts.
  if (problem.b.minCoeff() >= -1e-12 * std::max(1.0, scale)) {
    result.status = LcpStatus::solved;  // zero is feasible and complementary
    return result;
  }
  LemkeTableau tab(problem, scale);
  const int max_pivots =
      options.max_pivots > 0 ? options.max_pivots : 100 * n + 1000;
  const int aux = 2 * n;

#ifndef NDEBUG
  std::set<std::vector<int>> seen_bases;
#endif

  int row = tab.initial_leaving_row();
  assert(row >= 0);
  int entering = aux;
  while (true) {
    const int left = tab.pivot(row, entering);
    ++result.pivots;
    if (options.pivot_trace != nullptr) {
      *options.pivot_trace << "pivot " << result.pivots << ": enter "
                           << var_name(entering, n) << " leave "
                           << var_name(left, n) << " ratio " << tab.rhs(row)
                           << '\n';
    }
#ifndef NDEBUG
    {
      std::vector<int> key(n);
      for (int i = 0; i < n; ++i) key[i] = tab.basis(i);
      std::sort(key.begin(), key.end());
      assert(seen_bases.insert(key).second && "basis repeated within a run");
    }
#endif
    if (left == aux) {
      result.status = LcpStatus::solved;
      break;
    }
    if (result.pivots >= max_pivots) {
      result.status = LcpStatus::iteration_limit;
      break;
    }
    entering = left < n ? left + n : left - n;  // complement of the leaver
    row = tab.ratio_leaving_row(entering);
    if (row < 0) {
      result.status = LcpStatus::ray_termination;
      break;
    }
  }

  result.z = tab.solution();
  if (result.status == LcpStatus::solved) {
    const Eigen::VectorXd polished = polish_basis(problem, tab);
    if (polished.size() == n &&
        worst_violation(verify_lcp(problem, polished)) <
            worst_violation(verify_lcp(problem, result.z))) {
      result.z = polished;
    }
    for (Eigen::Index i = 0; i < result.z.size(); ++i) {
      if (result.z(i) < 0.0 && result.z(i) >= -options.tolerance) {
        result.z(i) = 0.0;
      }
    }
  }
  result.complementarity_residual = verify_lcp(problem, result.z).complementarity;
  return result;
}

}  // namespace msg
