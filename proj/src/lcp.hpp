#pragma once

#include <iosfwd>

#include <Eigen/Core>

namespace msg {

/// Find z >= 0 with w = M z + b >= 0 and z . w = 0.
struct LcpProblem {
  Eigen::MatrixXd M;
  Eigen::VectorXd b;
};

enum class LcpStatus {
  solved,
  ray_termination,
  iteration_limit,
};

const char* to_string(LcpStatus status);

struct LcpOptions {
  double tolerance = 1e-9;  // accepted residual on the returned solution
  int max_pivots = 0;       // 0 picks 100*n + 1000
  std::ostream* pivot_trace = nullptr;  // one line per pivot when set
};

struct LcpSolution {
  Eigen::VectorXd z;
  LcpStatus status = LcpStatus::ray_termination;
  int pivots = 0;
  double complementarity_residual = 0.0;  // max_i |z_i * (Mz+b)_i|
};

/// Lemke's complementary pivoting with an all-ones covering vector and the
/// lexicographic minimum-ratio rule. Deterministic: identical problems give
/// identical pivot sequences. On success the final basis is re-solved against
/// the original data to polish roundoff out of z.
LcpSolution lemke_solve(const LcpProblem& problem, const LcpOptions& options = {});

struct LcpResidualReport {
  double min_z = 0.0;              // most negative z entry (0 if none)
  double min_w = 0.0;              // most negative slack entry (0 if none)
  double complementarity = 0.0;    // max_i |z_i * w_i|
  int worst_feasibility_row = -1;  // row of min_w, -1 if feasible
};

/// Pure residual check of a candidate solution.
LcpResidualReport verify_lcp(const LcpProblem& problem, const Eigen::VectorXd& z);

}  // namespace msg
