#pragma once

// Small dense linear programs with free variables:
//
//   minimize c.x  subject to  A_eq x = b_eq,  A_in x <= b_in.
//
// Solved through the dual standard-form problem by a revised simplex
// method; the primal solution is read off the simplex multipliers.

#include <Eigen/Dense>
#include <string>

namespace packlp::lp {

struct LinearProgram {
  Eigen::VectorXd c;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
  Eigen::MatrixXd A_in;
  Eigen::VectorXd b_in;

  Eigen::Index variables() const { return c.size(); }
};

enum class Status { Optimal, Infeasible, Unbounded, Stalled };
const char* to_string(Status s);

struct Options {
  int max_iterations = 100000;
  double feasibility_tol = 1e-9;
  double pivot_tol = 1e-11;
  /// Iterations without objective progress before switching to Bland's rule.
  int stall_window = 50;
};

struct Solution {
  Status status = Status::Stalled;
  Eigen::VectorXd x;
  double objective = 0.0;
  Eigen::VectorXd duals_eq;  ///< multipliers of the equality rows
  Eigen::VectorXd duals_in;  ///< nonnegative multipliers of the inequality rows
  int iterations = 0;
  /// Largest constraint violation, each row scaled by (1 + max|row|).
  double residual = 0.0;
  std::string message;
};

Solution solve(const LinearProgram& lp, const Options& opt = {});

/// Scaled-norm violation of x against the constraints.
double max_violation(const LinearProgram& lp, const Eigen::VectorXd& x);

}  // namespace packlp::lp
