#include "packlp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "packlp/error.hpp"

namespace packlp::lp {

const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::Stalled: return "stalled";
  }
  return "?";
}

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// minimize cost.z  s.t.  M z = rhs, z >= 0 (artificial columns appended
// internally). Returns the final basis, or the failure status.
struct StandardForm {
  MatrixXd M;
  VectorXd rhs;
  VectorXd cost;
};

struct SimplexResult {
  Status status = Status::Stalled;
  std::vector<Index> basis;  // column ids; ids >= K denote artificials
  VectorXd zB;
  VectorXd pi;
  double objective = 0.0;
  int iterations = 0;
  bool phase_one_failed = false;
};

class RevisedSimplex {
 public:
  RevisedSimplex(const StandardForm& sf, const Options& opt) : sf_(sf), opt_(opt) {
    rows_ = sf.M.rows();
    cols_ = sf.M.cols();
    sign_ = VectorXd::Ones(rows_);
    for (Index i = 0; i < rows_; ++i)
      if (sf.rhs[i] < 0) sign_[i] = -1.0;
  }

  SimplexResult run() {
    SimplexResult res;
    basis_.resize(rows_);
    for (Index i = 0; i < rows_; ++i) basis_[i] = cols_ + i;

    // Phase one: minimize the sum of artificials.
    VectorXd c1 = VectorXd::Zero(cols_ + rows_);
    c1.tail(rows_).setOnes();
    Status s = iterate(c1, false, res.iterations);
    if (s == Status::Stalled) {
      res.status = s;
      return res;
    }
    factor();
    VectorXd zB = solve_basis(rhs());
    double infeas = 0.0;
    for (Index i = 0; i < rows_; ++i)
      if (basis_[i] >= cols_) infeas += std::abs(zB[i]);
    if (infeas > opt_.feasibility_tol * (1.0 + rhs().cwiseAbs().maxCoeff())) {
      res.status = Status::Infeasible;
      res.phase_one_failed = true;
      return res;
    }
    drive_out_artificials();

    VectorXd c2 = VectorXd::Zero(cols_ + rows_);
    c2.head(cols_) = sf_.cost;
    s = iterate(c2, true, res.iterations);
    res.status = s;
    if (s != Status::Optimal) return res;
    factor();
    res.basis = basis_;
    res.zB = solve_basis(rhs());
    VectorXd cB(rows_);
    for (Index i = 0; i < rows_; ++i) cB[i] = c2[basis_[i]];
    // Multipliers of the sign-adjusted rows, mapped back to the original rows.
    res.pi = lu_t_.solve(cB).cwiseProduct(sign_);
    res.objective = cB.dot(res.zB);
    return res;
  }

 private:
  VectorXd rhs() const { return sf_.rhs.cwiseProduct(sign_); }

  // Column j of the sign-adjusted constraint matrix (artificials are unit).
  VectorXd column(Index j) const {
    if (j < cols_) return sf_.M.col(j).cwiseProduct(sign_);
    VectorXd e = VectorXd::Zero(rows_);
    e[j - cols_] = 1.0;
    return e;
  }

  void factor() {
    MatrixXd B(rows_, rows_);
    for (Index i = 0; i < rows_; ++i) B.col(i) = column(basis_[i]);
    lu_ = B.partialPivLu();
    lu_t_.compute(B.transpose());
  }

  VectorXd solve_basis(const VectorXd& v) const { return lu_.solve(v); }

  void drive_out_artificials() {
    factor();
    for (Index r = 0; r < rows_; ++r) {
      if (basis_[r] < cols_) continue;
      VectorXd er = VectorXd::Zero(rows_);
      er[r] = 1.0;
      const VectorXd row = lu_t_.solve(er);  // row r of B^{-1}
      const VectorXd alpha = (sf_.M.transpose() * row.cwiseProduct(sign_));
      Index best = -1;
      double best_abs = opt_.pivot_tol * 100;
      for (Index j = 0; j < cols_; ++j) {
        if (std::find(basis_.begin(), basis_.end(), j) != basis_.end()) continue;
        if (std::abs(alpha[j]) > best_abs) {
          best_abs = std::abs(alpha[j]);
          best = j;
        }
      }
      if (best >= 0) {
        basis_[r] = best;
        factor();
      }
    }
  }

  Status iterate(const VectorXd& cost, bool phase_two, int& iterations) {
    bool bland = false;
    double last_obj = std::numeric_limits<double>::infinity();
    int since_progress = 0;
    std::vector<char> in_basis(cols_ + rows_, 0);
    for (;;) {
      if (iterations >= opt_.max_iterations) return Status::Stalled;
      factor();
      std::fill(in_basis.begin(), in_basis.end(), 0);
      for (Index b : basis_) in_basis[b] = 1;
      VectorXd zB = solve_basis(rhs());
      VectorXd cB(rows_);
      for (Index i = 0; i < rows_; ++i) cB[i] = cost[basis_[i]];
      const double obj = cB.dot(zB);
      if (obj < last_obj - 1e-14 * (1.0 + std::abs(obj))) {
        last_obj = obj;
        since_progress = 0;
      } else if (++since_progress > opt_.stall_window) {
        bland = true;
      }
      const VectorXd pi = lu_t_.solve(cB);
      // Reduced costs of structural columns; artificials never re-enter.
      const VectorXd reduced = cost.head(cols_) - sf_.M.transpose() * pi.cwiseProduct(sign_);
      Index enter = -1;
      double best = 0.0;
      for (Index j = 0; j < cols_; ++j) {
        if (in_basis[j]) continue;
        if (reduced[j] < -opt_.pivot_tol * (1.0 + std::abs(cost[j])) && reduced[j] < best) {
          enter = j;
          if (bland) break;
          best = reduced[j];
        }
      }
      if (enter < 0) return Status::Optimal;

      const VectorXd w = solve_basis(column(enter));
      Index leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      double pivot = 0.0;
      for (Index i = 0; i < rows_; ++i) {
        const bool art = basis_[i] >= cols_;
        if (phase_two && art && std::abs(w[i]) > opt_.pivot_tol) {
          // a redundant-row artificial must stay at zero
          if (leave < 0 || ratio > 0.0 || std::abs(w[i]) > pivot) {
            ratio = 0.0;
            leave = i;
            pivot = std::abs(w[i]);
          }
          continue;
        }
        if (w[i] <= opt_.pivot_tol) continue;
        const double q = std::max(zB[i], 0.0) / w[i];
        const bool tie = leave >= 0 && std::abs(q - ratio) <= 1e-12 * (1.0 + std::abs(ratio));
        if (q < ratio && !tie) {
          ratio = q;
          leave = i;
          pivot = w[i];
        } else if (tie && leave >= 0) {
          if (bland ? basis_[i] < basis_[leave] : w[i] > pivot) {
            leave = i;
            pivot = w[i];
            ratio = std::min(ratio, q);
          }
        }
      }
      if (leave < 0) return Status::Unbounded;
      basis_[leave] = enter;
      ++iterations;
    }
  }

  const StandardForm& sf_;
  Options opt_;
  Index rows_ = 0, cols_ = 0;
  VectorXd sign_;
  std::vector<Index> basis_;
  Eigen::PartialPivLU<MatrixXd> lu_, lu_t_;
};

struct Scaled {
  LinearProgram lp;
  VectorXd var_scale;  // x = var_scale .* x'
  VectorXd eq_scale, in_scale;
};

Scaled scale(const LinearProgram& in) {
  Scaled s;
  s.lp = in;
  const Index n = in.variables();
  s.var_scale = VectorXd::Ones(n);
  for (Index k = 0; k < n; ++k) {
    double m = 0.0;
    if (in.A_eq.rows()) m = std::max(m, in.A_eq.col(k).cwiseAbs().maxCoeff());
    if (in.A_in.rows()) m = std::max(m, in.A_in.col(k).cwiseAbs().maxCoeff());
    if (m > 0.0) s.var_scale[k] = 1.0 / m;
  }
  s.lp.c = in.c.cwiseProduct(s.var_scale);
  s.lp.A_eq = in.A_eq * s.var_scale.asDiagonal();
  s.lp.A_in = in.A_in * s.var_scale.asDiagonal();
  auto rows = [](MatrixXd& A, VectorXd& b, VectorXd& sc) {
    sc = VectorXd::Ones(A.rows());
    for (Index i = 0; i < A.rows(); ++i) {
      const double m = A.row(i).cwiseAbs().maxCoeff();
      if (m > 0.0) {
        sc[i] = 1.0 / m;
        A.row(i) *= sc[i];
        b[i] *= sc[i];
      }
    }
  };
  rows(s.lp.A_eq, s.lp.b_eq, s.eq_scale);
  rows(s.lp.A_in, s.lp.b_in, s.in_scale);
  return s;
}

// Dual in standard form: variables (y+, y-, mu) >= 0,
//   A_eq^T (y+ - y-) - A_in^T mu = c,  minimize -b_eq.(y+ - y-) + b_in.mu.
StandardForm dual_form(const LinearProgram& lp) {
  const Index n = lp.variables(), me = lp.A_eq.rows(), mi = lp.A_in.rows();
  StandardForm sf;
  sf.M.resize(n, 2 * me + mi);
  sf.cost.resize(2 * me + mi);
  if (me) {
    sf.M.leftCols(me) = lp.A_eq.transpose();
    sf.M.middleCols(me, me) = -lp.A_eq.transpose();
    sf.cost.head(me) = -lp.b_eq;
    sf.cost.segment(me, me) = lp.b_eq;
  }
  if (mi) {
    sf.M.rightCols(mi) = -lp.A_in.transpose();
    sf.cost.tail(mi) = lp.b_in;
  }
  sf.rhs = lp.c;
  return sf;
}

void validate(const LinearProgram& lp) {
  const Index n = lp.variables();
  if (n == 0) throw Error(ErrorKind::InvalidInput, "LP without variables");
  if (lp.A_eq.rows() && lp.A_eq.cols() != n) throw Error(ErrorKind::InvalidInput, "A_eq has wrong width");
  if (lp.A_in.rows() && lp.A_in.cols() != n) throw Error(ErrorKind::InvalidInput, "A_in has wrong width");
  if (lp.A_eq.rows() != lp.b_eq.size() || lp.A_in.rows() != lp.b_in.size())
    throw Error(ErrorKind::InvalidInput, "row count mismatch");
  auto finite = [](const auto& m) { return m.size() == 0 || m.allFinite(); };
  if (!finite(lp.c) || !finite(lp.A_eq) || !finite(lp.b_eq) || !finite(lp.A_in) || !finite(lp.b_in))
    throw Error(ErrorKind::InvalidInput, "LP data must be finite");
}

}  // namespace

double max_violation(const LinearProgram& lp, const VectorXd& x) {
  double worst = 0.0;
  for (Index i = 0; i < lp.A_eq.rows(); ++i) {
    const double s = 1.0 + lp.A_eq.row(i).cwiseAbs().maxCoeff() * (1.0 + x.cwiseAbs().maxCoeff());
    worst = std::max(worst, std::abs(lp.A_eq.row(i).dot(x) - lp.b_eq[i]) / s);
  }
  for (Index i = 0; i < lp.A_in.rows(); ++i) {
    const double s = 1.0 + lp.A_in.row(i).cwiseAbs().maxCoeff() * (1.0 + x.cwiseAbs().maxCoeff());
    worst = std::max(worst, (lp.A_in.row(i).dot(x) - lp.b_in[i]) / s);
  }
  return worst;
}

Solution solve(const LinearProgram& lp, const Options& opt) {
  validate(lp);
  const Scaled sc = scale(lp);
  const StandardForm sf = dual_form(sc.lp);
  RevisedSimplex simplex(sf, opt);
  const SimplexResult r = simplex.run();

  Solution sol;
  sol.iterations = r.iterations;
  if (r.status == Status::Stalled) {
    sol.status = Status::Stalled;
    sol.message = "iteration limit reached";
    return sol;
  }
  if (r.status == Status::Unbounded) {
    sol.status = Status::Infeasible;
    sol.message = "dual unbounded";
    return sol;
  }
  if (r.status == Status::Infeasible) {
    // Dual infeasible: the primal is unbounded or infeasible. Decide with a
    // zero objective, whose dual is always feasible.
    LinearProgram zero = lp;
    zero.c.setZero();
    const Solution z = solve(zero, opt);
    sol.status = z.status == Status::Optimal ? Status::Unbounded : Status::Infeasible;
    sol.message = "dual infeasible";
    return sol;
  }

  const Index me = sc.lp.A_eq.rows(), mi = sc.lp.A_in.rows();
  sol.x = (-r.pi).cwiseProduct(sc.var_scale);
  sol.objective = lp.c.dot(sol.x);
  VectorXd z = VectorXd::Zero(sf.M.cols());
  for (std::size_t i = 0; i < r.basis.size(); ++i)
    if (r.basis[i] < sf.M.cols()) z[r.basis[i]] = r.zB[static_cast<Index>(i)];
  sol.duals_eq = VectorXd::Zero(me);
  sol.duals_in = VectorXd::Zero(mi);
  for (Index i = 0; i < me; ++i) sol.duals_eq[i] = (z[i] - z[me + i]) * sc.eq_scale[i];
  for (Index i = 0; i < mi; ++i) sol.duals_in[i] = z[2 * me + i] * sc.in_scale[i];
  sol.residual = max_violation(lp, sol.x);
  if (sol.residual > opt.feasibility_tol) {
    sol.status = Status::Stalled;
    sol.message = "residual above tolerance";
  } else {
    sol.status = Status::Optimal;
  }
  return sol;
}

}  // namespace packlp::lp
