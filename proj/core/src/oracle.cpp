#include "gopt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gopt {

namespace {

constexpr double kPivotEps = 1e-9;
constexpr double kFeasEps = 1e-7;

// Two-phase tableau simplex, Bland's rule throughout: the entering column is
// the lowest-index negative reduced cost, the leaving row the lowest-index
// basic variable among minimal ratios. Slow and cycle-proof, which is exactly
// what an oracle wants.
class Tableau {
 public:
  explicit Tableau(const DenseLp& lp)
      : num_structural_(lp.num_vars()),
        num_eq_(lp.eq_lhs.rows()),
        num_ineq_(lp.ineq_lhs.rows()) {
    const int rows = num_eq_ + num_ineq_;
    num_slacks_ = num_ineq_;
    first_artificial_ = num_structural_ + num_slacks_;
    cols_ = first_artificial_ + rows + 1;  // + rhs
    rhs_col_ = cols_ - 1;

    t_ = Matrix(rows, cols_, 0.0);
    basis_.resize(rows);
    for (int r = 0; r < rows; ++r) {
      const bool is_eq = r < num_eq_;
      const int src = is_eq ? r : r - num_eq_;
      double rhs = is_eq ? lp.eq_rhs[src] : lp.ineq_rhs[src];
      double sign = rhs < 0.0 ? -1.0 : 1.0;
      for (int j = 0; j < num_structural_; ++j)
        t_(r, j) = sign * (is_eq ? lp.eq_lhs(src, j) : lp.ineq_lhs(src, j));
      if (!is_eq) t_(r, num_structural_ + src) = sign;  // slack
      t_(r, first_artificial_ + r) = 1.0;
      t_(r, rhs_col_) = sign * rhs;
      basis_[r] = first_artificial_ + r;
    }
    obj_.assign(cols_, 0.0);
  }

  LpSolution solve(const DenseLp& lp) {
    const int rows = t_.rows();

    // Phase 1: minimize the sum of artificials.
    for (int j = 0; j < first_artificial_; ++j) {
      double s = 0.0;
      for (int r = 0; r < rows; ++r) s += t_(r, j);
      obj_[j] = -s;
    }
    obj_[rhs_col_] = 0.0;
    for (int r = 0; r < rows; ++r) obj_[rhs_col_] -= t_(r, rhs_col_);
    for (int r = 0; r < rows; ++r) obj_[first_artificial_ + r] = 0.0;

    LpSolution out;
    if (!iterate()) {
      out.status = LpStatus::Unbounded;  // cannot happen in phase 1
      return out;
    }
    if (-obj_[rhs_col_] > kFeasEps) {
      out.status = LpStatus::Infeasible;
      return out;
    }

    // Drive remaining artificials out of the basis where possible; rows that
    // resist are redundant constraints and keep a zero artificial pinned.
    for (int r = 0; r < rows; ++r) {
      if (basis_[r] < first_artificial_) continue;
      for (int j = 0; j < first_artificial_; ++j) {
        if (std::abs(t_(r, j)) > kPivotEps) {
          pivot(r, j);
          break;
        }
      }
    }

    // Phase 2 objective.
    std::fill(obj_.begin(), obj_.end(), 0.0);
    for (int j = 0; j < num_structural_; ++j) obj_[j] = lp.objective[j];
    for (int r = 0; r < rows; ++r) {
      const double factor = obj_[basis_[r]];
      if (factor != 0.0)
        for (int j = 0; j < cols_; ++j) obj_[j] -= factor * t_(r, j);
    }

    if (!iterate()) {
      out.status = LpStatus::Unbounded;
      return out;
    }

    out.status = LpStatus::Optimal;
    out.x.assign(num_structural_, 0.0);
    for (int r = 0; r < rows; ++r)
      if (basis_[r] < num_structural_) out.x[basis_[r]] = t_(r, rhs_col_);
    out.value = -obj_[rhs_col_] + lp.objective_constant;
    return out;
  }

 private:
  // Returns false on unboundedness.
  bool iterate() {
    const int rows = t_.rows();
    for (;;) {
      int entering = -1;
      for (int j = 0; j < first_artificial_; ++j) {
        if (obj_[j] < -kPivotEps) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return true;

      int leaving = -1;
      double best_ratio = 0.0;
      for (int r = 0; r < rows; ++r) {
        const double a = t_(r, entering);
        if (a <= kPivotEps) continue;
        const double ratio = t_(r, rhs_col_) / a;
        if (leaving < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[leaving])) {
          leaving = r;
          best_ratio = ratio;
        }
      }
      if (leaving < 0) return false;
      pivot(leaving, entering);
    }
  }

  void pivot(int row, int col) {
    const int rows = t_.rows();
    const double inv = 1.0 / t_(row, col);
    for (int j = 0; j < cols_; ++j) t_(row, j) *= inv;
    t_(row, col) = 1.0;
    for (int r = 0; r < rows; ++r) {
      if (r == row) continue;
      const double factor = t_(r, col);
      if (factor == 0.0) continue;
      for (int j = 0; j < cols_; ++j) t_(r, j) -= factor * t_(row, j);
      t_(r, col) = 0.0;
    }
    const double ofactor = obj_[col];
    if (ofactor != 0.0) {
      for (int j = 0; j < cols_; ++j) obj_[j] -= ofactor * t_(row, j);
      obj_[col] = 0.0;
    }
    basis_[row] = col;
  }

  int num_structural_, num_eq_, num_ineq_, num_slacks_;
  int first_artificial_, cols_, rhs_col_;
  Matrix t_;
  std::vector<double> obj_;
  std::vector<int> basis_;
};

void check_lp(const DenseLp& lp) {
  const int k = lp.num_vars();
  if (lp.eq_lhs.rows() != static_cast<int>(lp.eq_rhs.size()))
    throw std::invalid_argument("DenseLp: equality rhs length mismatch");
  if (lp.ineq_lhs.rows() != static_cast<int>(lp.ineq_rhs.size()))
    throw std::invalid_argument("DenseLp: inequality rhs length mismatch");
  if ((lp.eq_lhs.rows() > 0 && lp.eq_lhs.cols() != k) ||
      (lp.ineq_lhs.rows() > 0 && lp.ineq_lhs.cols() != k))
    throw std::invalid_argument("DenseLp: constraint width mismatch");
}

}  // namespace

DenseLp lp_from_gopt(const GoptProblem& problem) {
  const int n = problem.n();
  const int m = problem.m();
  const bool tv1 = problem.penalty1 == PenaltyKind::TV;
  const bool tv2 = problem.penalty2 == PenaltyKind::TV;

  const int num_vars = n * m + (tv1 ? 2 * n : 0) + (tv2 ? 2 * m : 0);
  const int s1_plus = n * m;
  const int s1_minus = s1_plus + (tv1 ? n : 0);
  const int s2_plus = tv1 ? s1_minus + n : n * m;
  const int s2_minus = s2_plus + (tv2 ? m : 0);

  DenseLp lp;
  lp.objective.assign(num_vars, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      double coef = problem.cost(i, j);
      if (!tv1) coef -= problem.lambda1[i];
      if (!tv2) coef -= problem.lambda2[j];
      lp.objective[i * m + j] = coef;
    }
  if (tv1)
    for (int i = 0; i < n; ++i) {
      lp.objective[s1_plus + i] = problem.lambda1[i];
      lp.objective[s1_minus + i] = problem.lambda1[i];
    }
  else
    for (int i = 0; i < n; ++i) lp.objective_constant += problem.lambda1[i] * problem.p.weight(i);
  if (tv2)
    for (int j = 0; j < m; ++j) {
      lp.objective[s2_plus + j] = problem.lambda2[j];
      lp.objective[s2_minus + j] = problem.lambda2[j];
    }
  else
    for (int j = 0; j < m; ++j) lp.objective_constant += problem.lambda2[j] * problem.q.weight(j);

  const int num_eq = (tv1 ? n : 0) + (tv2 ? m : 0);
  const int num_ineq = (tv1 ? 0 : n) + (tv2 ? 0 : m);
  lp.eq_lhs = Matrix(num_eq, num_vars, 0.0);
  lp.eq_rhs.assign(num_eq, 0.0);
  lp.ineq_lhs = Matrix(num_ineq, num_vars, 0.0);
  lp.ineq_rhs.assign(num_ineq, 0.0);

  int eq = 0, ineq = 0;
  for (int i = 0; i < n; ++i) {
    if (tv1) {
      // row_i(gamma) + s+ - s- = p_i, so s+ - s- carries p_i - row_i.
      for (int j = 0; j < m; ++j) lp.eq_lhs(eq, i * m + j) = 1.0;
      lp.eq_lhs(eq, s1_plus + i) = 1.0;
      lp.eq_lhs(eq, s1_minus + i) = -1.0;
      lp.eq_rhs[eq] = problem.p.weight(i);
      ++eq;
    } else {
      for (int j = 0; j < m; ++j) lp.ineq_lhs(ineq, i * m + j) = 1.0;
      lp.ineq_rhs[ineq] = problem.p.weight(i);
      ++ineq;
    }
  }
  for (int j = 0; j < m; ++j) {
    if (tv2) {
      for (int i = 0; i < n; ++i) lp.eq_lhs(eq, i * m + j) = 1.0;
      lp.eq_lhs(eq, s2_plus + j) = 1.0;
      lp.eq_lhs(eq, s2_minus + j) = -1.0;
      lp.eq_rhs[eq] = problem.q.weight(j);
      ++eq;
    } else {
      for (int i = 0; i < n; ++i) lp.ineq_lhs(ineq, i * m + j) = 1.0;
      lp.ineq_rhs[ineq] = problem.q.weight(j);
      ++ineq;
    }
  }
  return lp;
}

DenseLp lp_from_mopt(const MoptProblem& problem) {
  const int n = problem.n();
  const int m = problem.m();
  DenseLp lp;
  lp.objective.assign(n * m, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) lp.objective[i * m + j] = problem.cost(i, j);

  lp.eq_lhs = Matrix(1, n * m, 1.0);
  lp.eq_rhs = {problem.eta};

  lp.ineq_lhs = Matrix(n + m, n * m, 0.0);
  lp.ineq_rhs.assign(n + m, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) lp.ineq_lhs(i, i * m + j) = 1.0;
    lp.ineq_rhs[i] = problem.p[i];
  }
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) lp.ineq_lhs(n + j, i * m + j) = 1.0;
    lp.ineq_rhs[n + j] = problem.q[j];
  }
  return lp;
}

DenseLp lp_from_sopt(const CostMatrix& cost, const DiscreteMeasure& p, const DiscreteMeasure& q) {
  if (cost.rows() != p.size() || cost.cols() != q.size())
    throw std::invalid_argument("lp_from_sopt: dimension mismatch");
  const int n = p.size();
  const int m = q.size();
  DenseLp lp;
  lp.objective.assign(n * m, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) lp.objective[i * m + j] = cost(i, j);

  lp.eq_lhs = Matrix(m, n * m, 0.0);
  lp.eq_rhs.assign(m, 0.0);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) lp.eq_lhs(j, i * m + j) = 1.0;
    lp.eq_rhs[j] = q.weight(j);
  }
  lp.ineq_lhs = Matrix(n, n * m, 0.0);
  lp.ineq_rhs.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) lp.ineq_lhs(i, i * m + j) = 1.0;
    lp.ineq_rhs[i] = p.weight(i);
  }
  return lp;
}

DenseLp lp_from_balanced_ot(const Matrix& cost, const std::vector<double>& row_masses,
                            const std::vector<double>& col_masses) {
  const int n = cost.rows();
  const int m = cost.cols();
  if (n != static_cast<int>(row_masses.size()) || m != static_cast<int>(col_masses.size()))
    throw std::invalid_argument("lp_from_balanced_ot: dimension mismatch");
  DenseLp lp;
  lp.objective.assign(n * m, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) lp.objective[i * m + j] = cost(i, j);
  lp.eq_lhs = Matrix(n + m, n * m, 0.0);
  lp.eq_rhs.assign(n + m, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) lp.eq_lhs(i, i * m + j) = 1.0;
    lp.eq_rhs[i] = row_masses[i];
  }
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) lp.eq_lhs(n + j, i * m + j) = 1.0;
    lp.eq_rhs[n + j] = col_masses[j];
  }
  return lp;
}

LpSolution simplex_solve(const DenseLp& lp) {
  check_lp(lp);
  Tableau tableau(lp);
  return tableau.solve(lp);
}

}  // namespace gopt
