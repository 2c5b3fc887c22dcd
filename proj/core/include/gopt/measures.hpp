#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gopt/matrix.hpp"

namespace gopt {

using Point = std::vector<double>;

/// Weighted point masses. Weights must be strictly positive: atoms with zero
/// weight are rejected at construction so that per-atom penalty vectors stay
/// index-aligned with the weights. Points are optional and only used to build
/// cost matrices.
class DiscreteMeasure {
 public:
  explicit DiscreteMeasure(std::vector<double> weights);
  DiscreteMeasure(std::vector<double> weights, std::vector<Point> points);

  int size() const { return static_cast<int>(weights_.size()); }
  double weight(int i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  double total_mass() const { return total_mass_; }

  bool has_points() const { return points_.has_value(); }
  const std::vector<Point>& points() const;

 private:
  std::vector<double> weights_;
  std::optional<std::vector<Point>> points_;
  double total_mass_;
};

/// Pairwise transport costs, rows indexing source atoms and columns target
/// atoms. User-facing costs must be non-negative and finite; the augmented
/// matrices built internally for the LP reduction carry negative entries and
/// are constructed through `relaxed`.
class CostMatrix {
 public:
  static CostMatrix from_matrix(Matrix entries);
  static CostMatrix relaxed(Matrix entries);

  const Matrix& entries() const { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }
  int rows() const { return entries_.rows(); }
  int cols() const { return entries_.cols(); }
  bool allows_negative() const { return allows_negative_; }

 private:
  CostMatrix(Matrix entries, bool allows_negative);
  Matrix entries_;
  bool allows_negative_;
};

/// Squared Euclidean cost between two point clouds of equal dimension.
CostMatrix make_cost_sq_euclidean(const std::vector<Point>& xs, const std::vector<Point>& ys);

struct MarginalSums {
  std::vector<double> row;
  std::vector<double> col;
  double total;
};

/// Row sums, column sums and grand sum of a non-negative plan matrix.
/// Negative entries are rejected.
MarginalSums marginals(const Matrix& plan);

/// Non-negative transport matrix with its marginals cached at construction.
class TransportPlan {
 public:
  explicit TransportPlan(Matrix entries);

  const Matrix& matrix() const { return matrix_; }
  double operator()(int i, int j) const { return matrix_(i, j); }
  int rows() const { return matrix_.rows(); }
  int cols() const { return matrix_.cols(); }
  const std::vector<double>& row_marginal() const { return row_marginal_; }
  const std::vector<double>& col_marginal() const { return col_marginal_; }
  double total_mass() const { return total_mass_; }

 private:
  Matrix matrix_;
  std::vector<double> row_marginal_;
  std::vector<double> col_marginal_;
  double total_mass_;
};

enum class PenaltyKind { TV, PTV };

std::string to_string(PenaltyKind kind);

/// A generalized optimal partial transport instance: cost matrix, the two
/// measures, per-atom penalty fields and the penalty kind chosen per side.
struct GoptProblem {
  CostMatrix cost;
  DiscreteMeasure p;
  DiscreteMeasure q;
  std::vector<double> lambda1;
  std::vector<double> lambda2;
  PenaltyKind penalty1 = PenaltyKind::TV;
  PenaltyKind penalty2 = PenaltyKind::TV;

  GoptProblem(CostMatrix cost, DiscreteMeasure p, DiscreteMeasure q,
              std::vector<double> lambda1, std::vector<double> lambda2,
              PenaltyKind penalty1, PenaltyKind penalty2);

  int n() const { return p.size(); }
  int m() const { return q.size(); }
};

struct ObjectiveParts {
  double transport = 0.0;
  double penalty1 = 0.0;
  double penalty2 = 0.0;
  double total = 0.0;
};

/// Evaluates the primal objective of a plan: transport cost plus the two
/// marginal penalty terms. A PTV side whose marginal exceeds the measure by
/// more than `feasibility_tol` (absolute, per atom) makes the penalty and the
/// total +infinity.
ObjectiveParts gopt_primal_objective(const GoptProblem& problem, const TransportPlan& plan,
                                     double feasibility_tol = 1e-9);

}  // namespace gopt
