#include "gopt/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gopt/divergence.hpp"

namespace gopt {

namespace {

void check_weights(const std::vector<double>& weights) {
  if (weights.empty()) throw std::invalid_argument("DiscreteMeasure: no atoms");
  for (double w : weights) {
    if (!std::isfinite(w)) throw std::invalid_argument("DiscreteMeasure: non-finite weight");
    if (w <= 0.0) throw std::invalid_argument("DiscreteMeasure: weights must be strictly positive");
  }
}

double sum_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<double> weights)
    : weights_(std::move(weights)) {
  check_weights(weights_);
  total_mass_ = sum_of(weights_);
}

DiscreteMeasure::DiscreteMeasure(std::vector<double> weights, std::vector<Point> points)
    : weights_(std::move(weights)), points_(std::move(points)) {
  check_weights(weights_);
  if (points_->size() != weights_.size())
    throw std::invalid_argument("DiscreteMeasure: points/weights length mismatch");
  total_mass_ = sum_of(weights_);
}

const std::vector<Point>& DiscreteMeasure::points() const {
  if (!points_) throw std::logic_error("DiscreteMeasure: no points attached");
  return *points_;
}

CostMatrix::CostMatrix(Matrix entries, bool allows_negative)
    : entries_(std::move(entries)), allows_negative_(allows_negative) {}

CostMatrix CostMatrix::from_matrix(Matrix entries) {
  if (!entries.all_finite()) throw std::invalid_argument("CostMatrix: non-finite entry");
  for (double x : entries.data())
    if (x < 0.0) throw std::invalid_argument("CostMatrix: negative entry (use relaxed for augmented costs)");
  return CostMatrix(std::move(entries), false);
}

CostMatrix CostMatrix::relaxed(Matrix entries) {
  if (!entries.all_finite()) throw std::invalid_argument("CostMatrix: non-finite entry");
  return CostMatrix(std::move(entries), true);
}

CostMatrix make_cost_sq_euclidean(const std::vector<Point>& xs, const std::vector<Point>& ys) {
  if (xs.empty() || ys.empty())
    throw std::invalid_argument("make_cost_sq_euclidean: empty point set");
  const std::size_t dim = xs[0].size();
  if (dim == 0) throw std::invalid_argument("make_cost_sq_euclidean: zero-dimensional points");
  for (const Point& x : xs)
    if (x.size() != dim) throw std::invalid_argument("make_cost_sq_euclidean: dimension mismatch");
  for (const Point& y : ys)
    if (y.size() != dim) throw std::invalid_argument("make_cost_sq_euclidean: dimension mismatch");

  Matrix out(static_cast<int>(xs.size()), static_cast<int>(ys.size()));
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j) {
      double d2 = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double d = xs[i][k] - ys[j][k];
        d2 += d * d;
      }
      out(static_cast<int>(i), static_cast<int>(j)) = d2;
    }
  return CostMatrix::from_matrix(std::move(out));
}

MarginalSums marginals(const Matrix& plan) {
  for (double x : plan.data()) {
    if (!(x >= 0.0)) throw std::invalid_argument("marginals: negative or NaN entry");
  }
  MarginalSums out;
  out.row = plan.row_sums();
  out.col = plan.col_sums();
  out.total = plan.sum();
  return out;
}

TransportPlan::TransportPlan(Matrix entries) : matrix_(std::move(entries)) {
  MarginalSums sums = marginals(matrix_);
  row_marginal_ = std::move(sums.row);
  col_marginal_ = std::move(sums.col);
  total_mass_ = sums.total;
}

std::string to_string(PenaltyKind kind) {
  return kind == PenaltyKind::TV ? "tv" : "ptv";
}

GoptProblem::GoptProblem(CostMatrix cost_, DiscreteMeasure p_, DiscreteMeasure q_,
                         std::vector<double> lambda1_, std::vector<double> lambda2_,
                         PenaltyKind penalty1_, PenaltyKind penalty2_)
    : cost(std::move(cost_)),
      p(std::move(p_)),
      q(std::move(q_)),
      lambda1(std::move(lambda1_)),
      lambda2(std::move(lambda2_)),
      penalty1(penalty1_),
      penalty2(penalty2_) {
  if (cost.rows() != p.size() || cost.cols() != q.size())
    throw std::invalid_argument("GoptProblem: cost dimensions do not match the measures");
  if (static_cast<int>(lambda1.size()) != p.size())
    throw std::invalid_argument("GoptProblem: lambda1 length mismatch");
  if (static_cast<int>(lambda2.size()) != q.size())
    throw std::invalid_argument("GoptProblem: lambda2 length mismatch");
  for (double l : lambda1)
    if (!std::isfinite(l) || l < 0.0) throw std::invalid_argument("GoptProblem: lambda1 must be finite and >= 0");
  for (double l : lambda2)
    if (!std::isfinite(l) || l < 0.0) throw std::invalid_argument("GoptProblem: lambda2 must be finite and >= 0");
}

ObjectiveParts gopt_primal_objective(const GoptProblem& problem, const TransportPlan& plan,
                                     double feasibility_tol) {
  if (plan.rows() != problem.n() || plan.cols() != problem.m())
    throw std::invalid_argument("gopt_primal_objective: plan dimensions do not match the problem");

  ObjectiveParts parts;
  for (int i = 0; i < plan.rows(); ++i)
    for (int j = 0; j < plan.cols(); ++j) parts.transport += problem.cost(i, j) * plan(i, j);

  if (problem.penalty1 == PenaltyKind::TV) {
    parts.penalty1 = weighted_tv_penalty(problem.lambda1, plan.row_marginal(), problem.p.weights());
  } else {
    parts.penalty1 = weighted_ptv_penalty(problem.lambda1, plan.row_marginal(), problem.p.weights(),
                                          feasibility_tol);
  }
  if (problem.penalty2 == PenaltyKind::TV) {
    parts.penalty2 = weighted_tv_penalty(problem.lambda2, plan.col_marginal(), problem.q.weights());
  } else {
    parts.penalty2 = weighted_ptv_penalty(problem.lambda2, plan.col_marginal(), problem.q.weights(),
                                          feasibility_tol);
  }
  parts.total = parts.transport + parts.penalty1 + parts.penalty2;
  return parts;
}

}  // namespace gopt
