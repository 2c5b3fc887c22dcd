#include "gopt/sinkhorn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class SideKind { TV, PTV, Equality };

struct Side {
  SideKind kind = SideKind::TV;
  std::vector<double> lambda;  // empty for Equality
};

double side_dual_term(const Side& side, std::span<const double> potential,
                      std::span<const double> mass, double feasibility_tol) {
  double term = 0.0;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    switch (side.kind) {
      case SideKind::TV: {
        const double lam = side.lambda[i];
        const double slack = feasibility_tol * (1.0 + lam);
        // Domain of the clipped update: phi >= -lambda, and phi pinned to 0
        // where lambda vanishes.
        if (potential[i] < -lam - slack) return -kInf;
        if (lam == 0.0 && std::abs(potential[i]) > slack) return -kInf;
        term += std::min(lam, potential[i]) * mass[i];
        break;
      }
      case SideKind::PTV:
        term += std::min(side.lambda[i], potential[i]) * mass[i];
        break;
      case SideKind::Equality:
        term += potential[i] * mass[i];
        break;
    }
  }
  return term;
}

// Scaling solver with absorption. Potentials are split as
// phi = phi_base + eps*ln(u); whenever a scaling drifts out of range (or an
// update produces a non-finite value) the base potentials take over and the
// kernel is rebuilt as exp((phi_base_i + psi_base_j - c_ij)/eps).
class ScalingSolver {
 public:
  ScalingSolver(const Matrix& cost, std::span<const double> p, std::span<const double> q,
                Side side1, Side side2, const EntropicConfig& config)
      : cost_(cost),
        p_(p.begin(), p.end()),
        q_(q.begin(), q.end()),
        side1_(std::move(side1)),
        side2_(std::move(side2)),
        config_(config),
        n_(cost.rows()),
        m_(cost.cols()),
        phi_base_(n_, 0.0),
        psi_base_(m_, 0.0),
        u_(n_, 1.0),
        v_(m_, 1.0),
        kernel_(cost.rows(), cost.cols()) {
    rebuild_kernel();
  }

  SolveReport solve() {
    const double eps = config_.epsilon;
    std::vector<double> prev_phi(n_, 0.0), prev_psi(m_, 0.0);
    bool converged = false;
    int iterations = 0;

    for (int it = 1; it <= config_.max_iters; ++it) {
      if (update_u()) absorb();
      if (update_v()) absorb();

      double delta = 0.0;
      for (int i = 0; i < n_; ++i) {
        const double phi = total_phi(i);
        delta = std::max(delta, std::abs(phi - prev_phi[i]));
        prev_phi[i] = phi;
      }
      for (int j = 0; j < m_; ++j) {
        const double psi = total_psi(j);
        delta = std::max(delta, std::abs(psi - prev_psi[j]));
        prev_psi[j] = psi;
      }
      iterations = it;

      if (it % config_.gap_check_every == 0) certify_weak_duality(prev_phi, prev_psi);
      if (delta < config_.tol) {
        converged = true;
        break;
      }
    }

    // Final potentials.
    std::vector<double> phi(n_), psi(m_);
    for (int i = 0; i < n_; ++i) phi[i] = total_phi(i);
    for (int j = 0; j < m_; ++j) psi[j] = total_psi(j);

    SolveReport report{TransportPlan(plan_from_potentials(phi, psi))};
    report.potentials = DualPotentials{phi, psi, eps};
    report.primal_value = primal_value(phi, psi);
    report.dual_value = dual_value(phi, psi);
    report.gap = report.primal_value - *report.dual_value;
    report.iterations = iterations;
    report.converged = converged;
    return report;
  }

  // Entropic primal in KL normalization:
  //   sum_ij [gamma_ij (phi_i + psi_j) - eps gamma_ij + eps K_ij] + penalties,
  // which equals <c, gamma> + eps*sum (ln(gamma)-1)gamma + eps*sum K + penalties.
  double primal_value(const std::vector<double>& phi, const std::vector<double>& psi) const {
    const double eps = config_.epsilon;
    double value = 0.0;
    std::vector<double> row(n_, 0.0), col(m_, 0.0);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < m_; ++j) {
        const double g = std::exp(plan_exponent(i, j, phi, psi));
        const double k = std::exp(-cost_(i, j) / eps);
        value += g * (phi[i] + psi[j]) - eps * g + eps * k;
        row[i] += g;
        col[j] += g;
      }
    value += side_primal_penalty(side1_, row, p_);
    value += side_primal_penalty(side2_, col, q_);
    return value;
  }

  double dual_value(const std::vector<double>& phi, const std::vector<double>& psi) const {
    const double eps = config_.epsilon;
    double value = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < m_; ++j) {
        const double g = std::exp(plan_exponent(i, j, phi, psi));
        const double k = std::exp(-cost_(i, j) / eps);
        value -= eps * (g - k);
      }
    const double t1 = side_dual_term(side1_, phi, p_, config_.tol);
    const double t2 = side_dual_term(side2_, psi, q_, config_.tol);
    return value + t1 + t2;
  }

 private:
  double plan_exponent(int i, int j, const std::vector<double>& phi,
                       const std::vector<double>& psi) const {
    // Capped so diverged iterates stay representable; converged plans never
    // come close to the cap.
    return std::min((phi[i] + psi[j] - cost_(i, j)) / config_.epsilon, 700.0);
  }

  // Internal certificate: any potential pair must satisfy weak duality up to
  // the penalty mass the slackened indicators can forgive. A violation beyond
  // that margin means the solver itself is broken.
  void certify_weak_duality(const std::vector<double>& phi, const std::vector<double>& psi) const {
    const double primal = primal_value(phi, psi);
    const double dual = dual_value(phi, psi);
    double lambda_sum = 0.0;
    for (double l : side1_.lambda) lambda_sum += l;
    for (double l : side2_.lambda) lambda_sum += l;
    const double forgivable =
        lambda_sum * std::max(feasibility_slack(p_), feasibility_slack(q_));
    if (std::isfinite(primal) && std::isfinite(dual) &&
        primal - dual < -(1e-6 + 1e-6 * std::abs(primal) + forgivable))
      throw std::logic_error("scaling solver: weak duality violated");
  }

  // Marginal penalty of the current plan, with the hard constraints slackened
  // by the violation the stopping rule itself permits (a potential change of
  // tol moves marginals by a factor of about e^{tol/eps}).
  double side_primal_penalty(const Side& side, const std::vector<double>& marginal,
                             const std::vector<double>& mass) const {
    const double slack = feasibility_slack(mass);
    double value = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i) {
      switch (side.kind) {
        case SideKind::TV:
          value += side.lambda[i] * std::abs(mass[i] - marginal[i]);
          break;
        case SideKind::PTV:
          if (marginal[i] > mass[i] + slack) return kInf;
          value += side.lambda[i] * (mass[i] - marginal[i]);
          break;
        case SideKind::Equality:
          if (std::abs(marginal[i] - mass[i]) > slack) return kInf;
          break;
      }
    }
    return value;
  }

  double feasibility_slack(const std::vector<double>& mass) const {
    double mx = 0.0;
    for (double x : mass) mx = std::max(mx, x);
    return convergence_feasibility_slack(config_, mx);
  }

  void rebuild_kernel() {
    const double eps = config_.epsilon;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < m_; ++j)
        kernel_(i, j) = std::exp((phi_base_[i] + psi_base_[j] - cost_(i, j)) / eps);
  }

  void absorb() {
    const double eps = config_.epsilon;
    for (int i = 0; i < n_; ++i) {
      phi_base_[i] += eps * std::log(u_[i]);
      u_[i] = 1.0;
    }
    for (int j = 0; j < m_; ++j) {
      psi_base_[j] += eps * std::log(v_[j]);
      v_[j] = 1.0;
    }
    rebuild_kernel();
  }

  double total_phi(int i) const { return phi_base_[i] + config_.epsilon * std::log(u_[i]); }
  double total_psi(int j) const { return psi_base_[j] + config_.epsilon * std::log(v_[j]); }

  // Proximal-divide update in the scaling domain. Bounds that overflow or
  // underflow degrade to inf/0 and deactivate.
  double scaled_update(const Side& side, int idx, double ratio, double base) const {
    const double eps = config_.epsilon;
    switch (side.kind) {
      case SideKind::TV: {
        const double lo = std::exp((-side.lambda[idx] - base) / eps);
        const double hi = std::exp((side.lambda[idx] - base) / eps);
        return std::min(std::max(ratio, lo), hi);
      }
      case SideKind::PTV:
        return std::min(ratio, std::exp((side.lambda[idx] - base) / eps));
      case SideKind::Equality:
        return ratio;
    }
    return ratio;
  }

  double clamp_total(const Side& side, int idx, double raw) const {
    switch (side.kind) {
      case SideKind::TV:
        return std::clamp(raw, -side.lambda[idx], side.lambda[idx]);
      case SideKind::PTV:
        return std::min(raw, side.lambda[idx]);
      case SideKind::Equality:
        return raw;
    }
    return raw;
  }

  // eps * log sum_j exp((psi_total_j - c_ij)/eps), evaluated with a max shift.
  double log_row_image(int i) const {
    const double eps = config_.epsilon;
    double mx = -kInf;
    for (int j = 0; j < m_; ++j)
      mx = std::max(mx, psi_base_[j] + eps * std::log(v_[j]) - cost_(i, j));
    double s = 0.0;
    for (int j = 0; j < m_; ++j)
      s += std::exp((psi_base_[j] + eps * std::log(v_[j]) - cost_(i, j) - mx) / eps);
    return mx + eps * std::log(s);
  }

  double log_col_image(int j) const {
    const double eps = config_.epsilon;
    double mx = -kInf;
    for (int i = 0; i < n_; ++i)
      mx = std::max(mx, phi_base_[i] + eps * std::log(u_[i]) - cost_(i, j));
    double s = 0.0;
    for (int i = 0; i < n_; ++i)
      s += std::exp((phi_base_[i] + eps * std::log(u_[i]) - cost_(i, j) - mx) / eps);
    return mx + eps * std::log(s);
  }

  // Returns true when an absorption is needed (a scaling left the safe range
  // or an exact log-domain fallback rewrote the base potential).
  bool update_u() {
    const double eps = config_.epsilon;
    bool need_absorb = false;
    for (int i = 0; i < n_; ++i) {
      double img = 0.0;
      for (int j = 0; j < m_; ++j) img += kernel_(i, j) * v_[j];
      double val = kInf;
      if (img > 0.0 && std::isfinite(img))
        val = scaled_update(side1_, i, p_[i] / img, phi_base_[i]);
      if (val > 0.0 && std::isfinite(val)) {
        u_[i] = val;
        if (val > config_.stabilization_threshold || val < 1.0 / config_.stabilization_threshold)
          need_absorb = true;
      } else {
        const double raw = eps * std::log(p_[i]) - log_row_image(i);
        phi_base_[i] = clamp_total(side1_, i, raw);
        u_[i] = 1.0;
        need_absorb = true;
      }
    }
    return need_absorb;
  }

  bool update_v() {
    const double eps = config_.epsilon;
    bool need_absorb = false;
    for (int j = 0; j < m_; ++j) {
      double img = 0.0;
      for (int i = 0; i < n_; ++i) img += kernel_(i, j) * u_[i];
      double val = kInf;
      if (img > 0.0 && std::isfinite(img))
        val = scaled_update(side2_, j, q_[j] / img, psi_base_[j]);
      if (val > 0.0 && std::isfinite(val)) {
        v_[j] = val;
        if (val > config_.stabilization_threshold || val < 1.0 / config_.stabilization_threshold)
          need_absorb = true;
      } else {
        const double raw = eps * std::log(q_[j]) - log_col_image(j);
        psi_base_[j] = clamp_total(side2_, j, raw);
        v_[j] = 1.0;
        need_absorb = true;
      }
    }
    return need_absorb;
  }

  Matrix plan_from_potentials(const std::vector<double>& phi, const std::vector<double>& psi) const {
    Matrix plan(n_, m_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < m_; ++j) plan(i, j) = std::exp(plan_exponent(i, j, phi, psi));
    return plan;
  }

  const Matrix& cost_;
  std::vector<double> p_, q_;
  Side side1_, side2_;
  EntropicConfig config_;
  int n_, m_;
  std::vector<double> phi_base_, psi_base_;
  std::vector<double> u_, v_;
  Matrix kernel_;
};

Side side_from_penalty(PenaltyKind kind, const std::vector<double>& lambda) {
  Side side;
  side.kind = kind == PenaltyKind::TV ? SideKind::TV : SideKind::PTV;
  side.lambda = lambda;
  return side;
}

void check_positive_image(std::span<const double> image) {
  for (double x : image)
    if (!(x > 0.0) || !std::isfinite(x))
      throw std::invalid_argument("proxdiv: kernel image entries must be strictly positive");
}

}  // namespace

void EntropicConfig::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("EntropicConfig: epsilon must be > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("EntropicConfig: tol must be > 0");
  if (max_iters <= 0) throw std::invalid_argument("EntropicConfig: max_iters must be positive");
  if (!(stabilization_threshold > 1.0))
    throw std::invalid_argument("EntropicConfig: stabilization_threshold must exceed 1");
  if (gap_check_every <= 0)
    throw std::invalid_argument("EntropicConfig: gap_check_every must be positive");
}

double convergence_feasibility_slack(const EntropicConfig& config, double mass_scale) {
  return std::max(1e-9, 2.0 * mass_scale * std::expm1(config.tol / config.epsilon));
}

Matrix gibbs_kernel(const CostMatrix& cost, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("gibbs_kernel: epsilon must be > 0");
  Matrix out(cost.rows(), cost.cols());
  for (int i = 0; i < cost.rows(); ++i)
    for (int j = 0; j < cost.cols(); ++j) out(i, j) = std::exp(-cost(i, j) / epsilon);
  return out;
}

std::vector<double> proxdiv_tv(std::span<const double> marginal_target,
                               std::span<const double> kernel_image,
                               std::span<const double> lambda, double epsilon) {
  if (marginal_target.size() != kernel_image.size() || marginal_target.size() != lambda.size())
    throw std::invalid_argument("proxdiv_tv: length mismatch");
  if (!(epsilon > 0.0)) throw std::invalid_argument("proxdiv_tv: epsilon must be > 0");
  check_positive_image(kernel_image);
  std::vector<double> out(marginal_target.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double lo = std::exp(-lambda[i] / epsilon);
    const double hi = std::exp(lambda[i] / epsilon);
    out[i] = std::min(std::max(marginal_target[i] / kernel_image[i], lo), hi);
  }
  return out;
}

std::vector<double> proxdiv_ptv(std::span<const double> marginal_target,
                                std::span<const double> kernel_image,
                                std::span<const double> lambda, double epsilon) {
  if (marginal_target.size() != kernel_image.size() || marginal_target.size() != lambda.size())
    throw std::invalid_argument("proxdiv_ptv: length mismatch");
  if (!(epsilon > 0.0)) throw std::invalid_argument("proxdiv_ptv: epsilon must be > 0");
  check_positive_image(kernel_image);
  std::vector<double> out(marginal_target.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::min(marginal_target[i] / kernel_image[i], std::exp(lambda[i] / epsilon));
  return out;
}

std::vector<double> proxdiv_sopt_source(std::span<const double> marginal_target,
                                        std::span<const double> kernel_image) {
  if (marginal_target.size() != kernel_image.size())
    throw std::invalid_argument("proxdiv_sopt_source: length mismatch");
  check_positive_image(kernel_image);
  std::vector<double> out(marginal_target.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::min(marginal_target[i] / kernel_image[i], 1.0);
  return out;
}

std::vector<double> proxdiv_sopt_target(std::span<const double> marginal_target,
                                        std::span<const double> kernel_image) {
  if (marginal_target.size() != kernel_image.size())
    throw std::invalid_argument("proxdiv_sopt_target: length mismatch");
  check_positive_image(kernel_image);
  std::vector<double> out(marginal_target.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = marginal_target[i] / kernel_image[i];
  return out;
}

SolveReport solve_egopt(const GoptProblem& problem, const EntropicConfig& config) {
  config.validate();
  ScalingSolver solver(problem.cost.entries(), problem.p.weights(), problem.q.weights(),
                       side_from_penalty(problem.penalty1, problem.lambda1),
                       side_from_penalty(problem.penalty2, problem.lambda2), config);
  return solver.solve();
}

SolveReport solve_esopt(const CostMatrix& cost, const DiscreteMeasure& p,
                        const DiscreteMeasure& q, const EntropicConfig& config) {
  config.validate();
  if (cost.rows() != p.size() || cost.cols() != q.size())
    throw std::invalid_argument("solve_esopt: dimension mismatch");
  if (q.total_mass() > p.total_mass() * (1.0 + 1e-12) + 1e-12)
    throw std::invalid_argument("solve_esopt: requires |q| <= |p|");
  Side source{SideKind::PTV, std::vector<double>(p.size(), 0.0)};
  Side target{SideKind::Equality, {}};
  ScalingSolver solver(cost.entries(), p.weights(), q.weights(), std::move(source),
                       std::move(target), config);
  return solver.solve();
}

double dual_objective(const GoptProblem& problem, const DualPotentials& potentials,
                      const Matrix& kernel, double feasibility_tol) {
  const int n = problem.n();
  const int m = problem.m();
  if (static_cast<int>(potentials.phi.size()) != n ||
      static_cast<int>(potentials.psi.size()) != m || kernel.rows() != n || kernel.cols() != m)
    throw std::invalid_argument("dual_objective: dimension mismatch");
  const double eps = potentials.epsilon;
  if (!(eps > 0.0)) throw std::invalid_argument("dual_objective: epsilon must be > 0");

  double value = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      const double k = kernel(i, j);
      if (k > 0.0)
        value -= eps * (std::exp((potentials.phi[i] + potentials.psi[j]) / eps + std::log(k)) - k);
    }
  const Side s1 = side_from_penalty(problem.penalty1, problem.lambda1);
  const Side s2 = side_from_penalty(problem.penalty2, problem.lambda2);
  const double t1 = side_dual_term(s1, potentials.phi, problem.p.weights(), feasibility_tol);
  const double t2 = side_dual_term(s2, potentials.psi, problem.q.weights(), feasibility_tol);
  return value + t1 + t2;
}

}  // namespace gopt
