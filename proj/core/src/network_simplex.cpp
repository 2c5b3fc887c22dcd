#include "network_simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gopt::detail {

namespace {

// Node layout: sources 0..n-1, sinks n..n+m-1, artificial root n+m.
// Arc layout: real arc (i, j) has id i*m + j; artificial arcs follow, one per
// non-root node, oriented source -> root and root -> sink.
class TransportSimplex {
 public:
  TransportSimplex(const Matrix& cost, const std::vector<double>& supply,
                   const std::vector<double>& demand)
      : c_(cost),
        n_(static_cast<int>(supply.size())),
        m_(static_cast<int>(demand.size())),
        num_real_(n_ * m_),
        num_arcs_(n_ * m_ + n_ + m_),
        root_(n_ + m_),
        flow_(num_arcs_, 0.0),
        in_tree_(num_arcs_, 0),
        parent_(n_ + m_ + 1, -1),
        pred_(n_ + m_ + 1, -1),
        depth_(n_ + m_ + 1, 0),
        pi_(n_ + m_ + 1, 0.0) {
    double max_abs = 0.0;
    for (double x : c_.data()) max_abs = std::max(max_abs, std::abs(x));
    big_cost_ = (max_abs + 1.0) * (n_ + m_ + 1);
    opt_tol_ = 1e-11 * std::max(1.0, max_abs);

    for (int i = 0; i < n_; ++i) {
      const int a = num_real_ + i;
      parent_[i] = root_;
      pred_[i] = a;
      depth_[i] = 1;
      flow_[a] = supply[i];
      in_tree_[a] = 1;
    }
    for (int j = 0; j < m_; ++j) {
      const int node = n_ + j;
      const int a = num_real_ + n_ + j;
      parent_[node] = root_;
      pred_[node] = a;
      depth_[node] = 1;
      flow_[a] = demand[j];
      in_tree_[a] = 1;
    }
    compute_potentials();
  }

  TransportResult run() {
    int pivots = 0;
    for (;;) {
      const int entering = find_entering_arc();
      if (entering < 0) break;
      pivot(entering);
      ++pivots;
    }
    TransportResult result;
    result.plan = Matrix(n_, m_);
    double value = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < m_; ++j) {
        const double f = flow_[i * m_ + j];
        result.plan(i, j) = f;
        value += c_(i, j) * f;
      }
    result.value = value;
    result.row_prices.resize(n_);
    result.col_prices.resize(m_);
    // Prices are only determined up to a constant shift (which also cancels
    // in the dual objective of a balanced instance); pin the first row price
    // to zero so the artificial-arc cost scale never shows through.
    const double shift = n_ > 0 ? pi_[0] : 0.0;
    for (int i = 0; i < n_; ++i) result.row_prices[i] = pi_[i] - shift;
    for (int j = 0; j < m_; ++j) result.col_prices[j] = -pi_[n_ + j] + shift;
    result.pivots = pivots;
    return result;
  }

 private:
  int tail(int a) const {
    if (a < num_real_) return a / m_;
    const int k = a - num_real_;
    return k < n_ ? k : root_;
  }
  int head(int a) const {
    if (a < num_real_) return n_ + a % m_;
    const int k = a - num_real_;
    return k < n_ ? root_ : n_ + (k - n_);
  }
  double arc_cost(int a) const {
    return a < num_real_ ? c_(a / m_, a % m_) : big_cost_;
  }

  void compute_potentials() {
    const int num_nodes = root_ + 1;
    // Bucketed children built without per-pivot allocations.
    child_start_.assign(num_nodes + 1, 0);
    for (int v = 0; v < num_nodes; ++v)
      if (v != root_) ++child_start_[parent_[v] + 1];
    for (int v = 0; v < num_nodes; ++v) child_start_[v + 1] += child_start_[v];
    child_fill_ = child_start_;
    child_node_.resize(num_nodes);
    for (int v = 0; v < num_nodes; ++v)
      if (v != root_) child_node_[child_fill_[parent_[v]]++] = v;

    pi_[root_] = 0.0;
    depth_[root_] = 0;
    stack_.clear();
    stack_.push_back(root_);
    while (!stack_.empty()) {
      const int v = stack_.back();
      stack_.pop_back();
      for (int k = child_start_[v]; k < child_start_[v + 1]; ++k) {
        const int w = child_node_[k];
        const int a = pred_[w];
        // Tree arcs have zero reduced cost: c_a - pi[tail] + pi[head] = 0.
        pi_[w] = tail(a) == w ? arc_cost(a) + pi_[v] : pi_[v] - arc_cost(a);
        depth_[w] = depth_[v] + 1;
        stack_.push_back(w);
      }
    }
  }

  int find_entering_arc() const {
    int a = 0;
    for (int i = 0; i < n_; ++i) {
      const double pi_i = pi_[i];
      for (int j = 0; j < m_; ++j, ++a) {
        if (!in_tree_[a] && c_(i, j) - pi_i + pi_[n_ + j] < -opt_tol_) return a;
      }
    }
    return -1;
  }

  void pivot(int entering) {
    const int t = tail(entering);
    const int h = head(entering);

    // Join of the two tree paths.
    int x = t, y = h;
    while (depth_[x] > depth_[y]) x = parent_[x];
    while (depth_[y] > depth_[x]) y = parent_[y];
    while (x != y) {
      x = parent_[x];
      y = parent_[y];
    }
    const int join = x;

    // Pushing delta along the entering arc (tail -> head) returns through the
    // tree path head -> join -> tail. Arcs traversed against their own
    // orientation lose delta and can block.
    double delta = std::numeric_limits<double>::infinity();
    int leaving = -1, leaving_child = -1;

    auto consider = [&](int a, int child, bool decreases) {
      if (!decreases) return;
      const double f = flow_[a];
      if (f < delta || (f == delta && (leaving < 0 || a < leaving))) {
        if (f < delta) delta = f;
        leaving = a;
        leaving_child = child;
      }
    };

    // head -> join: movement is child-to-parent.
    for (int v = h; v != join; v = parent_[v]) {
      const int a = pred_[v];
      consider(a, v, tail(a) != v);
    }
    // join -> tail: movement is parent-to-child, enumerated from the tail up.
    for (int v = t; v != join; v = parent_[v]) {
      const int a = pred_[v];
      consider(a, v, tail(a) == v);
    }

    if (leaving < 0)
      throw std::logic_error("transport simplex: unbounded pivot on a bounded polytope");

    // Apply the flow change around the cycle.
    if (delta != 0.0) {
      flow_[entering] += delta;
      for (int v = h; v != join; v = parent_[v]) {
        const int a = pred_[v];
        flow_[a] += tail(a) != v ? -delta : delta;
      }
      for (int v = t; v != join; v = parent_[v]) {
        const int a = pred_[v];
        flow_[a] += tail(a) == v ? -delta : delta;
      }
    }
    flow_[leaving] = 0.0;

    // Swap the leaving arc out of the tree: the subtree hanging off the
    // leaving arc's child end is re-rooted at the entering arc's endpoint
    // inside it.
    in_tree_[leaving] = 0;
    in_tree_[entering] = 1;

    const bool tail_inside = in_subtree(t, leaving_child);
    const int s_in = tail_inside ? t : h;
    const int s_out = tail_inside ? h : t;

    chain_.clear();
    for (int v = s_in; v != leaving_child; v = parent_[v]) chain_.push_back(v);
    chain_.push_back(leaving_child);

    int new_parent = s_out;
    int new_pred = entering;
    for (int node : chain_) {
      const int old_pred = pred_[node];
      parent_[node] = new_parent;
      pred_[node] = new_pred;
      new_parent = node;
      new_pred = old_pred;
    }

    compute_potentials();
  }

  bool in_subtree(int v, int sub_root) const {
    for (int x = v; x != -1; x = parent_[x])
      if (x == sub_root) return true;
    return false;
  }

  const Matrix& c_;
  int n_, m_, num_real_, num_arcs_, root_;
  double big_cost_ = 0.0;
  double opt_tol_ = 0.0;
  std::vector<double> flow_;
  std::vector<char> in_tree_;
  std::vector<int> parent_;
  std::vector<int> pred_;
  std::vector<int> depth_;
  std::vector<double> pi_;
  // scratch
  std::vector<int> child_start_;
  std::vector<int> child_fill_;
  std::vector<int> child_node_;
  std::vector<int> stack_;
  std::vector<int> chain_;
};

}  // namespace

TransportResult transport_network_simplex(const Matrix& cost, const std::vector<double>& supply,
                                          const std::vector<double>& demand) {
  if (cost.rows() != static_cast<int>(supply.size()) ||
      cost.cols() != static_cast<int>(demand.size()))
    throw std::invalid_argument("transport_network_simplex: dimension mismatch");
  for (double s : supply)
    if (!(s >= 0.0) || !std::isfinite(s))
      throw std::invalid_argument("transport_network_simplex: bad supply");
  for (double d : demand)
    if (!(d >= 0.0) || !std::isfinite(d))
      throw std::invalid_argument("transport_network_simplex: bad demand");
  TransportSimplex solver(cost, supply, demand);
  return solver.run();
}

}  // namespace gopt::detail
