#pragma once

#include <vector>

#include "gopt/matrix.hpp"

namespace gopt::detail {

struct TransportResult {
  Matrix plan;                     // n x m optimal flows
  double value = 0.0;              // sum c_ij * plan_ij
  std::vector<double> row_prices;  // alpha_i
  std::vector<double> col_prices;  // beta_j
  int pivots = 0;
};

/// Network simplex on the dense bipartite transportation graph. Supplies and
/// demands must be non-negative and share the same total (the caller is
/// responsible for rescaling). Costs may be negative. Pivoting follows
/// Bland's rule on arc ids (first negative reduced cost enters, lowest-id
/// blocking arc leaves), which is deterministic and cannot cycle.
TransportResult transport_network_simplex(const Matrix& cost, const std::vector<double>& supply,
                                          const std::vector<double>& demand);

}  // namespace gopt::detail
