#pragma once

#include <span>
#include <string>

namespace gopt {

/// The six entropy functions used by the marginal penalties. Each kind fixes
/// one scalar function f, its convex conjugate f*, and the growth rate
/// f'_inf = lim_{s->inf} f(s)/s that weights the singular part of the
/// divergence.
enum class EntropyKind { KL, TV, PTV, Equality, Zero, Interval };

std::string to_string(EntropyKind kind);

/// f(s). +infinity is returned in-band for arguments outside the domain.
double entropy_value(EntropyKind kind, double s);

/// f*(s') = sup_s { s*s' - f(s) }.
double conjugate_value(EntropyKind kind, double s_prime);

/// f'_inf.
double growth_rate_at_infinity(EntropyKind kind);

/// Discrete f-divergence D_f(a || b) = sum_{b_i > 0} f(a_i/b_i) b_i
/// + f'_inf * sum_{b_i = 0} a_i, with the 0 * inf = 0 convention.
double f_divergence(EntropyKind kind, std::span<const double> a, std::span<const double> b);

/// sum_i lambda_i |b_i - a_i|.
double weighted_tv_penalty(std::span<const double> lambda, std::span<const double> a,
                           std::span<const double> b);

/// sum_i lambda_i (b_i - a_i) when a <= b + tol entrywise, +infinity
/// otherwise.
double weighted_ptv_penalty(std::span<const double> lambda, std::span<const double> a,
                            std::span<const double> b, double tol);

}  // namespace gopt
