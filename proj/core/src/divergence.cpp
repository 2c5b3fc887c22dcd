#include "gopt/divergence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gopt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string to_string(EntropyKind kind) {
  switch (kind) {
    case EntropyKind::KL: return "kl";
    case EntropyKind::TV: return "tv";
    case EntropyKind::PTV: return "ptv";
    case EntropyKind::Equality: return "equality";
    case EntropyKind::Zero: return "zero";
    case EntropyKind::Interval: return "interval";
  }
  return "?";
}

double entropy_value(EntropyKind kind, double s) {
  switch (kind) {
    case EntropyKind::KL:
      if (s < 0.0) return kInf;
      if (s == 0.0) return 1.0;
      return s * std::log(s) - s + 1.0;
    case EntropyKind::TV:
      if (s < 0.0) return kInf;
      return std::abs(s - 1.0);
    case EntropyKind::PTV:
      if (s < 0.0 || s > 1.0) return kInf;
      return 1.0 - s;
    case EntropyKind::Equality:
      return s == 1.0 ? 0.0 : kInf;
    case EntropyKind::Zero:
      return 0.0;
    case EntropyKind::Interval:
      return (s >= 0.0 && s <= 1.0) ? 0.0 : kInf;
  }
  return kInf;
}

double conjugate_value(EntropyKind kind, double s_prime) {
  switch (kind) {
    case EntropyKind::KL:
      return std::expm1(s_prime);
    case EntropyKind::TV:
      if (s_prime > 1.0) return kInf;
      return std::max(s_prime, -1.0);
    case EntropyKind::PTV:
      return std::max(s_prime, -1.0);
    case EntropyKind::Equality:
      return s_prime;
    case EntropyKind::Zero:
      return s_prime == 0.0 ? 0.0 : kInf;
    case EntropyKind::Interval:
      return std::max(s_prime, 0.0);
  }
  return kInf;
}

double growth_rate_at_infinity(EntropyKind kind) {
  switch (kind) {
    case EntropyKind::KL: return kInf;
    case EntropyKind::TV: return 1.0;
    case EntropyKind::PTV: return kInf;
    case EntropyKind::Equality: return kInf;
    case EntropyKind::Zero: return 0.0;
    case EntropyKind::Interval: return kInf;
  }
  return kInf;
}

double f_divergence(EntropyKind kind, std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("f_divergence: length mismatch");
  const double growth = growth_rate_at_infinity(kind);
  double value = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i] > 0.0) {
      value += entropy_value(kind, a[i] / b[i]) * b[i];
    } else if (a[i] > 0.0) {
      // Singular part of the Lebesgue decomposition.
      value += growth * a[i];
    }
    // b_i = 0, a_i = 0 contributes nothing (0 * inf = 0 convention).
    if (value == kInf) return kInf;
  }
  return value;
}

double weighted_tv_penalty(std::span<const double> lambda, std::span<const double> a,
                           std::span<const double> b) {
  if (lambda.size() != a.size() || a.size() != b.size())
    throw std::invalid_argument("weighted_tv_penalty: length mismatch");
  double value = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) value += lambda[i] * std::abs(b[i] - a[i]);
  return value;
}

double weighted_ptv_penalty(std::span<const double> lambda, std::span<const double> a,
                            std::span<const double> b, double tol) {
  if (lambda.size() != a.size() || a.size() != b.size())
    throw std::invalid_argument("weighted_ptv_penalty: length mismatch");
  double value = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i] + tol) return kInf;
    value += lambda[i] * (b[i] - a[i]);
  }
  return value;
}

}  // namespace gopt
