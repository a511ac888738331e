#pragma once

// Extended Weibull marginal EW(alpha, lambda, k):
//
//   F(x) = (1 - exp(-(x lambda)^k)) / (1 - (1 - alpha) exp(-(x lambda)^k))
//
// alpha is the tilt, lambda the scale (a rate, 1/time) and k the shape.
// alpha = 1 gives Weibull, alpha = k = 1 the exponential with rate lambda.

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "eoc/error.hpp"

namespace eoc {

struct EwParams {
  double alpha = 1.0;
  double lambda = 1.0;
  double k = 1.0;

  double alpha_bar() const { return 1.0 - alpha; }

  bool valid() const {
    return std::isfinite(alpha) && std::isfinite(lambda) && std::isfinite(k) && alpha > 0.0 &&
           lambda > 0.0 && k > 0.0;
  }

  friend bool operator==(const EwParams&, const EwParams&) = default;
};

inline std::string to_string(const EwParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << "EW(alpha=" << p.alpha << ", lambda=" << p.lambda << ", k=" << p.k << ")";
  return os.str();
}

namespace ew {

/// Above this value of (x lambda)^k the survival function is reported as exactly 0.
inline constexpr double kTailExponent = 700.0;

namespace detail {

inline void check_params(const EwParams& p) {
  if (!p.valid()) throw DomainError("invalid extended Weibull parameters " + to_string(p));
}

inline void check_x(double x) {
  eoc::detail::require_domain(std::isfinite(x) ? x >= 0.0 : x == std::numeric_limits<double>::infinity(),
                              "x must be >= 0");
}

// (x lambda)^k, guarded at x = 0.
inline double power_term(const EwParams& p, double x) {
  if (x == 0.0) return 0.0;
  return std::exp(p.k * std::log(x * p.lambda));
}

// Pieces shared by every evaluation: e = exp(-z), g = 1 - e, den = 1 - (1-alpha) e.
struct Terms {
  double z;
  double e;
  double g;
  double den;
};

inline Terms terms(const EwParams& p, double x) {
  const double z = power_term(p, x);
  const double e = std::exp(-z);
  const double g = -std::expm1(-z);
  return {z, e, g, p.alpha * e + g};
}

}  // namespace detail

inline double cdf(const EwParams& p, double x) {
  detail::check_params(p);
  detail::check_x(x);
  const auto t = detail::terms(p, x);
  if (t.z > kTailExponent) return 1.0;
  return t.g / t.den;
}

inline double sf(const EwParams& p, double x) {
  detail::check_params(p);
  detail::check_x(x);
  const auto t = detail::terms(p, x);
  if (t.z > kTailExponent) return 0.0;
  return p.alpha * t.e / t.den;
}

/// Density. At x = 0 the right limit is returned (+inf when k < 1).
inline double pdf(const EwParams& p, double x) {
  detail::check_params(p);
  detail::check_x(x);
  if (std::isinf(x)) return 0.0;
  if (x == 0.0) {
    if (p.k < 1.0) return std::numeric_limits<double>::infinity();
    if (p.k > 1.0) return 0.0;
    return p.lambda / p.alpha;
  }
  const auto t = detail::terms(p, x);
  if (t.e == 0.0) return 0.0;
  // k lambda (x lambda)^(k-1) = k z / x
  return p.alpha * p.k * (t.z / x) * t.e / (t.den * t.den);
}

inline double hazard(const EwParams& p, double x) {
  detail::check_params(p);
  detail::check_x(x);
  if (x == 0.0) {
    if (p.k < 1.0) return std::numeric_limits<double>::infinity();
    if (p.k > 1.0) return 0.0;
    return p.lambda / p.alpha;
  }
  const auto t = detail::terms(p, x);
  return p.k * (t.z / x) / t.den;
}

/// Reversed hazard f/F; diverges at the origin.
inline double rev_hazard(const EwParams& p, double x) {
  detail::check_params(p);
  detail::check_x(x);
  if (x == 0.0) return std::numeric_limits<double>::infinity();
  const auto t = detail::terms(p, x);
  if (t.z > kTailExponent) return 0.0;
  return p.alpha * p.k * (t.z / x) * t.e / (t.den * t.g);
}

/// Inverse CDF on [0, 1).
inline double quantile(const EwParams& p, double u) {
  detail::check_params(p);
  eoc::detail::require_domain(u >= 0.0 && u < 1.0, "quantile level u must lie in [0, 1)");
  if (u == 0.0) return 0.0;
  // s = -log((1 - u) / (1 - (1-alpha) u)), evaluated in the form that keeps
  // relative accuracy at each end of the unit interval.
  const double den = 1.0 - p.alpha_bar() * u;
  double s;
  if (u < 0.5) {
    s = -std::log1p(-p.alpha * u / den);
  } else {
    s = std::log(den) - std::log1p(-u);
  }
  return std::pow(s, 1.0 / p.k) / p.lambda;
}

}  // namespace ew
}  // namespace eoc
