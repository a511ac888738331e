#pragma once

#include <cmath>
#include <vector>

#include "eoc/error.hpp"

namespace eoc {

enum class Spacing { Log, Linear };

/// Grid request shared by the order verifiers: point count and the quantile
/// range that fixes the x-interval (pooled over both distributions).
struct GridSpec {
  int points = 2048;
  double lo_quantile = 1e-6;
  double hi_quantile = 1.0 - 1e-6;
  Spacing spacing = Spacing::Log;

  void validate() const {
    detail::require_contract(points >= 16, "grid needs at least 16 points");
    detail::require_contract(lo_quantile > 0.0 && lo_quantile < hi_quantile && hi_quantile < 1.0,
                             "grid quantile range must satisfy 0 < lo < hi < 1");
  }
};

namespace grid {

inline std::vector<double> linear(double lo, double hi, int n) {
  detail::require_contract(n >= 2 && lo < hi, "bad linear grid");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  out.back() = hi;
  return out;
}

inline std::vector<double> log_spaced(double lo, double hi, int n) {
  detail::require_contract(n >= 2 && lo > 0.0 && lo < hi, "bad log grid");
  const double a = std::log(lo), b = std::log(hi);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * i / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

/// Points in (0, 1) evenly spaced in logit, so both ends are resolved on a log scale.
inline std::vector<double> logit(double lo, double hi, int n) {
  detail::require_contract(n >= 2 && lo > 0.0 && lo < hi && hi < 1.0, "bad logit grid");
  const double a = std::log(lo) - std::log1p(-lo);
  const double b = std::log(hi) - std::log1p(-hi);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double z = a + (b - a) * i / (n - 1);
    out[i] = 1.0 / (1.0 + std::exp(-z));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

/// Quantile-level grid for a spec: logit spacing for Log, uniform for Linear.
inline std::vector<double> levels(const GridSpec& g) {
  g.validate();
  return g.spacing == Spacing::Log ? logit(g.lo_quantile, g.hi_quantile, g.points)
                                   : linear(g.lo_quantile, g.hi_quantile, g.points);
}

}  // namespace grid
}  // namespace eoc
