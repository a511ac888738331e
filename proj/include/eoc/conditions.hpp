#pragma once

// Grid checkers for the analytic side conditions placed on generators.
// Each returns the worst point found (witness and margin) even when the
// condition holds, so near-degenerate parameters are visible.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "eoc/generator.hpp"
#include "eoc/grid.hpp"
#include "eoc/verdict.hpp"

namespace eoc {

struct ConditionVerdict {
  Status status = Status::Holds;
  std::vector<double> witness;  // point(s) of the worst slack
  double margin = std::numeric_limits<double>::infinity();  // worst slack, < 0 means violated
  std::string reason;

  bool holds() const { return status == Status::Holds; }
};

struct ConditionGrid {
  int points = 1024;
  double x_lo = 1e-6;  // psi-side domain
  double x_hi = 40.0;
  double t_lo = 1e-6;  // phi-side domain, t in (0, 1)
  double t_hi = 1.0 - 1e-6;
  double tol = 1e-9;
};

namespace detail {

inline ConditionVerdict inconclusive(std::string why) {
  ConditionVerdict v;
  v.status = Status::Inconclusive;
  v.margin = std::numeric_limits<double>::quiet_NaN();
  v.reason = std::move(why);
  return v;
}

// Track the smallest slack seen; slack < -tol marks a failure.
struct SlackTracker {
  double tol;
  ConditionVerdict v;

  explicit SlackTracker(double t) : tol(t) {}

  void add(double slack, std::vector<double> at) {
    if (std::isnan(slack)) return;
    if (slack < v.margin) {
      v.margin = slack;
      v.witness = std::move(at);
    }
  }

  ConditionVerdict finish(const char* what) {
    if (v.margin < -tol) {
      v.status = Status::FailsAt;
      v.reason = what;
    }
    return v;
  }
};

template <typename G>
double log_psi_of(const G& g, double s) {
  if constexpr (requires { g.log_psi(s); }) {
    return g.log_psi(s);
  } else {
    return std::log(g.psi(s));
  }
}

template <typename G>
double phi_of_log_of(const G& g, double log_t) {
  if constexpr (requires { g.phi_of_log(log_t); }) {
    return g.phi_of_log(log_t);
  } else {
    const double t = std::exp(log_t);
    if (t == 0.0) return std::numeric_limits<double>::infinity();
    return g.phi(std::min(t, 1.0));
  }
}

template <typename G>
double phi_ratio_of(const G& g, double t) {
  if constexpr (requires { g.phi_d2_over_d1(t); }) {
    return g.phi_d2_over_d1(t);
  } else {
    return g.phi_d2(t) / g.phi_d1(t);
  }
}

template <typename G>
double psi_d1_over_psi_of(const G& g, double s) {
  if constexpr (requires { g.psi_d1_over_psi(s); }) {
    return g.psi_d1_over_psi(s);
  } else {
    return g.psi_d1(s) / g.psi(s);
  }
}

template <typename G>
double psi_d2_over_psi_of(const G& g, double s) {
  if constexpr (requires { g.psi_d2_over_psi(s); }) {
    return g.psi_d2_over_psi(s);
  } else {
    return g.psi_d2(s) / g.psi(s);
  }
}

}  // namespace detail

/// f = phi2 o psi1 satisfies f(x) + f(y) <= f(x + y) on a pair grid.
/// The slack is measured relative to |f(x + y)|, since f(0) = 0 and f can
/// stay tiny over the whole grid for strongly concentrated generators.
template <GeneratorLike G1, GeneratorLike G2>
ConditionVerdict check_superadditive(const G1& g1, const G2& g2, const ConditionGrid& grid = {}) {
  if (!g1.valid_generator() || !g2.valid_generator())
    return detail::inconclusive("generator outside its valid parameter range");
  const auto xs = grid::log_spaced(grid.x_lo, grid.x_hi, grid.points);
  auto f = [&](double s) { return detail::phi_of_log_of(g2, detail::log_psi_of(g1, s)); };
  std::vector<double> fx(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) fx[i] = f(xs[i]);
  detail::SlackTracker tr(grid.tol);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i; j < xs.size(); ++j) {
      const double fs = f(xs[i] + xs[j]);
      if (std::isinf(fs)) continue;  // f(x + y) = +inf dominates anything finite
      const double lhs = fx[i] + fx[j];
      if (std::isinf(lhs)) {
        tr.add(-std::numeric_limits<double>::infinity(), {xs[i], xs[j]});
        continue;
      }
      tr.add((fs - lhs) / std::max(std::abs(fs), std::numeric_limits<double>::min()), {xs[i], xs[j]});
    }
  }
  return tr.finish("f(x) + f(y) > f(x + y)");
}

/// (log psi)'' <= 0 on the x-grid.
template <GeneratorLike G>
ConditionVerdict check_log_concave_psi(const G& g, const ConditionGrid& grid = {}) {
  if (!g.valid_generator()) return detail::inconclusive("generator outside its valid parameter range");
  detail::SlackTracker tr(grid.tol);
  for (double x : grid::log_spaced(grid.x_lo, grid.x_hi, grid.points)) {
    double second;  // (log psi)''
    if constexpr (requires { g.log_psi_d2(x); }) {
      second = g.log_psi_d2(x);
    } else {
      const double r1 = detail::psi_d1_over_psi_of(g, x);
      second = detail::psi_d2_over_psi_of(g, x) - r1 * r1;
    }
    tr.add(-second, {x});
  }
  return tr.finish("(log psi)'' > 0");
}

/// alpha t phi''(t) + c phi'(t) >= 0 on (0, 1). Since phi' < 0 the check is
/// made on the form divided by -phi', i.e. alpha t (phi''/-phi') - c >= 0,
/// which stays finite where phi' overflows. The margin is in those units.
template <GeneratorLike G>
ConditionVerdict check_phi_condition(const G& g, double c, double alpha, const ConditionGrid& grid = {}) {
  if (!g.valid_generator()) return detail::inconclusive("generator outside its valid parameter range");
  detail::SlackTracker tr(grid.tol);
  for (double t : grid::logit(grid.t_lo, grid.t_hi, grid.points)) {
    const double ratio = detail::phi_ratio_of(g, t);  // phi''/phi'
    tr.add(-alpha * t * ratio - c, {t});
  }
  return tr.finish("alpha t phi'' + c phi' < 0");
}

/// psi/psi' is nonincreasing and concave. Scanned on a uniform grid over
/// [0, x_hi] by first and second differences, relative to 1 + |psi/psi'|.
template <GeneratorLike G>
ConditionVerdict check_psi_ratio(const G& g, const ConditionGrid& grid = {}) {
  if (!g.valid_generator()) return detail::inconclusive("generator outside its valid parameter range");
  const auto xs = grid::linear(0.0, grid.x_hi, grid.points);
  std::vector<double> h(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) h[i] = 1.0 / detail::psi_d1_over_psi_of(g, xs[i]);
  detail::SlackTracker tr(grid.tol);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double scale = 1.0 + std::abs(h[i]);
    tr.add(-(h[i] - h[i - 1]) / scale, {xs[i]});
    if (i + 1 < xs.size()) tr.add(-(h[i + 1] - 2.0 * h[i] + h[i - 1]) / scale, {xs[i]});
  }
  return tr.finish("psi/psi' increasing or convex somewhere");
}

namespace detail {

// The two t-functions from the star-order conditions.
template <GeneratorLike G>
double star_max_function(const G& g, double alpha, double t) {
  const double ab = 1.0 - alpha;
  const double w = alpha + ab * t;
  return w * std::log(t / w) * (alpha + 2.0 * ab * t - w * t * phi_ratio_of(g, 1.0 - t));
}

template <GeneratorLike G>
double star_min_function(const G& g, double alpha, double t) {
  const double ab = 1.0 - alpha;
  const double w = alpha + ab * t;
  return w * std::log(t / w) * ((alpha + 2.0 * ab * t) + (alpha * t + ab * t * t) * phi_ratio_of(g, t));
}

template <typename F>
ConditionVerdict monotone_scan(F&& fn, bool increasing, const ConditionGrid& grid, const char* what) {
  const auto ts = grid::logit(grid.t_lo, grid.t_hi, grid.points);
  SlackTracker tr(grid.tol);
  double prev = fn(ts.front());
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const double cur = fn(ts[i]);
    const double step = increasing ? cur - prev : prev - cur;
    tr.add(step / (1.0 + std::abs(cur)), {ts[i]});
    prev = cur;
  }
  return tr.finish(what);
}

}  // namespace detail

/// (a + a_bar t) log(t / (a + a_bar t)) [a + 2 a_bar t - (a + a_bar t) t phi''(1-t)/phi'(1-t)]
/// is nondecreasing in t.
template <GeneratorLike G>
ConditionVerdict check_star_condition_max(const G& g, double alpha, const ConditionGrid& grid = {}) {
  if (!g.valid_generator()) return detail::inconclusive("generator outside its valid parameter range");
  return detail::monotone_scan([&](double t) { return detail::star_max_function(g, alpha, t); }, true,
                               grid, "max-side star function decreases");
}

/// (a + a_bar t) log(t / (a + a_bar t)) [(a + 2 a_bar t) + (a t + a_bar t^2) phi''(t)/phi'(t)]
/// is nonincreasing in t.
template <GeneratorLike G>
ConditionVerdict check_star_condition_min(const G& g, double alpha, const ConditionGrid& grid = {}) {
  if (!g.valid_generator()) return detail::inconclusive("generator outside its valid parameter range");
  return detail::monotone_scan([&](double t) { return detail::star_min_function(g, alpha, t); }, false,
                               grid, "min-side star function increases");
}

}  // namespace eoc
