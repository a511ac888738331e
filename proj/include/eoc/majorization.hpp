#pragma once

// Majorization preorders on real vectors. Each relation reads "c is
// (weakly) majorized by d". Entries are sorted internally.
//
// Ascending convention (c_{1:n} <= ... <= c_{n:n}):
//   c <=^m d   sum_{i<=l} c_{i:n} >= sum_{i<=l} d_{i:n}, l < n, equal totals
//   c <=_w d   sum_{i>=l} c_{i:n} <= sum_{i>=l} d_{i:n}, all l
//   c <=^w d   sum_{i<=l} c_{i:n} >= sum_{i<=l} d_{i:n}, all l
//
// The Descending convention applies the same inequalities to the entries
// sorted in decreasing order.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "eoc/conditions.hpp"
#include "eoc/error.hpp"

namespace eoc {

enum class Convention { Ascending, Descending };

inline constexpr double kPartialSumTol = 1e-12;

namespace majorization::detail {

inline std::vector<double> sorted(std::span<const double> v, Convention conv) {
  for (double x : v) eoc::detail::require_domain(std::isfinite(x), "vector entries must be finite");
  std::vector<double> out(v.begin(), v.end());
  if (conv == Convention::Ascending)
    std::sort(out.begin(), out.end());
  else
    std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

inline void check_lengths(std::span<const double> d, std::span<const double> c) {
  eoc::detail::require_contract(!c.empty(), "vectors must be non-empty");
  eoc::detail::require_contract(c.size() == d.size(), "vector lengths differ");
}

// min over l = 1..last of sum_{i<=l} c_i - sum_{i<=l} d_i
inline double head_sum_slack(const std::vector<double>& c, const std::vector<double>& d, std::size_t last) {
  double sc = 0.0, sd = 0.0, worst = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < last; ++l) {
    sc += c[l];
    sd += d[l];
    worst = std::min(worst, sc - sd);
  }
  return worst;
}

}  // namespace majorization::detail

/// Worst partial-sum slack of c <=^m d; nonnegative (within 1e-12) iff it holds.
/// Unequal totals contribute -|total difference| once it exceeds 1e-9 (1 + |total|).
inline double majorization_slack(std::span<const double> d, std::span<const double> c,
                                 Convention conv = Convention::Ascending) {
  majorization::detail::check_lengths(d, c);
  const auto cs = majorization::detail::sorted(c, conv);
  const auto ds = majorization::detail::sorted(d, conv);
  double tc = 0.0, td = 0.0;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    tc += cs[i];
    td += ds[i];
  }
  double slack = cs.size() > 1 ? majorization::detail::head_sum_slack(cs, ds, cs.size() - 1)
                               : std::numeric_limits<double>::infinity();
  if (std::abs(tc - td) > 1e-9 * (1.0 + std::abs(td))) slack = std::min(slack, -std::abs(tc - td));
  return slack;
}

/// Worst tail-sum slack of c <=_w d.
inline double weak_submajorization_slack(std::span<const double> d, std::span<const double> c,
                                         Convention conv = Convention::Ascending) {
  majorization::detail::check_lengths(d, c);
  auto cs = majorization::detail::sorted(c, conv);
  auto ds = majorization::detail::sorted(d, conv);
  // tail sums of c bounded by tail sums of d: reversed head sums of d dominate
  std::reverse(cs.begin(), cs.end());
  std::reverse(ds.begin(), ds.end());
  return majorization::detail::head_sum_slack(ds, cs, cs.size());
}

/// Worst head-sum slack of c <=^w d.
inline double weak_supermajorization_slack(std::span<const double> d, std::span<const double> c,
                                           Convention conv = Convention::Ascending) {
  majorization::detail::check_lengths(d, c);
  const auto cs = majorization::detail::sorted(c, conv);
  const auto ds = majorization::detail::sorted(d, conv);
  return majorization::detail::head_sum_slack(cs, ds, cs.size());
}

/// c <=^m d
inline bool majorizes(std::span<const double> d, std::span<const double> c,
                      Convention conv = Convention::Ascending) {
  return majorization_slack(d, c, conv) >= -kPartialSumTol;
}

/// c <=_w d
inline bool weak_submajorizes(std::span<const double> d, std::span<const double> c,
                              Convention conv = Convention::Ascending) {
  return weak_submajorization_slack(d, c, conv) >= -kPartialSumTol;
}

/// c <=^w d
inline bool weak_supermajorizes(std::span<const double> d, std::span<const double> c,
                                Convention conv = Convention::Ascending) {
  return weak_supermajorization_slack(d, c, conv) >= -kPartialSumTol;
}

inline std::vector<double> log_vector(std::span<const double> v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v) {
    eoc::detail::require_domain(x > 0.0 && std::isfinite(x), "log_vector needs positive entries");
    out.push_back(std::log(x));
  }
  return out;
}

enum class SchurDirection { Convex, Concave };

struct SchurScanOptions {
  int samples = 2000;
  double h_rel = 1e-5;  // finite-difference step as a fraction of the box width
  double tol = 1e-6;    // relative to 1 + |f|
  unsigned seed = 20240607u;
};

/// Samples interior points of the box [lo, hi] and index pairs (i, j), testing
/// (x_i - x_j)(df/dx_i - df/dx_j) >= 0 (Convex) or <= 0 (Concave) with central
/// differences. Symmetry of f is the caller's responsibility.
inline ConditionVerdict schur_convexity_scan(const std::function<double(std::span<const double>)>& f,
                                             std::span<const double> lo, std::span<const double> hi,
                                             SchurDirection dir, const SchurScanOptions& opt = {}) {
  eoc::detail::require_contract(lo.size() == hi.size() && lo.size() >= 2, "box needs >= 2 coordinates");
  const std::size_t n = lo.size();
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<double> x(n), y(n);
  eoc::detail::SlackTracker tr(0.0);
  for (int s = 0; s < opt.samples; ++s) {
    for (std::size_t k = 0; k < n; ++k) {
      const double w = hi[k] - lo[k];
      std::uniform_real_distribution<double> ud(lo[k] + 0.01 * w, hi[k] - 0.01 * w);
      x[k] = ud(rng);
    }
    std::size_t i = pick(rng), j = pick(rng);
    while (j == i) j = pick(rng);
    auto partial = [&](std::size_t k) {
      const double h = opt.h_rel * (hi[k] - lo[k]);
      y = x;
      y[k] = x[k] + h;
      const double fp = f(y);
      y[k] = x[k] - h;
      const double fm = f(y);
      return (fp - fm) / (2.0 * h);
    };
    const double fx = f(x);
    eoc::detail::require_domain(std::isfinite(fx), "non-finite function value in Schur scan");
    double q = (x[i] - x[j]) * (partial(i) - partial(j));
    if (!std::isfinite(q)) throw DomainError("non-finite derivative in Schur scan");
    if (dir == SchurDirection::Concave) q = -q;
    tr.add(q / (1.0 + std::abs(fx)), x);
  }
  tr.tol = opt.tol;
  return tr.finish(dir == SchurDirection::Convex ? "Schur-convexity criterion violated"
                                                 : "Schur-concavity criterion violated");
}

}  // namespace eoc
