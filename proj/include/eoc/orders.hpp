#pragma once

// Grid verifiers for six stochastic orders between two lifetime
// distributions given as function bundles.
//
//   a <=_st  b   sf_a <= sf_b
//   a <=_hr  b   r_a >= r_b          (sf_b / sf_a nondecreasing)
//   a <=_rh  b   rt_a <= rt_b        (F_b / F_a nondecreasing)
//   a <=_disp b  Q_b - Q_a nondecreasing
//   a <=_*   b   Q_b(u) / Q_a(u) nondecreasing in u
//   a <=_Lorenz b  L_a(u) >= L_b(u)

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "eoc/error.hpp"
#include "eoc/ew.hpp"
#include "eoc/extremes.hpp"
#include "eoc/grid.hpp"
#include "eoc/verdict.hpp"

namespace eoc {

struct DistHandle {
  std::string label;
  std::function<double(double)> cdf;
  std::function<double(double)> sf;
  std::function<double(double)> pdf;
  std::function<double(double)> quantile;
  std::function<double(double)> hazard;      // optional, pdf/sf otherwise
  std::function<double(double)> rev_hazard;  // optional, pdf/cdf otherwise
  double support_lo = 0.0;                   // optional hint, 0 = unknown
  double support_hi = 0.0;

  double hazard_at(double x) const { return hazard ? hazard(x) : pdf(x) / sf(x); }
  double rev_hazard_at(double x) const { return rev_hazard ? rev_hazard(x) : pdf(x) / cdf(x); }
};

inline DistHandle make_handle(const EwParams& p, std::string label = {}) {
  DistHandle h;
  h.label = label.empty() ? to_string(p) : std::move(label);
  h.cdf = [p](double x) { return ew::cdf(p, x); };
  h.sf = [p](double x) { return ew::sf(p, x); };
  h.pdf = [p](double x) { return ew::pdf(p, x); };
  h.quantile = [p](double u) { return ew::quantile(p, u); };
  h.hazard = [p](double x) { return ew::hazard(p, x); };
  h.rev_hazard = [p](double x) { return ew::rev_hazard(p, x); };
  return h;
}

inline DistHandle make_handle(const CoupledSystem& s, Extreme which, std::string label = {}) {
  s.validate();
  extremes::detail::require_coupling(s, which);
  DistHandle h;
  h.label = label.empty() ? std::string(extreme_name(which)) : std::move(label);
  h.cdf = [s, which](double x) { return extremes::extreme_cdf(s, which, x); };
  h.sf = [s, which](double x) { return extremes::extreme_sf(s, which, x); };
  h.pdf = [s, which](double x) { return extremes::extreme_pdf(s, which, x); };
  h.quantile = [s, which](double u) { return extremes::extreme_quantile(s, which, u); };
  return h;
}

inline DistHandle make_mixture_handle(const CoupledSystem& s, const CountDistribution& n, Extreme which,
                                      std::string label = {}) {
  s.validate();
  extremes::detail::require_coupling(s, which);
  extremes::detail::check_mixture(s, n);
  DistHandle h;
  h.label = label.empty() ? std::string(extreme_name(which)) + " mixture" : std::move(label);
  h.cdf = [s, n, which](double x) { return extremes::mixture_cdf(s, n, which, x); };
  h.sf = [s, n, which](double x) {
    return which == Extreme::Min ? extremes::mixture_min_sf(s, n, x) : 1.0 - extremes::mixture_max_cdf(s, n, x);
  };
  h.pdf = [s, n, which](double x) { return extremes::mixture_pdf(s, n, which, x); };
  h.quantile = [s, n, which](double u) { return extremes::mixture_quantile(s, n, which, u); };
  return h;
}

/// Tolerances applied by the verifiers.
struct OrderTolerance {
  double prob = 1e-9;      // absolute, on probabilities and Lorenz ordinates
  double rate = 1e-8;      // relative, on hazards and reversed hazards
  double quantile = 1e-9;  // relative, on quantile differences and ratios
};

enum class Order { St, Hr, Rh, Disp, Star, Lorenz };

inline std::string_view order_name(Order o) {
  switch (o) {
    case Order::St: return "st";
    case Order::Hr: return "hr";
    case Order::Rh: return "rh";
    case Order::Disp: return "disp";
    case Order::Star: return "star";
    case Order::Lorenz: return "lorenz";
  }
  return "?";
}

inline std::optional<Order> parse_order(std::string_view s) {
  for (Order o : {Order::St, Order::Hr, Order::Rh, Order::Disp, Order::Star, Order::Lorenz})
    if (order_name(o) == s) return o;
  return std::nullopt;
}

/// Sign change of cdf_a - cdf_b. gap_before and gap_after are the largest
/// gaps (signed) on the grid on either side of the crossing.
struct Crossing {
  double x = 0.0;
  double gap_before = 0.0;
  double gap_after = 0.0;
};

struct Witness {
  double at = 0.0;   // x, or the level u for quantile-based orders
  double gap = 0.0;  // size of the violation in the check's units
};

struct OrderVerdict {
  Status status = Status::Holds;
  Order order = Order::St;
  std::optional<Witness> witness;
  std::optional<Crossing> crossing;
  std::string reason;
  GridSpec grid;
  double x_lo = 0.0, x_hi = 0.0;  // x-range actually scanned
  bool on_levels = false;         // witness.at is a level u rather than x

  bool holds() const { return status == Status::Holds; }
};

namespace orders::detail {

inline std::pair<double, double> pooled_range(const DistHandle& a, const DistHandle& b, const GridSpec& g) {
  const double lo = std::min(a.quantile(g.lo_quantile), b.quantile(g.lo_quantile));
  const double hi = std::max(a.quantile(g.hi_quantile), b.quantile(g.hi_quantile));
  eoc::detail::require_contract(lo > 0.0 && hi > lo, "degenerate pooled support");
  return {lo, hi};
}

inline std::vector<double> x_grid(const DistHandle& a, const DistHandle& b, const GridSpec& g) {
  g.validate();
  const auto [lo, hi] = pooled_range(a, b, g);
  return g.spacing == Spacing::Log ? grid::log_spaced(lo, hi, g.points) : grid::linear(lo, hi, g.points);
}

inline OrderVerdict start(Order o, const GridSpec& g) {
  OrderVerdict v;
  v.order = o;
  v.grid = g;
  return v;
}

// Largest violation wins the witness slot.
inline void note(OrderVerdict& v, double at, double gap) {
  if (!v.witness || gap > v.witness->gap) v.witness = Witness{at, gap};
}

inline void finish(OrderVerdict& v, double tol, const char* what) {
  if (v.witness && v.witness->gap > tol) {
    v.status = Status::FailsAt;
    v.reason = what;
  }
}

template <typename Gap>
std::optional<Crossing> crossing_on(const std::vector<double>& xs, Gap&& gap, double tol) {
  std::vector<double> gv(xs.size());
  std::size_t imax = 0, imin = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    gv[i] = gap(xs[i]);
    if (gv[i] > gv[imax]) imax = i;
    if (gv[i] < gv[imin]) imin = i;
  }
  if (!(gv[imax] > tol && gv[imin] < -tol)) return std::nullopt;
  // Walk from the first extreme toward the second and bisect the last sign change.
  const std::size_t from = std::min(imax, imin), to = std::max(imax, imin);
  std::size_t k = from;
  for (std::size_t i = from; i < to; ++i)
    if ((gv[i] > 0.0) != (gv[i + 1] > 0.0)) k = i;
  double lo = xs[k], hi = xs[k + 1];
  const bool lo_positive = gv[k] > 0.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if ((gap(mid) > 0.0) == lo_positive) lo = mid; else hi = mid;
  }
  Crossing c;
  c.x = 0.5 * (lo + hi);
  c.gap_before = gv[from];
  c.gap_after = gv[to];
  return c;
}

// Composite Gauss-Legendre for int_0^u Q(p) dp at every level, in the variable
// s = -log(1 - p) so the logarithmic growth of Q near p = 1 is resolved.
// Panels are aligned with the levels; the tail runs to s = 34 (1 - p ~ 2e-15),
// past which even a k = 0.3 tail contributes below 1e-13 of the mean.
inline std::vector<double> lorenz_curve(const DistHandle& d, const std::vector<double>& levels, double& mean) {
  using Rule = boost::math::quadrature::gauss<double, 8>;
  constexpr double kTopS = 34.0;
  auto integrand = [&](double s) {
    const double p = -std::expm1(-s);
    return d.quantile(p) * std::exp(-s);
  };
  auto s_of = [](double p) { return -std::log1p(-p); };
  std::vector<double> cum(levels.size());
  double acc = 0.0;
  // First panel [0, s(u_0)], split geometrically so the behaviour at the origin is resolved.
  {
    const double s0 = s_of(levels.front());
    double a = 0.0, b = s0 * 1e-6;
    acc += Rule::integrate(integrand, a, b);
    while (b < s0) {
      a = b;
      b = std::min(s0, b * 10.0);
      acc += Rule::integrate(integrand, a, b);
    }
  }
  cum[0] = acc;
  for (std::size_t i = 1; i < levels.size(); ++i) {
    acc += Rule::integrate(integrand, s_of(levels[i - 1]), s_of(levels[i]));
    cum[i] = acc;
  }
  double tail = 0.0;
  {
    const double a = s_of(levels.back()), b = std::max(a, kTopS);
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / 0.5)));
    for (int j = 0; j < pieces; ++j)
      tail += Rule::integrate(integrand, a + (b - a) * j / pieces, a + (b - a) * (j + 1) / pieces);
  }
  mean = acc + tail;
  for (double& c : cum) c /= mean;
  return cum;
}

}  // namespace orders::detail

/// a <=_st b: sf_a(x) <= sf_b(x) + tol on the pooled grid. A failure carries
/// the largest violation and, if the survival curves cross, the crossing.
inline OrderVerdict check_usual_st(const DistHandle& a, const DistHandle& b, const GridSpec& g = {},
                                   const OrderTolerance& tol = {}) {
  auto v = orders::detail::start(Order::St, g);
  const auto xs = orders::detail::x_grid(a, b, g);
  v.x_lo = xs.front();
  v.x_hi = xs.back();
  for (double x : xs) orders::detail::note(v, x, a.sf(x) - b.sf(x));
  orders::detail::finish(v, tol.prob, "sf_a > sf_b");
  if (v.status == Status::FailsAt)
    v.crossing = orders::detail::crossing_on(xs, [&](double x) { return a.cdf(x) - b.cdf(x); }, tol.prob);
  return v;
}

/// Locates a sign change of cdf_a - cdf_b on the pooled grid, refined to 1e-10.
inline std::optional<Crossing> find_crossing(const DistHandle& a, const DistHandle& b, const GridSpec& g = {},
                                             const OrderTolerance& tol = {}) {
  const auto xs = orders::detail::x_grid(a, b, g);
  return orders::detail::crossing_on(xs, [&](double x) { return a.cdf(x) - b.cdf(x); }, tol.prob);
}

namespace orders::detail {

// Shared body of the hazard and reversed-hazard checks. rate_gap(x) returns
// the signed violation of the rate inequality (relative units), log_ratio(x)
// the log of the ratio that must be nondecreasing.
template <typename RateGap, typename LogRatio>
OrderVerdict rate_check(Order o, const DistHandle& a, const DistHandle& b, const GridSpec& g,
                        const OrderTolerance& tol, RateGap&& rate_gap, LogRatio&& log_ratio, const char* what) {
  auto v = start(o, g);
  const auto xs = x_grid(a, b, g);
  v.x_lo = xs.front();
  v.x_hi = xs.back();
  double run_max = -std::numeric_limits<double>::infinity();
  std::optional<Witness> ratio_worst;
  for (double x : xs) {
    const double gap = rate_gap(x);
    if (std::isfinite(gap)) note(v, x, gap);
    const double lr = log_ratio(x);
    if (!std::isfinite(lr)) continue;
    run_max = std::max(run_max, lr);
    const double drop = run_max - lr;
    if (!ratio_worst || drop > ratio_worst->gap) ratio_worst = Witness{x, drop};
  }
  finish(v, tol.rate, what);
  const bool ratio_fails = ratio_worst && ratio_worst->gap > tol.rate;
  if ((v.status == Status::FailsAt) != ratio_fails) {
    v.status = Status::Inconclusive;
    v.reason = ratio_fails ? "rate comparison holds but the survival ratio decreases"
                           : "rate comparison fails but the survival ratio is monotone";
    if (!v.witness && ratio_worst) v.witness = ratio_worst;
  }
  return v;
}

inline double rel_gap(double should_be_smaller, double should_be_larger) {
  const double scale = std::max(std::abs(should_be_smaller), std::abs(should_be_larger));
  if (scale == 0.0) return 0.0;
  return (should_be_smaller - should_be_larger) / scale;
}

}  // namespace orders::detail

/// a <=_hr b: r_a(x) >= r_b(x); confirmed by monotonicity of sf_b / sf_a.
inline OrderVerdict check_hazard_rate(const DistHandle& a, const DistHandle& b, const GridSpec& g = {},
                                      const OrderTolerance& tol = {}) {
  return orders::detail::rate_check(
      Order::Hr, a, b, g, tol,
      [&](double x) { return orders::detail::rel_gap(b.hazard_at(x), a.hazard_at(x)); },
      [&](double x) { return std::log(b.sf(x)) - std::log(a.sf(x)); }, "r_a < r_b");
}

/// a <=_rh b: rt_a(x) <= rt_b(x); confirmed by monotonicity of F_b / F_a.
inline OrderVerdict check_reversed_hazard(const DistHandle& a, const DistHandle& b, const GridSpec& g = {},
                                          const OrderTolerance& tol = {}) {
  return orders::detail::rate_check(
      Order::Rh, a, b, g, tol,
      [&](double x) { return orders::detail::rel_gap(a.rev_hazard_at(x), b.rev_hazard_at(x)); },
      [&](double x) { return std::log(b.cdf(x)) - std::log(a.cdf(x)); }, "rt_a > rt_b");
}

/// a <=_disp b: u -> Q_b(u) - Q_a(u) nondecreasing on the level grid.
inline OrderVerdict check_dispersive(const DistHandle& a, const DistHandle& b, const GridSpec& g = {},
                                     const OrderTolerance& tol = {}) {
  auto v = orders::detail::start(Order::Disp, g);
  v.on_levels = true;
  const auto us = grid::levels(g);
  double run_max = -std::numeric_limits<double>::infinity();
  for (double u : us) {
    const double qa = a.quantile(u), qb = b.quantile(u);
    const double d = qb - qa;
    run_max = std::max(run_max, d);
    orders::detail::note(v, u, (run_max - d) / (std::abs(qa) + std::abs(qb)));
  }
  v.x_lo = a.quantile(us.front());
  v.x_hi = a.quantile(us.back());
  orders::detail::finish(v, tol.quantile, "Q_b - Q_a decreases");
  return v;
}

/// a <=_* b: Q_b(u) / Q_a(u) nondecreasing on the level grid (equivalently
/// Q_b(F_a(x)) / x nondecreasing in x).
inline OrderVerdict check_star(const DistHandle& a, const DistHandle& b, const GridSpec& g = {},
                               const OrderTolerance& tol = {}) {
  auto v = orders::detail::start(Order::Star, g);
  v.on_levels = true;
  const auto us = grid::levels(g);
  double run_max = -std::numeric_limits<double>::infinity();
  for (double u : us) {
    const double r = b.quantile(u) / a.quantile(u);
    run_max = std::max(run_max, r);
    orders::detail::note(v, u, (run_max - r) / run_max);
  }
  v.x_lo = a.quantile(us.front());
  v.x_hi = a.quantile(us.back());
  orders::detail::finish(v, tol.quantile, "Q_b / Q_a decreases");
  return v;
}

/// a <=_Lorenz b: L_a(u) >= L_b(u) - tol on the level grid.
inline OrderVerdict check_lorenz(const DistHandle& a, const DistHandle& b, const GridSpec& g = {},
                                 const OrderTolerance& tol = {}) {
  auto v = orders::detail::start(Order::Lorenz, g);
  v.on_levels = true;
  const auto us = grid::levels(g);
  double mean_a = 0.0, mean_b = 0.0;
  const auto la = orders::detail::lorenz_curve(a, us, mean_a);
  const auto lb = orders::detail::lorenz_curve(b, us, mean_b);
  if (!(std::isfinite(mean_a) && mean_a > 0.0 && std::isfinite(mean_b) && mean_b > 0.0)) {
    v.status = Status::Inconclusive;
    v.reason = "mean did not converge";
    return v;
  }
  for (std::size_t i = 0; i < us.size(); ++i) orders::detail::note(v, us[i], lb[i] - la[i]);
  v.x_lo = a.quantile(us.front());
  v.x_hi = a.quantile(us.back());
  orders::detail::finish(v, tol.prob, "L_a < L_b");
  return v;
}

inline OrderVerdict check_order(Order o, const DistHandle& a, const DistHandle& b, const GridSpec& g = {},
                                const OrderTolerance& tol = {}) {
  switch (o) {
    case Order::St: return check_usual_st(a, b, g, tol);
    case Order::Hr: return check_hazard_rate(a, b, g, tol);
    case Order::Rh: return check_reversed_hazard(a, b, g, tol);
    case Order::Disp: return check_dispersive(a, b, g, tol);
    case Order::Star: return check_star(a, b, g, tol);
    case Order::Lorenz: return check_lorenz(a, b, g, tol);
  }
  throw ContractError("unknown order");
}

}  // namespace eoc
