#pragma once

// Lifetimes of series (minimum) and parallel (maximum) systems whose
// components are extended Weibull and coupled by an Archimedean copula.
//
//   max:  F_{n:n}(x)  = psi( sum phi(F_m(x)) )       coupling = Copula
//   min:  Fbar_{1:n}(x) = psi( sum phi(Fbar_m(x)) )  coupling = SurvivalCopula

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eoc/error.hpp"
#include "eoc/ew.hpp"
#include "eoc/generator.hpp"

namespace eoc {

enum class Coupling { Copula, SurvivalCopula };
enum class Extreme { Min, Max };

inline std::string_view coupling_name(Coupling c) {
  return c == Coupling::Copula ? "copula" : "survival";
}
inline std::string_view extreme_name(Extreme e) { return e == Extreme::Min ? "min" : "max"; }

struct CoupledSystem {
  std::vector<EwParams> marginals;
  Generator generator;
  Coupling coupling = Coupling::Copula;

  void validate() const {
    detail::require_contract(!marginals.empty(), "system needs at least one marginal");
    for (const auto& p : marginals)
      if (!p.valid()) throw DomainError("invalid marginal " + to_string(p));
  }

  std::size_t size() const { return marginals.size(); }

  /// The subsystem built from the first m marginals.
  CoupledSystem prefix(std::size_t m) const {
    detail::require_contract(m >= 1 && m <= marginals.size(), "prefix length out of range");
    return {std::vector<EwParams>(marginals.begin(), marginals.begin() + static_cast<long>(m)), generator,
            coupling};
  }

  /// Which extreme this coupling can describe.
  Extreme natural_extreme() const { return coupling == Coupling::Copula ? Extreme::Max : Extreme::Min; }
};

/// pmf of a positive integer sample size on a finite ascending support.
class CountDistribution {
 public:
  CountDistribution() = default;

  explicit CountDistribution(std::vector<std::pair<int, double>> pmf) : pmf_(std::move(pmf)) {
    detail::require_contract(!pmf_.empty(), "count distribution needs support");
    double total = 0.0;
    for (std::size_t i = 0; i < pmf_.size(); ++i) {
      detail::require_contract(pmf_[i].first >= 1, "count support must be >= 1");
      detail::require_contract(pmf_[i].second >= 0.0 && pmf_[i].second <= 1.0,
                               "count probabilities must lie in [0, 1]");
      if (i > 0)
        detail::require_contract(pmf_[i].first > pmf_[i - 1].first,
                                 "count support must be distinct and ascending");
      total += pmf_[i].second;
    }
    detail::require_contract(std::abs(total - 1.0) <= 1e-12, "count probabilities must sum to 1");
  }

  static CountDistribution degenerate(int n) { return CountDistribution({{n, 1.0}}); }

  static CountDistribution uniform(int lo, int hi) {
    detail::require_contract(lo >= 1 && lo <= hi, "bad uniform count range");
    std::vector<std::pair<int, double>> pmf;
    const double p = 1.0 / (hi - lo + 1);
    for (int m = lo; m <= hi; ++m) pmf.emplace_back(m, p);
    return CountDistribution(std::move(pmf));
  }

  const std::vector<std::pair<int, double>>& pmf() const { return pmf_; }
  int max_support() const { return pmf_.back().first; }

  /// P(N > m)
  double sf(int m) const {
    double s = 0.0;
    for (const auto& [k, p] : pmf_)
      if (k > m) s += p;
    return s;
  }

 private:
  std::vector<std::pair<int, double>> pmf_;
};

/// a <=_st b for counts: P(a > m) <= P(b > m) for every m (within 1e-12).
inline bool count_st_leq(const CountDistribution& a, const CountDistribution& b) {
  const int top = std::max(a.max_support(), b.max_support());
  for (int m = 0; m <= top; ++m)
    if (a.sf(m) > b.sf(m) + 1e-12) return false;
  return true;
}

namespace extremes {

/// Marginal probabilities at or below this are treated as exactly zero.
inline constexpr double kProbFloor = 1e-300;

namespace detail {

inline void require_coupling(const CoupledSystem& s, Extreme which) {
  eoc::detail::require_contract(s.natural_extreme() == which,
                                which == Extreme::Max
                                    ? "maximum needs the copula coupling (survival coupling given)"
                                    : "minimum needs the survival-copula coupling (copula coupling given)");
}

inline void check_x(double x) {
  eoc::detail::require_domain(x >= 0.0 && !std::isnan(x), "x must be >= 0");
}

// Marginal argument fed to the copula: cdf for maxima, sf for minima.
inline double copula_arg(const EwParams& p, Extreme which, double x) {
  const double v = which == Extreme::Max ? ew::cdf(p, x) : ew::sf(p, x);
  return v <= kProbFloor ? 0.0 : v;
}

inline double coupled_value(const CoupledSystem& s, Extreme which, double x) {
  require_coupling(s, which);
  s.validate();
  check_x(x);
  std::vector<double> u(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) u[i] = copula_arg(s.marginals[i], which, x);
  return s.generator.copula(u);
}

}  // namespace detail

/// F_{n:n}(x)
inline double max_cdf(const CoupledSystem& s, double x) {
  return detail::coupled_value(s, Extreme::Max, x);
}

/// Fbar_{1:n}(x)
inline double min_sf(const CoupledSystem& s, double x) {
  return detail::coupled_value(s, Extreme::Min, x);
}

inline double extreme_cdf(const CoupledSystem& s, Extreme which, double x) {
  return which == Extreme::Max ? max_cdf(s, x) : 1.0 - min_sf(s, x);
}

inline double extreme_sf(const CoupledSystem& s, Extreme which, double x) {
  return which == Extreme::Max ? 1.0 - max_cdf(s, x) : min_sf(s, x);
}

/// Density of the extreme: sum_i dC/du_i * f_i(x) by the chain rule.
inline double extreme_pdf(const CoupledSystem& s, Extreme which, double x) {
  detail::require_coupling(s, which);
  s.validate();
  eoc::detail::require_domain(x > 0.0 && !std::isnan(x), "x must be > 0");
  if (std::isinf(x)) return 0.0;
  const std::size_t n = s.size();
  std::vector<double> u(n), grad(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = detail::copula_arg(s.marginals[i], which, x);
  s.generator.copula_gradient(u, grad);
  double out = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (grad[i] == 0.0) continue;
    out += grad[i] * ew::pdf(s.marginals[i], x);
  }
  return out;
}

/// Hazard of the minimum of independent components: the sum of marginal hazards.
inline double min_hazard_independent(std::span<const EwParams> params, double x) {
  eoc::detail::require_contract(!params.empty(), "need at least one marginal");
  eoc::detail::require_domain(x > 0.0, "x must be > 0");
  double r = 0.0;
  for (const auto& p : params) r += ew::hazard(p, x);
  return r;
}

namespace detail {

// Solve cdf(x) = u for a continuous nondecreasing cdf on [0, inf) with
// density pdf, starting from a bracket guess [lo, hi] that is widened if it
// does not straddle u. Safeguarded Newton with bisection (geometric while the
// bracket spans decades); stops at adjacent doubles.
template <typename Cdf, typename Pdf>
double invert_cdf(Cdf&& cdf, Pdf&& pdf, double u, double lo, double hi) {
  hi = std::max(hi, 1e-300);
  int guard = 0;
  while (cdf(hi) < u) {
    hi *= 2.0;
    if (++guard > 2100 || std::isinf(hi)) throw NonConvergenceError("could not bracket quantile");
  }
  lo = std::min(lo, hi);
  guard = 0;
  while (lo > 0.0 && cdf(lo) >= u) {
    hi = lo;
    lo *= 0.5;
    if (++guard > 2100) {
      lo = 0.0;
      break;
    }
  }
  if (lo == 0.0 && cdf(0.0) >= u) return 0.0;

  double x = (lo > 0.0 && hi / lo > 4.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
  for (int it = 0; it < 400; ++it) {
    const double fx = cdf(x) - u;
    if (fx == 0.0) return x;
    if (fx < 0.0) lo = x; else hi = x;
    if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * hi) break;
    const double d = pdf(x);
    double next = (d > 0.0 && std::isfinite(d)) ? x - fx / d : std::numeric_limits<double>::quiet_NaN();
    if (!(next > lo && next < hi)) next = (lo > 0.0 && hi / lo > 4.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (next == x) break;
    x = next;
  }
  double best = x, best_err = std::abs(cdf(x) - u);
  for (double c : {lo, hi}) {
    const double e = std::abs(cdf(c) - u);
    if (e < best_err) {
      best = c;
      best_err = e;
    }
  }
  return best;
}

// Bracket valid for the maximum, the minimum and any count mixture of
// prefixes: below min_i Q_i(u/n) every extreme cdf is <= u (Frechet upper
// bound and the union bound), above max_i Q_i(1 - (1-u)/n) it is >= u.
inline std::pair<double, double> frechet_bracket(const CoupledSystem& s, double u) {
  const double n = static_cast<double>(s.size());
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  const double u_hi = 1.0 - (1.0 - u) / n;
  for (const auto& p : s.marginals) {
    lo = std::min(lo, ew::quantile(p, u / n));
    hi = std::max(hi, ew::quantile(p, std::min(u_hi, std::nextafter(1.0, 0.0))));
  }
  return {lo, hi};
}

}  // namespace detail

/// Quantile of the extreme; |cdf(result) - u| <= 1e-11.
inline double extreme_quantile(const CoupledSystem& s, Extreme which, double u) {
  detail::require_coupling(s, which);
  s.validate();
  eoc::detail::require_domain(u > 0.0 && u < 1.0, "quantile level u must lie in (0, 1)");
  if (s.size() == 1) return ew::quantile(s.marginals.front(), u);
  const auto [lo, hi] = detail::frechet_bracket(s, u);
  auto cdf = [&](double x) { return extreme_cdf(s, which, x); };
  auto pdf = [&](double x) { return x > 0.0 ? extreme_pdf(s, which, x) : 0.0; };
  const double x = detail::invert_cdf(cdf, pdf, u, lo, hi);
  if (!(std::abs(cdf(x) - u) <= 1e-11))
    throw NonConvergenceError("extreme quantile did not reach 1e-11 at u=" + std::to_string(u));
  return x;
}

namespace detail {

inline void check_mixture(const CoupledSystem& s, const CountDistribution& n) {
  eoc::detail::require_contract(!n.pmf().empty(), "empty count distribution");
  eoc::detail::require_contract(static_cast<std::size_t>(n.max_support()) <= s.size(),
                                "count support exceeds the number of marginals");
}

}  // namespace detail

/// sum_m P(N = m) F_{m:m}(x), the m-th term built from the first m marginals.
inline double mixture_max_cdf(const CoupledSystem& s, const CountDistribution& n, double x) {
  detail::check_mixture(s, n);
  double out = 0.0;
  for (const auto& [m, p] : n.pmf()) out += p * max_cdf(s.prefix(static_cast<std::size_t>(m)), x);
  return out;
}

/// sum_m P(N = m) Fbar_{1:m}(x), the m-th term built from the first m marginals.
inline double mixture_min_sf(const CoupledSystem& s, const CountDistribution& n, double x) {
  detail::check_mixture(s, n);
  double out = 0.0;
  for (const auto& [m, p] : n.pmf()) out += p * min_sf(s.prefix(static_cast<std::size_t>(m)), x);
  return out;
}

inline double mixture_pdf(const CoupledSystem& s, const CountDistribution& n, Extreme which, double x) {
  detail::check_mixture(s, n);
  double out = 0.0;
  for (const auto& [m, p] : n.pmf()) out += p * extreme_pdf(s.prefix(static_cast<std::size_t>(m)), which, x);
  return out;
}

inline double mixture_cdf(const CoupledSystem& s, const CountDistribution& n, Extreme which, double x) {
  return which == Extreme::Max ? mixture_max_cdf(s, n, x) : 1.0 - mixture_min_sf(s, n, x);
}

inline double mixture_quantile(const CoupledSystem& s, const CountDistribution& n, Extreme which, double u) {
  detail::check_mixture(s, n);
  eoc::detail::require_domain(u > 0.0 && u < 1.0, "quantile level u must lie in (0, 1)");
  const auto [lo, hi] = detail::frechet_bracket(s, u);
  auto cdf = [&](double x) { return mixture_cdf(s, n, which, x); };
  auto pdf = [&](double x) { return x > 0.0 ? mixture_pdf(s, n, which, x) : 0.0; };
  const double x = detail::invert_cdf(cdf, pdf, u, lo, hi);
  if (!(std::abs(cdf(x) - u) <= 1e-11))
    throw NonConvergenceError("mixture quantile did not reach 1e-11 at u=" + std::to_string(u));
  return x;
}

}  // namespace extremes
}  // namespace eoc
