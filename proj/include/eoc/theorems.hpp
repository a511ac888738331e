#pragma once

// Randomized consistency harness: draws instances inside each catalog
// theorem's hypothesis region, keeps those whose hypothesis checks all hold,
// and checks the stated conclusion on each.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "eoc/scenarios.hpp"

namespace eoc {

struct FuzzOptions {
  int instances = 200;
  int max_attempts = 20000;
  std::uint64_t seed = 7;
  RunOptions run = [] {
    RunOptions r;
    r.grid.points = 512;
    r.conditions.points = 256;
    return r;
  }();
};

struct FuzzInstance {
  Scenario scenario;
  TheoremCheck check;
};

struct FuzzResult {
  std::string theorem;
  int accepted = 0;
  int attempts = 0;
  int rejected_inconclusive = 0;
  std::vector<FuzzInstance> violations;
};

namespace fuzz::detail {

using Rng = std::mt19937_64;

inline double uniform(Rng& r, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(r); }
inline double log_uniform(Rng& r, double lo, double hi) { return std::exp(uniform(r, std::log(lo), std::log(hi))); }
inline int integer(Rng& r, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(r); }
inline bool coin(Rng& r) { return integer(r, 0, 1) == 1; }

inline Generator random_generator(Rng& r) {
  switch (integer(r, 0, 2)) {
    case 0: return Generator::independence();
    case 1: return Generator::gumbel_variant(uniform(r, 1.0, 6.0));
    default: return Generator::exp_reciprocal(uniform(r, 0.3, 10.0));
  }
}

// Half the time a same-family pair ordered so that phi2 o psi1 is
// super-additive; otherwise two independent draws. The checker decides.
inline std::pair<Generator, Generator> generator_pair(Rng& r) {
  if (coin(r)) return {random_generator(r), random_generator(r)};
  Generator a = random_generator(r), b = random_generator(r);
  while (b.family() != a.family()) b = random_generator(r);
  if (a.family() == Family::Independence) return {a, b};
  const double lo = std::min(a.theta(), b.theta()), hi = std::max(a.theta(), b.theta());
  if (a.family() == Family::GumbelVariant) return {Generator(a.family(), hi), Generator(a.family(), lo)};
  return {Generator(a.family(), lo), Generator(a.family(), hi)};
}

// A vector majorized by d: a random convex mix toward the mean, randomly permuted.
inline std::vector<double> smoothed(Rng& r, const std::vector<double>& d) {
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
  const double w = uniform(r, 0.0, 1.0);
  std::vector<double> c(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) c[i] = w * mean + (1.0 - w) * d[i];
  std::shuffle(c.begin(), c.end(), r);
  return c;
}

inline std::vector<double> draw(Rng& r, int n, double lo, double hi, bool log_scale = false) {
  std::vector<double> v(n);
  for (auto& x : v) x = log_scale ? log_uniform(r, lo, hi) : uniform(r, lo, hi);
  return v;
}

inline void shift(std::vector<double>& v, double by, double floor) {
  for (auto& x : v) x = std::max(x + by, floor);
}

inline CoupledSystem build(std::vector<double> a, std::vector<double> l, std::vector<double> k, Generator g,
                           Coupling c) {
  CoupledSystem s;
  for (std::size_t i = 0; i < a.size(); ++i) s.marginals.push_back({a[i], l[i], k[i]});
  s.generator = g;
  s.coupling = c;
  return s;
}

inline std::pair<CountDistribution, CountDistribution> count_pair(Rng& r, int n) {
  std::vector<double> p2(n);
  for (auto& x : p2) x = uniform(r, 0.05, 1.0);
  const double tot = std::accumulate(p2.begin(), p2.end(), 0.0);
  for (auto& x : p2) x /= tot;
  // move part of each atom's mass to a lower support point
  std::vector<double> p1(n, 0.0);
  for (int m = 0; m < n; ++m) {
    const double keep = uniform(r, 0.0, 1.0);
    p1[m] += keep * p2[m];
    p1[integer(r, 0, m)] += (1.0 - keep) * p2[m];
  }
  auto to_pmf = [](const std::vector<double>& p) {
    std::vector<std::pair<int, double>> out;
    double s = 0.0;
    for (std::size_t m = 0; m + 1 < p.size(); ++m) {
      out.push_back({static_cast<int>(m) + 1, p[m]});
      s += p[m];
    }
    out.push_back({static_cast<int>(p.size()), 1.0 - s});
    return CountDistribution(out);
  };
  return {to_pmf(p1), to_pmf(p2)};
}

// FNV-1a, so seeds do not depend on the standard library's std::hash.
inline std::uint64_t name_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
  return h;
}

inline std::string base_id(const std::string& id) { return id.rfind("random_", 0) == 0 ? id.substr(7) : id; }

}  // namespace fuzz::detail

/// One random instance for the theorem, drawn from (a superset of) its
/// hypothesis region. Hypotheses are not guaranteed; the caller checks them.
inline Scenario sample_instance(const TheoremSpec& t, std::mt19937_64& r) {
  using namespace fuzz::detail;
  const std::string id = base_id(t.id);
  const Coupling cp = t.coupling;
  const int n = integer(r, 2, 4);
  Scenario s;
  s.name = t.id;
  s.theorem = t.id;
  s.statistic = t.statistic;
  s.order = t.order;
  s.smaller = t.smaller;
  s.hypothesis_checks = t.hypotheses;

  auto common = [n](double v) { return std::vector<double>(n, v); };
  const bool tilt_theorem = id.rfind("tilt_", 0) == 0;
  const bool star_theorem = id.find("star") != std::string::npos || id.find("lorenz") != std::string::npos;

  if (star_theorem) {
    const int p = integer(r, 1, n - 1);
    const double a = uniform(r, 0.05, 1.0), k = uniform(r, 0.2, 1.0);
    const Generator g = random_generator(r);
    double l1 = log_uniform(r, 0.2, 5.0), l2 = log_uniform(r, 0.2, 5.0);
    // mu less spread in ratio, same ordering
    const double w = uniform(r, 0.0, 1.0), sc = log_uniform(r, 0.5, 2.0);
    const double gm = std::sqrt(l1 * l2);
    double m1 = sc * gm * std::pow(l1 / gm, w), m2 = sc * gm * std::pow(l2 / gm, w);
    std::vector<double> lx(n, l2), ly(n, m2);
    std::fill_n(lx.begin(), p, l1);
    std::fill_n(ly.begin(), p, m1);
    s.system_x = build(common(a), lx, common(k), g, cp);
    s.system_y = build(common(a), ly, common(k), g, cp);
  } else if (id == "scale_min_disp") {
    const double a = uniform(r, 0.05, 1.0), k = uniform(r, 0.2, 1.0);
    const Generator g = random_generator(r);
    const auto lx = draw(r, n, 0.2, 5.0, true);
    double lg = 0.0;
    for (double l : lx) lg += std::log(l);
    const double mu = std::exp(lg / n) * uniform(r, 0.3, 1.0);
    s.system_x = build(common(a), lx, common(k), g, cp);
    s.system_y = build(common(a), common(mu), common(k), g, cp);
  } else {
    const bool independent = id == "scale_min_hr" || id == "tilt_min_hr" || id == "tilt_max_rh";
    auto [g1, g2] = independent ? std::make_pair(Generator::independence(), Generator::independence())
                                : generator_pair(r);
    const double k_lo = id == "scale_min_hr" ? 1.0 : 0.2;
    const double k_hi = id == "scale_max_st" ? 1.0 : 4.0;
    const double a = uniform(r, 0.05, 1.0);
    const double k = uniform(r, k_lo, k_hi);
    const double lambda = log_uniform(r, 0.2, 5.0);
    // Either side may be the smoothed one and weak shifts go either way, so
    // draws cover both majorization conventions; the checks pick.
    const bool flip = coin(r);
    auto pair_of = [&](std::vector<double> base, double floor, double max_shift) {
      auto other = smoothed(r, base);
      if (max_shift > 0.0) shift(other, (coin(r) ? 1.0 : -1.0) * uniform(r, 0.0, max_shift), floor);
      return flip ? std::make_pair(other, base) : std::make_pair(base, other);
    };
    if (id.rfind("scale_", 0) == 0) {
      std::vector<double> lx, ly;
      if (id == "scale_min_st") {
        auto [a1, a2] = pair_of(log_vector(draw(r, n, 0.2, 5.0, true)), -10.0, 0.5);
        for (double v : a1) lx.push_back(std::exp(v));
        for (double v : a2) ly.push_back(std::exp(v));
      } else {
        std::tie(lx, ly) = pair_of(draw(r, n, 0.2, 5.0, true), 0.05, id == "scale_max_st" ? 0.5 : 0.0);
      }
      s.system_x = build(common(a), lx, common(k), g1, cp);
      s.system_y = build(common(a), ly, common(k), g2, cp);
    } else if (id.rfind("shape_", 0) == 0) {
      auto [ly, lx] = pair_of(draw(r, n, 0.3, 4.0), 0.0, 0.0);
      s.system_x = build(common(a), common(lambda), lx, g1, cp);
      s.system_y = build(common(a), common(lambda), ly, g2, cp);
    } else if (tilt_theorem) {
      auto [ax, ay] = pair_of(draw(r, n, 0.05, 1.5), 0.02, 0.3);
      s.system_x = build(ax, common(lambda), common(k), g1, cp);
      s.system_y = build(ay, common(lambda), common(k), g2, cp);
    }
  }
  if (t.random_counts) s.counts = count_pair(r, n);
  return s;
}

/// Draws until `instances` instances pass every hypothesis check (or the
/// attempt budget runs out) and records each conclusion that fails.
inline FuzzResult fuzz_theorem(const TheoremSpec& t, const FuzzOptions& opt = {}) {
  FuzzResult res;
  res.theorem = t.id;
  std::mt19937_64 rng(opt.seed ^ fuzz::detail::name_hash(t.id));
  while (res.accepted < opt.instances && res.attempts < opt.max_attempts) {
    ++res.attempts;
    Scenario s = sample_instance(t, rng);
    bool ok = true;
    std::vector<HypothesisResult> hyps;
    for (const auto& h : s.hypothesis_checks) {
      hyps.push_back(
          evaluate_hypothesis(h, s.system_x, s.system_y, s.counts, opt.run.conditions, opt.run.convention));
      if (hyps.back().verdict.status == Status::Inconclusive) ++res.rejected_inconclusive;
      if (!hyps.back().verdict.holds()) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    ++res.accepted;
    TheoremCheck tc = s.counts ? run_random_n_scenario(s, opt.run) : run_scenario(s, opt.run);
    if (!tc.consistent) res.violations.push_back({std::move(s), std::move(tc)});
  }
  return res;
}

}  // namespace eoc
