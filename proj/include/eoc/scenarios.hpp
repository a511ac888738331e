#pragma once

// Theorem catalog, hypothesis evaluation, and the builtin example systems.
//
// A theorem compares system X against system Y. Its conclusion names the
// order, the extreme, and which side is claimed smaller. Hypotheses are
// evaluated from the systems themselves: vectors are read off the marginals
// (X supplies lambda/k/alpha, Y supplies mu/l/beta).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eoc/conditions.hpp"
#include "eoc/extremes.hpp"
#include "eoc/majorization.hpp"
#include "eoc/orders.hpp"

namespace eoc {

enum class Expectation { Holds, Crosses };

inline std::string_view expectation_name(Expectation e) { return e == Expectation::Holds ? "Holds" : "Crosses"; }

enum class Side { X, Y };

enum class Hyp {
  TiltInUnit,         // every alpha in (0, 1]
  ShapeAtMostOne,     // every k <= 1
  ShapeAtLeastOne,    // every k >= 1
  Superadditive,      // phi_Y o psi_X super-additive
  LogConcavePsi,      // psi_X log-concave
  PhiCondition,       // a t phi_X'' + c phi_X' >= 0; a = common tilt when alpha_coef is NaN
  PsiRatio,           // psi/psi' decreasing and concave
  StarMax,            // max-side star function increasing
  StarMin,            // min-side star function decreasing
  CommonGenerator,    // both systems use the same generator
  IndependenceCopula, // both systems use the independence generator
  ScalesMajorized,    // mu <=^m lambda
  ScalesSuperW,       // mu <=^w lambda
  LogScalesSubW,      // log mu <=_w log lambda
  ShapesMajorized,    // k <=^m l
  TiltsSubW,          // beta <=_w alpha
  TiltsSuperW,        // beta <=^w alpha
  TwoGroupScales,     // (l1 - l2)(m1 - m2) >= 0 and l_max/l_min >= m_max/m_min
  ScaleBelowGeomean,  // common scale of Y <= geometric mean of X's scales
  CountsOrdered,      // N1 <=_st N2
};

struct HypothesisSpec {
  Hyp kind;
  double c = 0.0;
  double alpha_coef = std::numeric_limits<double>::quiet_NaN();
};

std::string hypothesis_id(const HypothesisSpec& h);

struct HypothesisResult {
  std::string id;
  ConditionVerdict verdict;           // under the run's convention
  std::optional<Status> ascending;    // majorization hypotheses only
  std::optional<Status> descending;
};

struct TheoremSpec {
  std::string id;
  Extreme statistic;
  Order order;
  Side smaller;  // conclusion: smaller <=_order the other side
  Coupling coupling;
  bool random_counts = false;
  std::vector<HypothesisSpec> hypotheses;
};

struct Scenario {
  std::string name;
  std::string theorem;  // catalog id whose hypotheses are checked
  CoupledSystem system_x, system_y;
  Extreme statistic = Extreme::Max;
  Order order = Order::St;
  Side smaller = Side::Y;
  std::optional<std::pair<CountDistribution, CountDistribution>> counts;
  Expectation expected = Expectation::Holds;
  std::vector<HypothesisSpec> hypothesis_checks;
};

struct TheoremCheck {
  std::string theorem_id;
  std::vector<HypothesisResult> hypothesis_results;
  OrderVerdict conclusion_verdict;
  bool consistent = true;

  bool hypotheses_hold() const {
    return std::all_of(hypothesis_results.begin(), hypothesis_results.end(),
                       [](const HypothesisResult& h) { return h.verdict.holds(); });
  }
};

struct RunOptions {
  Convention convention = Convention::Ascending;  // decides majorization hypotheses
  GridSpec grid{};
  ConditionGrid conditions{};
  OrderTolerance tol{};
};

inline std::string hypothesis_id(const HypothesisSpec& h) {
  switch (h.kind) {
    case Hyp::TiltInUnit: return "tilt_in_unit";
    case Hyp::ShapeAtMostOne: return "shape_at_most_one";
    case Hyp::ShapeAtLeastOne: return "shape_at_least_one";
    case Hyp::Superadditive: return "superadditive";
    case Hyp::LogConcavePsi: return "log_concave_psi";
    case Hyp::PhiCondition: {
      char buf[64];
      if (std::isnan(h.alpha_coef))
        std::snprintf(buf, sizeof buf, "phi_condition(alpha,%g)", h.c);
      else
        std::snprintf(buf, sizeof buf, "phi_condition(%g,%g)", h.alpha_coef, h.c);
      return buf;
    }
    case Hyp::PsiRatio: return "psi_ratio";
    case Hyp::StarMax: return "star_condition_max";
    case Hyp::StarMin: return "star_condition_min";
    case Hyp::CommonGenerator: return "common_generator";
    case Hyp::IndependenceCopula: return "independence_copula";
    case Hyp::ScalesMajorized: return "scales_majorized";
    case Hyp::ScalesSuperW: return "scales_weak_super";
    case Hyp::LogScalesSubW: return "log_scales_weak_sub";
    case Hyp::ShapesMajorized: return "shapes_majorized";
    case Hyp::TiltsSubW: return "tilts_weak_sub";
    case Hyp::TiltsSuperW: return "tilts_weak_super";
    case Hyp::TwoGroupScales: return "two_group_scales";
    case Hyp::ScaleBelowGeomean: return "scale_below_geomean";
    case Hyp::CountsOrdered: return "counts_st_ordered";
  }
  return "?";
}

namespace scenarios::detail {

inline std::vector<double> scales(const CoupledSystem& s) {
  std::vector<double> v;
  for (const auto& p : s.marginals) v.push_back(p.lambda);
  return v;
}
inline std::vector<double> shapes(const CoupledSystem& s) {
  std::vector<double> v;
  for (const auto& p : s.marginals) v.push_back(p.k);
  return v;
}
inline std::vector<double> tilts(const CoupledSystem& s) {
  std::vector<double> v;
  for (const auto& p : s.marginals) v.push_back(p.alpha);
  return v;
}

inline ConditionVerdict from_margin(double margin, double tol, const char* what) {
  ConditionVerdict v;
  v.margin = margin;
  if (margin < -tol) {
    v.status = Status::FailsAt;
    v.reason = what;
  }
  return v;
}

inline ConditionVerdict bound_check(const std::vector<double>& a, const std::vector<double>& b, double lo,
                                    double hi, bool open_lo, const char* what) {
  ConditionVerdict v;
  for (const auto* vec : {&a, &b}) {
    for (double x : *vec) {
      const double slack = std::min(x - lo, hi - x);
      if (slack < v.margin) {
        v.margin = slack;
        v.witness = {x};
      }
      if ((open_lo && x <= lo) || x < lo || x > hi) {
        v.status = Status::FailsAt;
        v.reason = what;
      }
    }
  }
  return v;
}

// Majorization hypotheses: the verdict under the chosen convention, plus the
// status under each convention for the report.
template <typename SlackFn>
HypothesisResult majorization_result(std::string id, const std::vector<double>& d, const std::vector<double>& c,
                                     SlackFn slack_fn, Convention conv, const char* what) {
  HypothesisResult r;
  r.id = std::move(id);
  r.verdict = from_margin(slack_fn(d, c, conv), kPartialSumTol, what);
  auto status = [&](Convention cv) {
    return slack_fn(d, c, cv) >= -kPartialSumTol ? Status::Holds : Status::FailsAt;
  };
  r.ascending = status(Convention::Ascending);
  r.descending = status(Convention::Descending);
  return r;
}

inline double common_tilt(const CoupledSystem& s) {
  const double a = s.marginals.front().alpha;
  for (const auto& p : s.marginals)
    eoc::detail::require_contract(p.alpha == a, "condition needs a common tilt parameter");
  return a;
}

// Extracts (first, last) distinct values of a two-group vector.
inline std::optional<std::pair<double, double>> two_groups(const std::vector<double>& v) {
  const double a = v.front(), b = v.back();
  for (double x : v)
    if (x != a && x != b) return std::nullopt;
  return std::make_pair(a, b);
}

}  // namespace scenarios::detail

/// Evaluates one hypothesis on a pair of systems (and optional counts).
inline HypothesisResult evaluate_hypothesis(const HypothesisSpec& h, const CoupledSystem& x, const CoupledSystem& y,
                                            const std::optional<std::pair<CountDistribution, CountDistribution>>& counts,
                                            const ConditionGrid& grid = {},
                                            Convention conv = Convention::Ascending) {
  namespace sd = scenarios::detail;
  using MajFn = double (*)(std::span<const double>, std::span<const double>, Convention);
  const auto id = hypothesis_id(h);
  HypothesisResult r;
  r.id = id;
  switch (h.kind) {
    case Hyp::TiltInUnit:
      r.verdict = sd::bound_check(sd::tilts(x), sd::tilts(y), 0.0, 1.0, true, "tilt outside (0, 1]");
      break;
    case Hyp::ShapeAtMostOne:
      r.verdict = sd::bound_check(sd::shapes(x), sd::shapes(y), 0.0, 1.0, true, "shape above 1");
      break;
    case Hyp::ShapeAtLeastOne:
      r.verdict = sd::bound_check(sd::shapes(x), sd::shapes(y), 1.0, std::numeric_limits<double>::infinity(),
                                  false, "shape below 1");
      break;
    case Hyp::Superadditive: r.verdict = check_superadditive(x.generator, y.generator, grid); break;
    case Hyp::LogConcavePsi: r.verdict = check_log_concave_psi(x.generator, grid); break;
    case Hyp::PhiCondition: {
      const double a = std::isnan(h.alpha_coef) ? sd::common_tilt(x) : h.alpha_coef;
      r.verdict = check_phi_condition(x.generator, h.c, a, grid);
      break;
    }
    case Hyp::PsiRatio: r.verdict = check_psi_ratio(x.generator, grid); break;
    case Hyp::StarMax: r.verdict = check_star_condition_max(x.generator, sd::common_tilt(x), grid); break;
    case Hyp::StarMin: r.verdict = check_star_condition_min(x.generator, sd::common_tilt(x), grid); break;
    case Hyp::CommonGenerator:
      r.verdict = x.generator == y.generator ? ConditionVerdict{}
                                             : ConditionVerdict{Status::FailsAt, {}, -1.0, "generators differ"};
      break;
    case Hyp::IndependenceCopula: {
      const bool ok = x.generator.family() == Family::Independence && y.generator.family() == Family::Independence;
      r.verdict = ok ? ConditionVerdict{} : ConditionVerdict{Status::FailsAt, {}, -1.0, "not the independence copula"};
      break;
    }
    case Hyp::ScalesMajorized:
      return sd::majorization_result(id, sd::scales(x), sd::scales(y), static_cast<MajFn>(majorization_slack), conv,
                                     "mu not majorized by lambda");
    case Hyp::ScalesSuperW:
      return sd::majorization_result(id, sd::scales(x), sd::scales(y),
                                     static_cast<MajFn>(weak_supermajorization_slack), conv,
                                     "mu not weakly supermajorized by lambda");
    case Hyp::LogScalesSubW:
      return sd::majorization_result(id, log_vector(sd::scales(x)), log_vector(sd::scales(y)),
                                     static_cast<MajFn>(weak_submajorization_slack), conv,
                                     "log mu not weakly submajorized by log lambda");
    case Hyp::ShapesMajorized:
      return sd::majorization_result(id, sd::shapes(y), sd::shapes(x), static_cast<MajFn>(majorization_slack), conv,
                                     "k not majorized by l");
    case Hyp::TiltsSubW:
      return sd::majorization_result(id, sd::tilts(x), sd::tilts(y), static_cast<MajFn>(weak_submajorization_slack), conv,
                                     "beta not weakly submajorized by alpha");
    case Hyp::TiltsSuperW:
      return sd::majorization_result(id, sd::tilts(x), sd::tilts(y),
                                     static_cast<MajFn>(weak_supermajorization_slack), conv,
                                     "beta not weakly supermajorized by alpha");
    case Hyp::TwoGroupScales: {
      const auto lx = sd::two_groups(sd::scales(x)), ly = sd::two_groups(sd::scales(y));
      if (!lx || !ly || x.size() != y.size()) {
        r.verdict = ConditionVerdict{Status::FailsAt, {}, -1.0, "scales are not two matching groups"};
        break;
      }
      const auto [l1, l2] = *lx;
      const auto [m1, m2] = *ly;
      const double same_side = (l1 - l2) * (m1 - m2);
      const double spread = std::max(l1, l2) / std::min(l1, l2) - std::max(m1, m2) / std::min(m1, m2);
      r.verdict = sd::from_margin(std::min(same_side, spread), 1e-12, "two-group scale condition violated");
      r.verdict.witness = {l1, l2, m1, m2};
      break;
    }
    case Hyp::ScaleBelowGeomean: {
      double lg = 0.0;
      for (double l : sd::scales(x)) lg += std::log(l);
      const double gm = std::exp(lg / static_cast<double>(x.size()));
      double worst = std::numeric_limits<double>::infinity();
      for (double m : sd::scales(y)) worst = std::min(worst, gm - m);
      r.verdict = sd::from_margin(worst, 1e-12 * gm, "scale above the geometric mean");
      r.verdict.witness = {gm};
      break;
    }
    case Hyp::CountsOrdered:
      if (!counts) {
        r.verdict = ConditionVerdict{Status::Inconclusive, {}, std::numeric_limits<double>::quiet_NaN(),
                                     "no count distributions"};
      } else {
        r.verdict = count_st_leq(counts->first, counts->second)
                        ? ConditionVerdict{}
                        : ConditionVerdict{Status::FailsAt, {}, -1.0, "N1 not <=_st N2"};
      }
      break;
  }
  return r;
}

/// Theorem catalog. Ids name the compared parameter, the extreme, and the order;
/// a "random_" prefix marks the random-sample-size versions.
inline const std::vector<TheoremSpec>& theorem_catalog() {
  static const std::vector<TheoremSpec> cat = [] {
    using H = HypothesisSpec;
    const auto nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<TheoremSpec> c{
        {"scale_min_st", Extreme::Min, Order::St, Side::X, Coupling::SurvivalCopula, false,
         {{Hyp::TiltInUnit}, {Hyp::Superadditive}, {Hyp::LogConcavePsi}, {Hyp::LogScalesSubW}}},
        {"scale_max_st", Extreme::Max, Order::St, Side::Y, Coupling::Copula, false,
         {{Hyp::TiltInUnit}, {Hyp::ShapeAtMostOne}, {Hyp::Superadditive}, {Hyp::ScalesSuperW}}},
        {"shape_max_st", Extreme::Max, Order::St, Side::Y, Coupling::Copula, false,
         {{Hyp::TiltInUnit}, {Hyp::Superadditive}, H{Hyp::PhiCondition, 1.0, nan}, {Hyp::ShapesMajorized}}},
        {"shape_min_st", Extreme::Min, Order::St, Side::X, Coupling::SurvivalCopula, false,
         {{Hyp::TiltInUnit}, {Hyp::Superadditive}, H{Hyp::PhiCondition, 1.0, 1.0}, {Hyp::ShapesMajorized}}},
        {"tilt_max_st", Extreme::Max, Order::St, Side::Y, Coupling::Copula, false,
         {{Hyp::Superadditive}, H{Hyp::PhiCondition, 2.0, 1.0}, {Hyp::TiltsSubW}}},
        {"tilt_min_st", Extreme::Min, Order::St, Side::Y, Coupling::SurvivalCopula, false,
         {{Hyp::Superadditive}, {Hyp::TiltsSuperW}}},
        {"scale_min_hr", Extreme::Min, Order::Hr, Side::X, Coupling::SurvivalCopula, false,
         {{Hyp::IndependenceCopula}, {Hyp::TiltInUnit}, {Hyp::ShapeAtLeastOne}, {Hyp::ScalesMajorized}}},
        {"tilt_min_hr", Extreme::Min, Order::Hr, Side::X, Coupling::SurvivalCopula, false,
         {{Hyp::IndependenceCopula}, {Hyp::TiltsSuperW}}},
        {"tilt_max_rh", Extreme::Max, Order::Rh, Side::X, Coupling::Copula, false,
         {{Hyp::IndependenceCopula}, {Hyp::TiltsSuperW}}},
        {"scale_max_star", Extreme::Max, Order::Star, Side::Y, Coupling::Copula, false,
         {{Hyp::CommonGenerator}, {Hyp::StarMax}, {Hyp::ShapeAtMostOne}, {Hyp::TwoGroupScales}}},
        {"scale_max_lorenz", Extreme::Max, Order::Lorenz, Side::Y, Coupling::Copula, false,
         {{Hyp::CommonGenerator}, {Hyp::StarMax}, {Hyp::ShapeAtMostOne}, {Hyp::TwoGroupScales}}},
        {"scale_min_star", Extreme::Min, Order::Star, Side::Y, Coupling::SurvivalCopula, false,
         {{Hyp::CommonGenerator}, {Hyp::StarMin}, {Hyp::ShapeAtMostOne}, {Hyp::TwoGroupScales}}},
        {"scale_min_lorenz", Extreme::Min, Order::Lorenz, Side::Y, Coupling::SurvivalCopula, false,
         {{Hyp::CommonGenerator}, {Hyp::StarMin}, {Hyp::ShapeAtMostOne}, {Hyp::TwoGroupScales}}},
        {"scale_min_disp", Extreme::Min, Order::Disp, Side::X, Coupling::SurvivalCopula, false,
         {{Hyp::CommonGenerator}, {Hyp::ShapeAtMostOne}, {Hyp::TiltInUnit}, {Hyp::ScaleBelowGeomean},
          {Hyp::PsiRatio}}},
    };
    auto randomized = [&](const std::string& base, Side smaller) {
      auto it = std::find_if(c.begin(), c.end(), [&](const TheoremSpec& t) { return t.id == base; });
      TheoremSpec t = *it;
      t.id = "random_" + base;
      t.smaller = smaller;
      t.random_counts = true;
      t.hypotheses.push_back({Hyp::CountsOrdered});
      return t;
    };
    // Stated directions: the side with the smaller count is claimed smaller
    // only for the tilt/minimum version; the others claim the reverse.
    const std::vector<TheoremSpec> extra{randomized("scale_min_st", Side::X), randomized("scale_max_st", Side::Y),
                                         randomized("shape_max_st", Side::Y), randomized("shape_min_st", Side::X),
                                         randomized("tilt_max_st", Side::Y), randomized("tilt_min_st", Side::Y)};
    c.insert(c.end(), extra.begin(), extra.end());
    return c;
  }();
  return cat;
}

inline const TheoremSpec& find_theorem(std::string_view id) {
  for (const auto& t : theorem_catalog())
    if (t.id == id) return t;
  throw ContractError("unknown theorem id " + std::string(id));
}

namespace scenarios::detail {

inline CoupledSystem system(std::vector<EwParams> m, Generator g, Coupling c = Coupling::Copula) {
  CoupledSystem s;
  s.marginals = std::move(m);
  s.generator = g;
  s.coupling = c;
  return s;
}

inline std::vector<EwParams> scale_family(double alpha, std::vector<double> lambdas, double k) {
  std::vector<EwParams> out;
  for (double l : lambdas) out.push_back({alpha, l, k});
  return out;
}

inline std::vector<EwParams> shape_family(double alpha, double lambda, std::vector<double> ks) {
  std::vector<EwParams> out;
  for (double k : ks) out.push_back({alpha, lambda, k});
  return out;
}

inline std::vector<EwParams> tilt_family(std::vector<double> alphas, double lambda, double k) {
  std::vector<EwParams> out;
  for (double a : alphas) out.push_back({a, lambda, k});
  return out;
}

inline Scenario make(std::string name, std::string theorem, CoupledSystem x, CoupledSystem y, Expectation e) {
  const auto& t = find_theorem(theorem);
  Scenario s;
  s.name = std::move(name);
  s.theorem = std::move(theorem);
  s.system_x = std::move(x);
  s.system_y = std::move(y);
  s.statistic = Extreme::Max;
  s.order = Order::St;
  s.smaller = Side::Y;  // every example asserts F_X <= F_Y for the maxima
  s.expected = e;
  s.hypothesis_checks = t.hypotheses;
  return s;
}

}  // namespace scenarios::detail

/// The seven example/counterexample systems, all comparing parallel systems
/// (maxima) in the usual stochastic order with Y claimed smaller.
inline std::vector<Scenario> builtin_scenarios() {
  using namespace scenarios::detail;
  const auto G = Generator::gumbel_variant;
  const auto E = Generator::exp_reciprocal;
  std::vector<Scenario> out;
  out.push_back(make("ex1", "scale_max_st", system(scale_family(0.6, {0.46, 0.5}, 0.9), G(8.9)),
                     system(scale_family(0.6, {1.7, 0.43}, 0.9), G(3.05)), Expectation::Holds));
  out.push_back(make("cex1", "scale_max_st", system(scale_family(0.6, {0.46, 0.5}, 8.06), G(8.9)),
                     system(scale_family(0.6, {1.7, 0.43}, 8.06), G(3.05)), Expectation::Crosses));
  // conditions of the minimum/scale theorem, applied to maxima
  out.push_back(make("cex1_1", "scale_min_st", system(scale_family(0.55, {2.14, 1.4, 1.0}, 1.63), G(3.0)),
                     system(scale_family(0.55, {0.77, 0.8, 0.8}, 1.63), G(0.6)), Expectation::Crosses));
  out.push_back(make("ex2", "shape_max_st", system(shape_family(0.5, 4.83, {3.0, 0.5, 1.0}), E(2.2)),
                     system(shape_family(0.5, 4.83, {2.0, 1.5, 1.0}), E(2.45)), Expectation::Holds));
  out.push_back(make("cex2", "shape_max_st", system(shape_family(0.5, 4.83, {0.5, 1.0, 3.0}), E(2.48)),
                     system(shape_family(0.5, 4.83, {1.0, 1.5, 2.0}), E(2.24)), Expectation::Crosses));
  out.push_back(make("ex3", "tilt_max_st", system(tilt_family({0.4, 0.9, 0.1}, 5.37, 5.67), E(2.4)),
                     system(tilt_family({0.5, 0.8, 0.1}, 5.37, 5.67), E(3.7)), Expectation::Holds));
  out.push_back(make("cex3", "tilt_max_st", system(tilt_family({0.82, 0.85, 0.95}, 12.5, 3.16), E(22.6)),
                     system(tilt_family({0.4, 0.84, 0.87}, 12.5, 3.16), E(10.7)), Expectation::Crosses));
  return out;
}

inline std::vector<std::string> builtin_names() {
  std::vector<std::string> n;
  for (const auto& s : builtin_scenarios()) n.push_back(s.name);
  return n;
}

inline std::optional<Scenario> find_scenario(std::string_view name) {
  for (auto& s : builtin_scenarios())
    if (s.name == name) return s;
  return std::nullopt;
}

namespace scenarios::detail {

inline std::pair<DistHandle, DistHandle> ordered_handles(const Scenario& s) {
  DistHandle hx, hy;
  if (s.counts) {
    hx = make_mixture_handle(s.system_x, s.counts->first, s.statistic, "X");
    hy = make_mixture_handle(s.system_y, s.counts->second, s.statistic, "Y");
  } else {
    hx = make_handle(s.system_x, s.statistic, "X");
    hy = make_handle(s.system_y, s.statistic, "Y");
  }
  if (s.smaller == Side::X) return {hx, hy};
  return {hy, hx};
}

inline TheoremCheck run(const Scenario& s, const RunOptions& opt) {
  TheoremCheck tc;
  tc.theorem_id = s.theorem;
  for (const auto& h : s.hypothesis_checks)
    tc.hypothesis_results.push_back(
        evaluate_hypothesis(h, s.system_x, s.system_y, s.counts, opt.conditions, opt.convention));
  const auto [a, b] = ordered_handles(s);
  tc.conclusion_verdict = check_order(s.order, a, b, opt.grid, opt.tol);
  if (s.expected == Expectation::Crosses && s.order == Order::St && !tc.conclusion_verdict.crossing)
    tc.conclusion_verdict.crossing = find_crossing(a, b, opt.grid, opt.tol);
  tc.consistent = !tc.hypotheses_hold() || tc.conclusion_verdict.holds();
  return tc;
}

}  // namespace scenarios::detail

/// Fixed-n run. Both systems must be usable for the requested extreme.
inline TheoremCheck run_scenario(const Scenario& s, const RunOptions& opt = {}) {
  s.system_x.validate();
  s.system_y.validate();
  return scenarios::detail::run(s, opt);
}

/// Random-sample-size run: compares count mixtures of the extreme.
inline TheoremCheck run_random_n_scenario(const Scenario& s, const RunOptions& opt = {}) {
  eoc::detail::require_contract(s.counts.has_value(), "random-N scenario needs count distributions");
  eoc::detail::require_contract(count_st_leq(s.counts->first, s.counts->second), "counts must satisfy N1 <=_st N2");
  s.system_x.validate();
  s.system_y.validate();
  return scenarios::detail::run(s, opt);
}

/// Whether a run reproduces the expected verdict: Holds, or a located
/// crossing with a probability gap above min_gap on each side.
inline bool matches_expectation(const Scenario& s, const TheoremCheck& tc, double min_gap = 1e-6) {
  const auto& v = tc.conclusion_verdict;
  if (s.expected == Expectation::Holds) return v.holds();
  return v.status == Status::FailsAt && v.crossing && std::abs(v.crossing->gap_before) > min_gap &&
         std::abs(v.crossing->gap_after) > min_gap;
}

}  // namespace eoc
