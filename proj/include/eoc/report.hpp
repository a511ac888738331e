#pragma once

// JSON and CSV rendering of scenario runs. Needs nlohmann/json (json.hpp).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "eoc/scenarios.hpp"

namespace eoc {

namespace report::detail {

// JSON has no inf/nan; those become null.
inline nlohmann::json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

}  // namespace report::detail

inline nlohmann::json to_json(const EwParams& p) { return {{"alpha", p.alpha}, {"lambda", p.lambda}, {"k", p.k}}; }

inline nlohmann::json to_json(const CoupledSystem& s) {
  nlohmann::json m = nlohmann::json::array();
  for (const auto& p : s.marginals) m.push_back(to_json(p));
  std::string fam;
  switch (s.generator.family()) {
    case Family::Independence: fam = "independence"; break;
    case Family::GumbelVariant: fam = "gumbel_variant"; break;
    case Family::ExpReciprocal: fam = "exp_reciprocal"; break;
  }
  return {{"marginals", m},
          {"generator", {{"family", fam}, {"theta", s.generator.theta()}}},
          {"coupling", s.coupling == Coupling::Copula ? "copula" : "survival"}};
}

/// Inverse of to_json(CoupledSystem). Throws ContractError on a malformed
/// document and DomainError on invalid parameters.
inline CoupledSystem system_from_json(const nlohmann::json& j) {
  auto need = [&](const nlohmann::json& o, const char* key) -> const nlohmann::json& {
    if (!o.is_object() || !o.contains(key)) throw ContractError(std::string("system file: missing '") + key + "'");
    return o.at(key);
  };
  CoupledSystem s;
  try {
    for (const auto& m : need(j, "marginals"))
      s.marginals.push_back({need(m, "alpha").get<double>(), need(m, "lambda").get<double>(), need(m, "k").get<double>()});
    const auto& g = need(j, "generator");
    const auto fam = parse_family(need(g, "family").get<std::string>());
    if (!fam) throw ContractError("system file: unknown generator family");
    const double theta = *fam == Family::Independence ? g.value("theta", 0.0) : need(g, "theta").get<double>();
    s.generator = *fam == Family::Independence ? Generator::independence() : Generator(*fam, theta);
    const auto cp = j.value("coupling", std::string("copula"));
    if (cp == "copula")
      s.coupling = Coupling::Copula;
    else if (cp == "survival")
      s.coupling = Coupling::SurvivalCopula;
    else
      throw ContractError("system file: coupling must be 'copula' or 'survival'");
  } catch (const nlohmann::json::exception& e) {
    throw ContractError(std::string("system file: ") + e.what());
  }
  s.validate();
  return s;
}

inline nlohmann::json to_json(const ConditionVerdict& v) {
  nlohmann::json j{{"status", std::string(status_name(v.status))}, {"margin", report::detail::number(v.margin)}};
  if (!v.witness.empty()) j["witness"] = v.witness;
  if (!v.reason.empty()) j["reason"] = v.reason;
  return j;
}

inline nlohmann::json to_json(const HypothesisResult& h) {
  auto j = to_json(h.verdict);
  j["id"] = h.id;
  if (h.ascending) j["status_ascending"] = std::string(status_name(*h.ascending));
  if (h.descending) j["status_descending"] = std::string(status_name(*h.descending));
  return j;
}

inline nlohmann::json to_json(const OrderVerdict& v) {
  nlohmann::json j{{"status", std::string(status_name(v.status))},
                   {"order", std::string(order_name(v.order))},
                   {"x_lo", v.x_lo},
                   {"x_hi", v.x_hi}};
  if (v.witness) {
    j[v.on_levels ? "witness_u" : "witness_x"] = v.witness->at;
    j["gap"] = v.witness->gap;
  }
  if (v.crossing)
    j["crossing"] = {{"x", v.crossing->x}, {"gap_before", v.crossing->gap_before}, {"gap_after", v.crossing->gap_after}};
  if (!v.reason.empty()) j["reason"] = v.reason;
  return j;
}

inline nlohmann::json to_json(const Scenario& s, const TheoremCheck& tc) {
  nlohmann::json hyps = nlohmann::json::array();
  for (const auto& h : tc.hypothesis_results) hyps.push_back(to_json(h));
  nlohmann::json j{{"name", s.name},
                   {"theorem", tc.theorem_id},
                   {"statistic", std::string(extreme_name(s.statistic))},
                   {"order", std::string(order_name(s.order))},
                   {"smaller", s.smaller == Side::X ? "X" : "Y"},
                   {"expected", std::string(expectation_name(s.expected))},
                   {"verdict", to_json(tc.conclusion_verdict)},
                   {"hypotheses", hyps},
                   {"consistent", tc.consistent},
                   {"matches_expected", matches_expectation(s, tc)},
                   {"system_x", to_json(s.system_x)},
                   {"system_y", to_json(s.system_y)}};
  j["system_x"]["generator"]["valid"] = s.system_x.generator.valid_generator();
  j["system_y"]["generator"]["valid"] = s.system_y.generator.valid_generator();
  if (s.counts) {
    auto pmf = [](const CountDistribution& n) {
      nlohmann::json a = nlohmann::json::array();
      for (const auto& [m, p] : n.pmf()) a.push_back({m, p});
      return a;
    };
    j["counts"] = {{"N1", pmf(s.counts->first)}, {"N2", pmf(s.counts->second)}};
  }
  return j;
}

/// x,F_X,F_Y on the pooled log grid of the two extremes.
inline std::string curves_csv(const Scenario& s, int points = 512) {
  GridSpec g;
  g.points = points;
  DistHandle hx, hy;
  if (s.counts) {
    hx = make_mixture_handle(s.system_x, s.counts->first, s.statistic, "X");
    hy = make_mixture_handle(s.system_y, s.counts->second, s.statistic, "Y");
  } else {
    hx = make_handle(s.system_x, s.statistic, "X");
    hy = make_handle(s.system_y, s.statistic, "Y");
  }
  std::string out = "x,F_X,F_Y\n";
  char buf[128];
  for (double x : orders::detail::x_grid(hx, hy, g)) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g\n", x, hx.cdf(x), hy.cdf(x));
    out += buf;
  }
  return out;
}

struct RunSummary {
  nlohmann::json report;
  int scenarios = 0;
  int consistent = 0;
  int matched = 0;

  bool ok() const { return consistent == scenarios && matched == scenarios; }
};

/// Random-count runs on the example marginals: ex1 maxima with N1 uniform on
/// {1, 2} against N2 = 2, and the same pattern for ex2 on {1, 2, 3}.
inline std::vector<Scenario> builtin_random_n_scenarios() {
  std::vector<Scenario> out;
  auto ex1 = *find_scenario("ex1");
  ex1.name = "ex1_random_n";
  ex1.theorem = "random_scale_max_st";
  ex1.hypothesis_checks = find_theorem(ex1.theorem).hypotheses;
  ex1.counts.emplace(CountDistribution::uniform(1, 2), CountDistribution::degenerate(2));
  out.push_back(ex1);
  auto ex2 = *find_scenario("ex2");
  ex2.name = "ex2_random_n";
  ex2.theorem = "random_shape_max_st";
  ex2.hypothesis_checks = find_theorem(ex2.theorem).hypotheses;
  ex2.counts.emplace(CountDistribution::uniform(1, 3), CountDistribution::degenerate(3));
  out.push_back(ex2);
  return out;
}

/// Runs the given scenarios in order and assembles the report. Random-count
/// runs count toward consistency only; they carry no expected verdict.
inline RunSummary run_scenarios(const std::vector<Scenario>& list, const RunOptions& opt = {},
                                const std::vector<Scenario>& random_n = {}) {
  RunSummary sum;
  sum.report["scenarios"] = nlohmann::json::array();
  for (const auto& s : list) {
    const auto tc = run_scenario(s, opt);
    ++sum.scenarios;
    sum.consistent += tc.consistent;
    sum.matched += matches_expectation(s, tc);
    sum.report["scenarios"].push_back(to_json(s, tc));
  }
  if (!random_n.empty()) {
    sum.report["random_n"] = nlohmann::json::array();
    for (const auto& s : random_n) {
      const auto tc = run_random_n_scenario(s, opt);
      auto j = to_json(s, tc);
      j.erase("expected");
      j.erase("matches_expected");
      sum.report["random_n"].push_back(j);
      if (!tc.consistent) --sum.consistent;
    }
  }
  sum.report["summary"] = {{"scenarios", sum.scenarios}, {"consistent", sum.consistent}, {"matched", sum.matched}};
  return sum;
}

/// All builtin scenarios plus the random-count runs; writes the JSON report
/// when a path is given.
inline RunSummary run_all(const std::string& report_path = {}, const RunOptions& opt = {}) {
  auto sum = run_scenarios(builtin_scenarios(), opt, builtin_random_n_scenarios());
  if (!report_path.empty()) {
    std::ofstream f(report_path);
    if (!f) throw ContractError("cannot write " + report_path);
    f << sum.report.dump(2) << '\n';
  }
  return sum;
}

}  // namespace eoc
