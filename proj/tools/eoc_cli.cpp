// eoc: evaluate extended-Weibull extremes and check stochastic orders.
//
//   eoc eval --alpha 1 --lambda 1 --k 1 --cdf --x 0.693147
//   eoc eval --system sys.json --max --cdf --x 1.0
//   eoc check --order st --max smaller.json larger.json
//   eoc scenario --all --out report.json
//   eoc majorize --c 1,1,1 --d 0,1,2 --rel m
//   eoc conditions --check superadditive --family gumbel_variant --theta 3 --family2 gumbel_variant --theta2 1.5
//
// Exit codes: 0 ok/Holds, 2 usage, 3 FailsAt, 4 Inconclusive.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "eoc/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitFails = 3;
constexpr int kExitInconclusive = 4;

int exit_code(eoc::Status s) {
  switch (s) {
    case eoc::Status::Holds: return kExitOk;
    case eoc::Status::FailsAt: return kExitFails;
    case eoc::Status::Inconclusive: return kExitInconclusive;
  }
  return kExitUsage;
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

eoc::CoupledSystem load_system(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read system file " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
  return eoc::system_from_json(j);
}

// EOC_GRID_POINTS overrides the default order-check grid; an explicit flag wins.
int grid_points(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("EOC_GRID_POINTS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 16 || v > 1 << 22)
      throw UsageError("EOC_GRID_POINTS must be an integer in [16, 4194304]");
    return static_cast<int>(v);
  }
  return eoc::GridSpec{}.points;
}

const CLI::Validator kOpenUnit = CLI::Validator(
    [](std::string& s) -> std::string {
      double v = 0.0;
      if (!CLI::detail::lexical_cast(s, v)) return "not a number: " + s;
      return v > 0.0 && v < 1.0 ? std::string() : "value " + s + " outside (0, 1)";
    },
    "in (0, 1)");

// ---- eval -------------------------------------------------------------------

struct EvalArgs {
  std::optional<double> alpha, lambda, k;
  std::string system;
  bool min = false, max = false;
  bool cdf = false, sf = false, pdf = false, hazard = false, quantile = false;
  std::vector<double> xs, us;
  bool json = false;
};

int run_eval(const EvalArgs& a) {
  const bool marginal = a.alpha || a.lambda || a.k;
  if (marginal == !a.system.empty()) throw UsageError("give either --alpha/--lambda/--k or --system");
  if (marginal && !(a.alpha && a.lambda && a.k)) throw UsageError("--alpha, --lambda and --k go together");
  if (!marginal && a.min == a.max) throw UsageError("--system needs exactly one of --min, --max");
  if (!(a.cdf || a.sf || a.pdf || a.hazard || a.quantile)) throw UsageError("choose at least one quantity");
  if ((a.cdf || a.sf || a.pdf || a.hazard) && a.xs.empty()) throw UsageError("--x is required for cdf/sf/pdf/hazard");
  if (a.quantile && a.us.empty()) throw UsageError("--u is required for --quantile");

  eoc::DistHandle h;
  if (marginal) {
    h = eoc::make_handle(eoc::EwParams{*a.alpha, *a.lambda, *a.k});
  } else {
    h = eoc::make_handle(load_system(a.system), a.max ? eoc::Extreme::Max : eoc::Extreme::Min);
  }
  for (double x : a.xs)
    if (!(x >= 0.0)) throw UsageError("--x values must be >= 0");

  nlohmann::json out = nlohmann::json::array();
  auto emit = [&](const char* what, const char* arg, double at, double v) {
    if (a.json)
      out.push_back({{"quantity", what}, {arg, at}, {"value", v}});
    else
      std::cout << what << '(' << num(at) << ") = " << num(v) << '\n';
  };
  for (double x : a.xs) {
    if (a.cdf) emit("cdf", "x", x, h.cdf(x));
    if (a.sf) emit("sf", "x", x, h.sf(x));
    if (a.pdf) emit("pdf", "x", x, h.pdf(x));
    if (a.hazard) emit("hazard", "x", x, h.hazard_at(x));
  }
  if (a.quantile)
    for (double u : a.us) emit("quantile", "u", u, h.quantile(u));
  if (a.json) std::cout << out.dump(2) << '\n';
  return kExitOk;
}

// ---- check ------------------------------------------------------------------

struct CheckArgs {
  std::string order;
  bool min = false, max = false;
  std::string a_path, b_path;
  int points = 0;
  double lo_q = 1e-6, hi_q = 1.0 - 1e-6;
  eoc::OrderTolerance tol;
  bool json = false;
};

int run_check(const CheckArgs& c) {
  const auto order = eoc::parse_order(c.order);
  if (!order) throw UsageError("--order must be one of st, hr, rh, disp, star, lorenz");
  if (c.min == c.max) throw UsageError("give exactly one of --min, --max");
  const auto which = c.max ? eoc::Extreme::Max : eoc::Extreme::Min;
  eoc::GridSpec g;
  g.points = grid_points(c.points);
  g.lo_quantile = c.lo_q;
  g.hi_quantile = c.hi_q;
  g.validate();
  const auto a = eoc::make_handle(load_system(c.a_path), which, "A");
  const auto b = eoc::make_handle(load_system(c.b_path), which, "B");
  const auto v = eoc::check_order(*order, a, b, g, c.tol);
  if (c.json) {
    std::cout << eoc::to_json(v).dump(2) << '\n';
  } else {
    std::cout << "A <=_" << eoc::order_name(v.order) << " B: " << eoc::status_name(v.status) << '\n';
    if (v.witness)
      std::cout << (v.on_levels ? "witness u = " : "witness x = ") << num(v.witness->at)
                << "  gap = " << num(v.witness->gap) << '\n';
    if (v.crossing)
      std::cout << "crossing x = " << num(v.crossing->x) << "  gap before = " << num(v.crossing->gap_before)
                << "  gap after = " << num(v.crossing->gap_after) << '\n';
    if (!v.reason.empty()) std::cout << "reason: " << v.reason << '\n';
  }
  return exit_code(v.status);
}

// ---- scenario ---------------------------------------------------------------

struct ScenarioArgs {
  std::string name;
  bool all = false;
  std::string out;
  std::string csv;
  std::string csv_dir;
  int points = 0;
  std::string convention = "ascending";
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

int run_scenario_cmd(const ScenarioArgs& a) {
  if (a.all == !a.name.empty()) throw UsageError("give a scenario name or --all");
  if (!a.csv.empty() && a.all) throw UsageError("--csv takes a single scenario; use --csv-dir with --all");
  eoc::RunOptions opt;
  opt.grid.points = grid_points(a.points);
  if (a.convention == "descending")
    opt.convention = eoc::Convention::Descending;
  else if (a.convention != "ascending")
    throw UsageError("--convention must be ascending or descending");

  std::vector<eoc::Scenario> list;
  if (a.all) {
    list = eoc::builtin_scenarios();
  } else {
    auto s = eoc::find_scenario(a.name);
    if (!s) {
      std::string names;
      for (const auto& n : eoc::builtin_names()) names += " " + n;
      throw UsageError("unknown scenario '" + a.name + "'; valid names:" + names);
    }
    list.push_back(*s);
  }
  const auto sum = a.all ? eoc::run_scenarios(list, opt, eoc::builtin_random_n_scenarios())
                         : eoc::run_scenarios(list, opt);
  for (const auto& b : sum.report["scenarios"]) {
    std::printf("%-8s expected %-7s verdict %-12s consistent %-5s matches %s\n", b["name"].get<std::string>().c_str(),
                b["expected"].get<std::string>().c_str(), b["verdict"]["status"].get<std::string>().c_str(),
                b["consistent"].get<bool>() ? "yes" : "no", b["matches_expected"].get<bool>() ? "yes" : "no");
  }
  if (sum.report.contains("random_n"))
    for (const auto& b : sum.report["random_n"])
      std::printf("%-14s verdict %-12s consistent %s\n", b["name"].get<std::string>().c_str(),
                  b["verdict"]["status"].get<std::string>().c_str(), b["consistent"].get<bool>() ? "yes" : "no");

  if (!a.out.empty()) write_file(a.out, sum.report.dump(2) + "\n");
  if (!a.csv.empty()) write_file(a.csv, eoc::curves_csv(list.front()));
  if (!a.csv_dir.empty()) {
    std::filesystem::create_directories(a.csv_dir);
    for (const auto& s : list) write_file((std::filesystem::path(a.csv_dir) / (s.name + ".csv")).string(),
                                          eoc::curves_csv(s));
  }
  return sum.consistent == sum.scenarios ? kExitOk : kExitFails;
}

// ---- majorize ---------------------------------------------------------------

struct MajorizeArgs {
  std::vector<double> c, d;
  std::string rel;
};

int run_majorize(const MajorizeArgs& a) {
  if (a.c.size() != a.d.size()) throw UsageError("--c and --d must have the same length");
  using Fn = bool (*)(std::span<const double>, std::span<const double>, eoc::Convention);
  Fn fn = nullptr;
  const char* label = nullptr;
  if (a.rel == "m") {
    fn = eoc::majorizes;
    label = "c <=^m d";
  } else if (a.rel == "subw") {
    fn = eoc::weak_submajorizes;
    label = "c <=_w d";
  } else if (a.rel == "superw") {
    fn = eoc::weak_supermajorizes;
    label = "c <=^w d";
  } else {
    throw UsageError("--rel must be m, subw or superw");
  }
  std::cout << label << '\n';
  std::cout << "ascending: " << (fn(a.d, a.c, eoc::Convention::Ascending) ? "true" : "false") << '\n';
  std::cout << "descending: " << (fn(a.d, a.c, eoc::Convention::Descending) ? "true" : "false") << '\n';
  return kExitOk;
}

// ---- conditions -------------------------------------------------------------

struct ConditionArgs {
  std::string check;
  std::string family, family2;
  double theta = 0.0, theta2 = 0.0;
  double c = 1.0, alpha = 1.0;
  int points = 0;
  bool json = false;
};

eoc::Generator make_generator(const std::string& fam, double theta, const char* flag) {
  const auto f = eoc::parse_family(fam);
  if (!f) throw UsageError(std::string(flag) + " must be independence, gumbel_variant or exp_reciprocal");
  if (*f == eoc::Family::Independence) return eoc::Generator::independence();
  return eoc::Generator(*f, theta);
}

int run_conditions(const ConditionArgs& a) {
  eoc::ConditionGrid grid;
  if (a.points > 0) grid.points = a.points;
  const auto g = make_generator(a.family, a.theta, "--family");
  eoc::ConditionVerdict v;
  if (a.check == "superadditive") {
    if (a.family2.empty()) throw UsageError("superadditive needs --family2");
    v = eoc::check_superadditive(g, make_generator(a.family2, a.theta2, "--family2"), grid);
  } else if (a.check == "log_concave") {
    v = eoc::check_log_concave_psi(g, grid);
  } else if (a.check == "phi") {
    v = eoc::check_phi_condition(g, a.c, a.alpha, grid);
  } else if (a.check == "psi_ratio") {
    v = eoc::check_psi_ratio(g, grid);
  } else if (a.check == "star_max") {
    v = eoc::check_star_condition_max(g, a.alpha, grid);
  } else if (a.check == "star_min") {
    v = eoc::check_star_condition_min(g, a.alpha, grid);
  } else {
    throw UsageError("--check must be superadditive, log_concave, phi, psi_ratio, star_max or star_min");
  }
  if (a.json) {
    std::cout << eoc::to_json(v).dump(2) << '\n';
  } else {
    std::cout << a.check << ": " << eoc::status_name(v.status) << "  margin = " << num(v.margin) << '\n';
    if (!v.witness.empty()) {
      std::cout << "witness =";
      for (double w : v.witness) std::cout << ' ' << num(w);
      std::cout << '\n';
    }
    if (!v.reason.empty()) std::cout << "reason: " << v.reason << '\n';
  }
  return exit_code(v.status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extremes of dependent extended-Weibull components: distributions and stochastic orders"};
  app.require_subcommand(1);

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Evaluate an EW marginal or a coupled extreme");
  eval->add_option("--alpha", ev.alpha, "tilt");
  eval->add_option("--lambda", ev.lambda, "scale");
  eval->add_option("--k", ev.k, "shape");
  eval->add_option("--system", ev.system, "system file (JSON)")->check(CLI::ExistingFile);
  eval->add_flag("--min", ev.min, "series system (minimum)");
  eval->add_flag("--max", ev.max, "parallel system (maximum)");
  eval->add_flag("--cdf", ev.cdf);
  eval->add_flag("--sf", ev.sf);
  eval->add_flag("--pdf", ev.pdf);
  eval->add_flag("--hazard", ev.hazard);
  eval->add_flag("--quantile", ev.quantile);
  eval->add_option("--x", ev.xs, "evaluation points")->delimiter(',');
  eval->add_option("--u", ev.us, "quantile levels")->delimiter(',')->check(kOpenUnit);
  eval->add_flag("--json", ev.json);

  CheckArgs ck;
  auto* check = app.add_subcommand("check", "Check A <=_order B for two systems' extremes");
  check->add_option("--order", ck.order, "st, hr, rh, disp, star or lorenz")->required();
  check->add_flag("--min", ck.min);
  check->add_flag("--max", ck.max);
  check->add_option("a", ck.a_path, "system A (JSON)")->required()->check(CLI::ExistingFile);
  check->add_option("b", ck.b_path, "system B (JSON)")->required()->check(CLI::ExistingFile);
  check->add_option("--points", ck.points, "grid points (default 2048, or EOC_GRID_POINTS)")
      ->check(CLI::Range(16, 1 << 22));
  check->add_option("--lo-quantile", ck.lo_q, "lower grid quantile")->check(kOpenUnit);
  check->add_option("--hi-quantile", ck.hi_q, "upper grid quantile")->check(kOpenUnit);
  check->add_option("--tol-prob", ck.tol.prob, "probability tolerance")->check(CLI::PositiveNumber);
  check->add_option("--tol-rate", ck.tol.rate, "relative rate tolerance")->check(CLI::PositiveNumber);
  check->add_option("--tol-quantile", ck.tol.quantile, "relative quantile tolerance")->check(CLI::PositiveNumber);
  check->add_flag("--json", ck.json);

  ScenarioArgs sc;
  auto* scen = app.add_subcommand("scenario", "Run builtin example scenarios");
  scen->add_option("name", sc.name, "scenario name");
  scen->add_flag("--all", sc.all, "run every builtin scenario plus the random-count runs");
  scen->add_option("--out", sc.out, "JSON report path");
  scen->add_option("--csv", sc.csv, "x,F_X,F_Y curve file for a single scenario");
  scen->add_option("--csv-dir", sc.csv_dir, "directory for per-scenario curve files");
  scen->add_option("--points", sc.points, "order-check grid points")->check(CLI::Range(16, 1 << 22));
  scen->add_option("--convention", sc.convention, "majorization convention: ascending or descending");

  MajorizeArgs mj;
  auto* maj = app.add_subcommand("majorize", "Majorization relations under both conventions");
  maj->add_option("--c", mj.c, "vector c")->required()->delimiter(',');
  maj->add_option("--d", mj.d, "vector d")->required()->delimiter(',');
  maj->add_option("--rel", mj.rel, "m, subw or superw")->required();

  ConditionArgs cd;
  auto* cond = app.add_subcommand("conditions", "Generator side conditions");
  cond->add_option("--check", cd.check, "superadditive, log_concave, phi, psi_ratio, star_max, star_min")
      ->required();
  cond->add_option("--family", cd.family, "generator family")->required();
  cond->add_option("--theta", cd.theta, "generator parameter");
  cond->add_option("--family2", cd.family2, "second generator family (superadditive)");
  cond->add_option("--theta2", cd.theta2, "second generator parameter");
  cond->add_option("--c", cd.c, "phi condition coefficient c");
  cond->add_option("--alpha", cd.alpha, "tilt coefficient");
  cond->add_option("--points", cd.points, "condition grid points")->check(CLI::Range(16, 1 << 16));
  cond->add_flag("--json", cd.json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*eval) return run_eval(ev);
    if (*check) return run_check(ck);
    if (*scen) return run_scenario_cmd(sc);
    if (*maj) return run_majorize(mj);
    if (*cond) return run_conditions(cd);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const eoc::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const eoc::ContractError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const eoc::NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInconclusive;
  }
  return kExitUsage;
}
