#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "eoc/extremes.hpp"
#include "eoc/grid.hpp"
#include "test_support.hpp"

using namespace eoc;
using namespace eoc::extremes;

namespace {

CoupledSystem sys(std::vector<EwParams> m, Generator g, Coupling c = Coupling::Copula) {
  return {std::move(m), g, c};
}

std::vector<Generator> generators() {
  return {Generator::independence(), Generator::gumbel_variant(1.7), Generator::gumbel_variant(8.9),
          Generator::exp_reciprocal(0.4), Generator::exp_reciprocal(2.2), Generator::exp_reciprocal(22.6)};
}

std::vector<CoupledSystem> random_systems(int count, unsigned seed, Coupling c) {
  std::mt19937_64 rng(seed);
  const auto gens = generators();
  std::vector<CoupledSystem> out;
  for (int i = 0; i < count; ++i) {
    const int n = 1 + static_cast<int>(rng() % 4);
    out.push_back(sys(test::random_params(n, static_cast<unsigned>(rng())), gens[rng() % gens.size()], c));
  }
  return out;
}

}  // namespace

TEST(MaxCdf, IndependentIdenticalIsSquare) {
  const EwParams p{0.6, 1.3, 2.0};
  const auto s = sys({p, p}, Generator::independence());
  for (double x : grid::log_spaced(1e-3, 10.0, 100)) EXPECT_NEAR(max_cdf(s, x), std::pow(ew::cdf(p, x), 2), 1e-12);
}

TEST(MaxCdf, SingleMarginal) {
  const EwParams p{0.4, 2.0, 0.7};
  for (const auto& g : generators()) {
    for (double x : grid::log_spaced(1e-3, 10.0, 50)) {
      EXPECT_NEAR(max_cdf(sys({p}, g), x), ew::cdf(p, x), 1e-12) << g.describe();
      EXPECT_NEAR(min_sf(sys({p}, g, Coupling::SurvivalCopula), x), ew::sf(p, x), 1e-12) << g.describe();
    }
  }
}

TEST(MinSf, ExponentialMinimum) {
  const auto s = sys({{1, 0.5, 1}, {1, 1.5, 1}, {1, 2.0, 1}}, Generator::independence(), Coupling::SurvivalCopula);
  for (double x : grid::linear(0.0, 5.0, 50)) EXPECT_NEAR(min_sf(s, x), std::exp(-4.0 * x), 1e-12);
}

TEST(Extremes, IndependenceOracle) {
  for (auto s : random_systems(30, 31, Coupling::Copula)) {
    s.generator = Generator::independence();
    auto sv = s;
    sv.coupling = Coupling::SurvivalCopula;
    for (double x : grid::log_spaced(1e-3, 20.0, 200)) {
      EXPECT_NEAR(max_cdf(s, x), test::product_cdf(s, x), 1e-12);
      EXPECT_NEAR(min_sf(sv, x), test::product_sf(sv, x), 1e-12);
    }
  }
}

TEST(Extremes, FrechetUpperBoundAndMonotone) {
  for (const auto& s : random_systems(40, 32, Coupling::Copula)) {
    auto sv = s;
    sv.coupling = Coupling::SurvivalCopula;
    double prev_c = 0.0, prev_s = 1.0;
    for (double x : grid::log_spaced(1e-4, 30.0, 300)) {
      double min_cdf = 1.0, min_marg_sf = 1.0;
      for (const auto& m : s.marginals) {
        min_cdf = std::min(min_cdf, ew::cdf(m, x));
        min_marg_sf = std::min(min_marg_sf, ew::sf(m, x));
      }
      const double c = max_cdf(s, x), v = min_sf(sv, x);
      EXPECT_LE(c, min_cdf + 1e-14);
      EXPECT_LE(v, min_marg_sf + 1e-14);
      EXPECT_GE(c, prev_c - 1e-15);
      EXPECT_LE(v, prev_s + 1e-15);
      prev_c = c;
      prev_s = v;
    }
    EXPECT_EQ(max_cdf(s, 0.0), 0.0);
    EXPECT_EQ(min_sf(sv, 0.0), 1.0);
    // far enough that every marginal has (lambda x)^k > 800
    double far = 0.0;
    for (const auto& m : s.marginals) far = std::max(far, std::pow(800.0, 1.0 / m.k) / m.lambda);
    EXPECT_NEAR(max_cdf(s, far), 1.0, 1e-15);
    EXPECT_NEAR(min_sf(sv, far), 0.0, 1e-15);
  }
}

TEST(Extremes, CouplingMismatchIsContractError) {
  const auto s = sys({{1, 1, 1}}, Generator::independence());
  auto sv = s;
  sv.coupling = Coupling::SurvivalCopula;
  EXPECT_THROW(min_sf(s, 1.0), ContractError);
  EXPECT_THROW(max_cdf(sv, 1.0), ContractError);
  EXPECT_THROW(max_cdf(sys({}, Generator::independence()), 1.0), ContractError);
}

TEST(ExtremePdf, IndependentIdenticalMax) {
  const EwParams p{0.6, 1.3, 2.0};
  const auto s = sys({p, p}, Generator::independence());
  for (double x : grid::log_spaced(1e-2, 5.0, 50))
    EXPECT_NEAR(extreme_pdf(s, Extreme::Max, x), 2 * ew::cdf(p, x) * ew::pdf(p, x), 1e-12);
}

TEST(ExtremePdf, IntegratesToCdfAndMatchesDifferences) {
  // Panels between quantile levels; each must reproduce the cdf increment.
  // Increments are taken from whichever of cdf / sf is not near 1.
  for (Coupling c : {Coupling::Copula, Coupling::SurvivalCopula}) {
    for (const auto& s : random_systems(15, 33 + static_cast<unsigned>(c), c)) {
      const Extreme w = s.natural_extreme();
      auto pdf = [&](double t) { return extreme_pdf(s, w, t); };
      const auto us = grid::logit(1e-10, 1 - 1e-10, 200);
      double prev = extreme_quantile(s, w, us.front()), total = 0.0, worst = 0.0;
      for (std::size_t i = 1; i < us.size(); ++i) {
        const double x = extreme_quantile(s, w, us[i]);
        if (!(x > prev)) continue;
        const double piece = test::adaptive_gauss(pdf, prev, x, 1e-15);
        const double inc = us[i] < 0.5 ? extreme_cdf(s, w, x) - extreme_cdf(s, w, prev)
                                       : extreme_sf(s, w, prev) - extreme_sf(s, w, x);
        worst = std::max(worst, std::abs(piece - inc));
        total += piece;
        prev = x;
      }
      EXPECT_LT(worst, 1e-12) << s.generator.describe();
      EXPECT_NEAR(total + extreme_cdf(s, w, extreme_quantile(s, w, us.front())) + extreme_sf(s, w, prev), 1.0, 1e-12)
          << s.generator.describe();
      for (double u : {0.05, 0.3, 0.6, 0.95}) {
        const double x = extreme_quantile(s, w, u);
        const double fd = test::central_difference([&](double t) { return extreme_cdf(s, w, t); }, x);
        EXPECT_LT(test::rel_err(fd, extreme_pdf(s, w, x)), 1e-6) << s.generator.describe() << " x=" << x;
      }
    }
  }
}

TEST(ExtremePdf, ExpReciprocalLowerTailIsNearlyComonotone) {
  // psi varies slowly, so for small u the copula is min(u) to many digits and the
  // density jumps where two marginal cdfs cross.
  const std::vector<EwParams> m{{0.7784660183712836, 0.11336067079119171, 1.5873622722756737},
                                {0.42671663240823038, 2.3480477184730981, 2.9181205805219661}};
  const auto s = sys(m, Generator::exp_reciprocal(2.2));
  for (double x : {0.00728, 0.0073, 0.00731})
    EXPECT_NEAR(max_cdf(s, x), std::min(ew::cdf(m[0], x), ew::cdf(m[1], x)), 1e-12);
  EXPECT_GT(extreme_pdf(s, Extreme::Max, 0.00729) / extreme_pdf(s, Extreme::Max, 0.00731), 1.5);
}

TEST(MinHazard, Identities) {
  const EwParams p{0.5, 1.0, 1.0};
  std::vector<EwParams> one{p};
  EXPECT_NEAR(min_hazard_independent(one, 0.7), ew::hazard(p, 0.7), 1e-15);
  std::vector<EwParams> expo{{1, 0.5, 1}, {1, 2.5, 1}};
  for (double x : {0.1, 1.0, 7.0}) EXPECT_NEAR(min_hazard_independent(expo, x), 3.0, 1e-13);
  EXPECT_THROW(min_hazard_independent(std::span<const EwParams>{}, 1.0), ContractError);
}

TEST(MinHazard, EqualsDensityOverSurvival) {
  std::mt19937_64 rng(34);
  for (int cfg = 0; cfg < 20; ++cfg) {
    auto ps = test::random_params(3, static_cast<unsigned>(rng()));
    for (auto& p : ps) p = {ps[0].alpha, p.lambda, ps[0].k};
    const auto s = sys(ps, Generator::independence(), Coupling::SurvivalCopula);
    for (double u : grid::linear(0.01, 0.99, 30)) {
      const double x = extreme_quantile(s, Extreme::Min, u);
      EXPECT_LT(test::rel_err(min_hazard_independent(ps, x), extreme_pdf(s, Extreme::Min, x) / min_sf(s, x)), 1e-10);
    }
  }
}

TEST(ExtremeQuantile, SingleAndSquare) {
  const EwParams p{0.3, 0.8, 1.4};
  for (double u : grid::linear(1e-3, 1 - 1e-3, 50)) {
    EXPECT_NEAR(extreme_quantile(sys({p}, Generator::gumbel_variant(2.0)), Extreme::Max, u), ew::quantile(p, u),
                1e-9);
    EXPECT_NEAR(extreme_quantile(sys({p, p}, Generator::independence()), Extreme::Max, u),
                ew::quantile(p, std::sqrt(u)), 1e-9);
  }
  EXPECT_THROW(extreme_quantile(sys({p}, Generator::independence()), Extreme::Max, 1.0), DomainError);
}

TEST(ExtremeQuantile, Roundtrip) {
  for (Coupling c : {Coupling::Copula, Coupling::SurvivalCopula}) {
    for (const auto& s : random_systems(30, 35 + static_cast<unsigned>(c), c)) {
      const Extreme w = s.natural_extreme();
      for (double u : grid::logit(1e-4, 1 - 1e-4, 60))
        EXPECT_NEAR(extreme_cdf(s, w, extreme_quantile(s, w, u)), u, 1e-10) << s.generator.describe();
    }
  }
}

TEST(Mixture, DegenerateCountsReproduceFixedSize) {
  for (const auto& s : random_systems(20, 36, Coupling::Copula)) {
    auto sv = s;
    sv.coupling = Coupling::SurvivalCopula;
    const auto n = CountDistribution::degenerate(static_cast<int>(s.size()));
    for (double x : grid::log_spaced(1e-3, 20.0, 100)) {
      EXPECT_NEAR(mixture_max_cdf(s, n, x), max_cdf(s, x), 1e-14);
      EXPECT_NEAR(mixture_min_sf(sv, n, x), min_sf(sv, x), 1e-14);
    }
  }
}

TEST(Mixture, UniformCountsExpand) {
  const EwParams p{0.6, 1.3, 2.0};
  const auto n = CountDistribution::uniform(1, 2);
  const auto s = sys({p, p}, Generator::independence());
  const auto e = sys({{1, 1.5, 1}, {1, 1.5, 1}}, Generator::independence(), Coupling::SurvivalCopula);
  for (double x : grid::log_spaced(1e-3, 10.0, 50)) {
    const double f = ew::cdf(p, x);
    EXPECT_NEAR(mixture_max_cdf(s, n, x), (f + f * f) / 2, 1e-14);
    EXPECT_NEAR(mixture_min_sf(e, n, x), (std::exp(-1.5 * x) + std::exp(-3.0 * x)) / 2, 1e-14);
  }
}

TEST(Mixture, UpwardShiftLowersMinimumSurvival) {
  for (const auto& s : random_systems(20, 37, Coupling::SurvivalCopula)) {
    if (s.size() < 2) continue;
    const int n = static_cast<int>(s.size());
    const auto low = CountDistribution::uniform(1, n - 1);
    const auto high = CountDistribution::uniform(2, n);
    ASSERT_TRUE(count_st_leq(low, high));
    double prev = 1.0;
    for (double x : grid::log_spaced(1e-3, 20.0, 100)) {
      const double a = mixture_min_sf(s, low, x), b = mixture_min_sf(s, high, x);
      EXPECT_LE(b, a + 1e-14);
      EXPECT_LE(a, prev + 1e-15);
      prev = a;
    }
  }
}

TEST(Mixture, SupportBeyondSizeRejected) {
  const auto s = sys({{1, 1, 1}, {1, 2, 1}}, Generator::independence());
  EXPECT_THROW(mixture_max_cdf(s, CountDistribution::uniform(1, 3), 1.0), ContractError);
}

TEST(Counts, Validation) {
  EXPECT_THROW(CountDistribution({{1, 0.5}, {1, 0.5}}), ContractError);
  EXPECT_THROW(CountDistribution({{0, 1.0}}), ContractError);
  EXPECT_THROW(CountDistribution({{1, 0.5}, {2, 0.4}}), ContractError);
  EXPECT_TRUE(count_st_leq(CountDistribution::uniform(1, 2), CountDistribution::degenerate(2)));
  EXPECT_FALSE(count_st_leq(CountDistribution::degenerate(2), CountDistribution::uniform(1, 2)));
}
