#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "eoc/orders.hpp"
#include "test_support.hpp"

using namespace eoc;

namespace {

DistHandle expo(double rate) { return make_handle(EwParams{1.0, rate, 1.0}); }

CoupledSystem max_sys(std::vector<EwParams> m, Generator g) { return {std::move(m), g, Coupling::Copula}; }

std::vector<EwParams> common(double a, double l, double k, std::vector<double> vary, char which) {
  std::vector<EwParams> out;
  for (double v : vary) {
    EwParams p{a, l, k};
    (which == 'a' ? p.alpha : which == 'l' ? p.lambda : p.k) = v;
    out.push_back(p);
  }
  return out;
}

// EW pair: either unrelated draws or a scale/tilt perturbation of one draw.
std::pair<EwParams, EwParams> random_pair(std::mt19937_64& rng) {
  const auto ps = test::random_params(2, static_cast<unsigned>(rng()), 1.5);
  std::uniform_real_distribution<double> f(0.5, 2.0);
  switch (rng() % 3) {
    case 0: return {ps[0], ps[1]};
    case 1: return {ps[0], {ps[0].alpha, ps[0].lambda * f(rng), ps[0].k}};
    default: return {ps[0], {ps[0].alpha * f(rng), ps[0].lambda, ps[0].k}};
  }
}

}  // namespace

TEST(Orders, IdenticalDistributionsHoldEverywhere) {
  const auto h = make_handle(EwParams{0.4, 1.7, 1.3});
  for (auto o : {Order::St, Order::Hr, Order::Rh, Order::Disp, Order::Star, Order::Lorenz})
    EXPECT_TRUE(check_order(o, h, h).holds()) << order_name(o);
  EXPECT_FALSE(find_crossing(h, h).has_value());
}

TEST(Orders, ExponentialRates) {
  const auto fast = expo(2.0), slow = expo(1.0);
  EXPECT_TRUE(check_usual_st(fast, slow).holds());
  EXPECT_TRUE(check_hazard_rate(fast, slow).holds());
  EXPECT_TRUE(check_reversed_hazard(fast, slow).holds());
  EXPECT_TRUE(check_dispersive(fast, slow).holds());
  const auto back = check_usual_st(slow, fast);
  ASSERT_EQ(back.status, Status::FailsAt);
  ASSERT_TRUE(back.witness.has_value());
  EXPECT_GT(back.witness->gap, 0.2);  // max of e^{-x} - e^{-2x} is 1/4
  EXPECT_EQ(check_hazard_rate(slow, fast).status, Status::FailsAt);
  EXPECT_EQ(check_dispersive(slow, fast).status, Status::FailsAt);
}

TEST(Orders, ScaleFreeOrders) {
  const EwParams p{0.3, 1.0, 1.7};
  const auto a = make_handle(p), b = make_handle(EwParams{0.3, 3.0, 1.7});
  for (auto o : {Order::Star, Order::Lorenz}) {
    EXPECT_TRUE(check_order(o, a, b).holds()) << order_name(o);
    EXPECT_TRUE(check_order(o, b, a).holds()) << order_name(o);
  }
}

TEST(Orders, LorenzCurveOfExponential) {
  // L(u) = u + (1 - u) log(1 - u) for any exponential
  const auto h = expo(0.7);
  GridSpec g;
  g.points = 64;
  const auto us = grid::levels(g);
  double mean = 0.0;
  const auto l = orders::detail::lorenz_curve(h, us, mean);
  EXPECT_NEAR(mean, 1.0 / 0.7, 1e-8);
  for (std::size_t i = 0; i < us.size(); ++i) EXPECT_NEAR(l[i], us[i] + (1 - us[i]) * std::log1p(-us[i]), 1e-9);
}

TEST(Orders, LorenzDirection) {
  // Weibull with larger shape is less unequal: its Lorenz curve lies above
  const auto flat = make_handle(EwParams{1.0, 1.0, 3.0}), wide = make_handle(EwParams{1.0, 1.0, 0.7});
  EXPECT_TRUE(check_lorenz(flat, wide).holds());
  EXPECT_EQ(check_lorenz(wide, flat).status, Status::FailsAt);
  EXPECT_TRUE(check_star(flat, wide).holds());
}

TEST(Orders, CrossingCounterexamplesLocated) {
  const auto g = Generator::gumbel_variant;
  const auto x = make_handle(max_sys(common(0.6, 0, 8.06, {0.46, 0.5}, 'l'), g(8.9)), Extreme::Max);
  const auto y = make_handle(max_sys(common(0.6, 0, 8.06, {1.7, 0.43}, 'l'), g(3.05)), Extreme::Max);
  const auto c = find_crossing(y, x);
  ASSERT_TRUE(c.has_value());
  EXPECT_GT(std::abs(c->gap_before), 1e-6);
  EXPECT_GT(std::abs(c->gap_after), 1e-6);
  EXPECT_NE(std::signbit(c->gap_before), std::signbit(c->gap_after));
  EXPECT_NEAR(y.cdf(c->x), x.cdf(c->x), 1e-8);

  const auto e = Generator::exp_reciprocal;
  const auto x2 = make_handle(max_sys(common(0.5, 4.83, 0, {0.5, 1, 3}, 'k'), e(2.48)), Extreme::Max);
  const auto y2 = make_handle(max_sys(common(0.5, 4.83, 0, {1, 1.5, 2}, 'k'), e(2.24)), Extreme::Max);
  EXPECT_TRUE(find_crossing(x2, y2).has_value());
}

TEST(Orders, TiltCounterexampleFails) {
  const auto e = Generator::exp_reciprocal;
  const auto x = make_handle(max_sys(common(0, 12.5, 3.16, {0.82, 0.85, 0.95}, 'a'), e(22.6)), Extreme::Max);
  const auto y = make_handle(max_sys(common(0, 12.5, 3.16, {0.4, 0.84, 0.87}, 'a'), e(10.7)), Extreme::Max);
  const auto v = check_usual_st(y, x);
  ASSERT_EQ(v.status, Status::FailsAt);
  ASSERT_TRUE(v.crossing.has_value());
}

TEST(Orders, TiltReversedHazardExample) {
  const auto ind = Generator::independence();
  const auto x = make_handle(max_sys(common(0, 1.0, 1.5, {0.3, 0.6}, 'a'), ind), Extreme::Max);
  const auto y = make_handle(max_sys(common(0, 1.0, 1.5, {0.4, 0.6}, 'a'), ind), Extreme::Max);
  EXPECT_TRUE(check_reversed_hazard(x, y).holds());
}

TEST(Orders, HierarchyOnRandomPairs) {
  std::mt19937_64 rng(51);
  GridSpec g;
  g.points = 512;
  int hr_holds = 0, rh_holds = 0;
  for (int i = 0; i < 200; ++i) {
    const auto [p, q] = random_pair(rng);
    const auto a = make_handle(p), b = make_handle(q);
    for (const auto& [lo, hi] : {std::pair{a, b}, std::pair{b, a}}) {
      const bool st = check_usual_st(lo, hi, g).holds();
      if (check_hazard_rate(lo, hi, g).holds()) {
        ++hr_holds;
        EXPECT_TRUE(st) << lo.label << " vs " << hi.label;
      }
      if (check_reversed_hazard(lo, hi, g).holds()) {
        ++rh_holds;
        EXPECT_TRUE(st) << lo.label << " vs " << hi.label;
      }
    }
  }
  EXPECT_GT(hr_holds, 50);
  EXPECT_GT(rh_holds, 50);
}

TEST(Orders, StarImpliesLorenzOnRandomPairs) {
  std::mt19937_64 rng(52);
  GridSpec g;
  g.points = 256;
  int star = 0;
  for (int i = 0; i < 100; ++i) {
    const auto ps = test::random_params(2, static_cast<unsigned>(rng()), 1.5);
    const auto a = make_handle(ps[0]), b = make_handle(EwParams{ps[0].alpha, ps[1].lambda, ps[1].k});
    for (const auto& [lo, hi] : {std::pair{a, b}, std::pair{b, a}}) {
      if (!check_star(lo, hi, g).holds()) continue;
      ++star;
      EXPECT_TRUE(check_lorenz(lo, hi, g).holds()) << lo.label << " vs " << hi.label;
    }
  }
  EXPECT_GT(star, 20);
}

TEST(Orders, TwoWayStochasticOrderMeansEqual) {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 50; ++i) {
    const auto [p, q] = random_pair(rng);
    const auto a = make_handle(p), b = make_handle(q);
    const auto ab = check_usual_st(a, b), ba = check_usual_st(b, a);
    if (ab.holds() && ba.holds()) {
      for (double x : orders::detail::x_grid(a, b, {})) EXPECT_LE(std::abs(a.cdf(x) - b.cdf(x)), 1e-9);
    }
  }
}

TEST(Orders, RefinementNeverFlipsWithoutWitness) {
  std::mt19937_64 rng(54);
  GridSpec g1, g2;
  g1.points = 1024;
  g2.points = 2048;
  for (int i = 0; i < 60; ++i) {
    const auto [p, q] = random_pair(rng);
    const auto a = make_handle(p), b = make_handle(q);
    for (auto o : {Order::St, Order::Hr, Order::Rh, Order::Disp, Order::Star}) {
      const auto coarse = check_order(o, a, b, g1), fine = check_order(o, a, b, g2);
      if (coarse.holds() && fine.status == Status::FailsAt) {
        const OrderTolerance t;
        const double tol = o == Order::St ? t.prob : o == Order::Hr || o == Order::Rh ? t.rate : t.quantile;
        EXPECT_GT(fine.witness->gap, 10 * tol) << order_name(o);
      }
    }
  }
}

TEST(Orders, StarAndLorenzScaleInvariant) {
  std::mt19937_64 rng(55);
  GridSpec g;
  g.points = 256;
  for (int i = 0; i < 30; ++i) {
    const auto ps = test::random_params(2, static_cast<unsigned>(rng()), 1.5);
    auto scaled = ps;
    for (auto& p : scaled) p.lambda *= 3.7;  // x -> x / 3.7 on both
    for (auto o : {Order::Star, Order::Lorenz}) {
      EXPECT_EQ(check_order(o, make_handle(ps[0]), make_handle(ps[1]), g).status,
                check_order(o, make_handle(scaled[0]), make_handle(scaled[1]), g).status)
          << order_name(o);
    }
  }
}

TEST(Orders, GridValidation) {
  GridSpec g;
  g.points = 8;
  EXPECT_THROW(check_usual_st(expo(1), expo(2), g), ContractError);
  g.points = 64;
  g.lo_quantile = 0.9;
  g.hi_quantile = 0.1;
  EXPECT_THROW(check_usual_st(expo(1), expo(2), g), ContractError);
}

TEST(Orders, ParseNames) {
  for (auto o : {Order::St, Order::Hr, Order::Rh, Order::Disp, Order::Star, Order::Lorenz})
    EXPECT_EQ(parse_order(order_name(o)), o);
  EXPECT_FALSE(parse_order("likelihood").has_value());
}
