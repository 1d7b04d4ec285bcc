#include <gtest/gtest.h>

#include "divflt/error.hpp"
#include "divflt/oracles.hpp"
#include "divflt/pricer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace divflt;

namespace {

const MarketState kMarket{100.0, 0.06, 0.30};

OptionContract call(double strike, double expiry = 1.0)
{
    return {strike, expiry, OptionKind::call, true};
}

OptionContract put(double strike, double expiry = 1.0)
{
    return {strike, expiry, OptionKind::put, true};
}

ErrorCode code_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::internal;
}

}  // namespace

TEST(BuildGrid, ReferenceParameters)
{
    const GridSpec g = build_grid(0.30, 1.0, 1024, 7.5);
    EXPECT_NEAR(g.half_width, 4.5, 1e-14);
    EXPECT_NEAR(g.spacing, 4.5 / 1024.0, 1e-16);
    EXPECT_NEAR(g.abscissas.front(), -2.25, 1e-14);
    EXPECT_EQ(g.abscissas.size(), 1024u);
    EXPECT_EQ(g.frequencies.size(), 1024u);
}

TEST(BuildGrid, ShortDatedLowVol)
{
    const GridSpec g = build_grid(0.01, 5.0 / 252.0, 1024, 7.5);
    EXPECT_NEAR(g.half_width, 2.0 * 7.5 * 0.01 * std::sqrt(5.0 / 252.0), 1e-15);
}

TEST(BuildGrid, CenterSnapsToNode)
{
    const GridSpec g = build_grid(0.30, 1.0, 1024, 7.5, 0.1234);
    const double rho = g.spacing;
    EXPECT_NEAR(g.center / rho, std::round(g.center / rho), 1e-9);
    EXPECT_LE(std::abs(g.center - 0.1234), rho / 2 + 1e-15);
    const auto zero = std::find(g.abscissas.begin(), g.abscissas.end(), 0.0);
    EXPECT_NE(zero, g.abscissas.end());
}

TEST(BuildGrid, RejectsBadParameters)
{
    EXPECT_EQ(code_of([] { build_grid(0.3, 1.0, 1023, 7.5); }), ErrorCode::configuration);
    EXPECT_EQ(code_of([] { build_grid(0.3, 1.0, 2, 7.5); }), ErrorCode::configuration);
    EXPECT_EQ(code_of([] { build_grid(0.3, 1.0, 1024, -1.0); }), ErrorCode::configuration);
    EXPECT_EQ(code_of([] { build_grid(0.0, 1.0, 1024, 7.5); }), ErrorCode::configuration);
}

TEST(InitialPayoff, Values)
{
    GridSpec g = build_grid(0.30, 1.0, 16, 7.5);
    g.abscissas = {0.0, std::log(2.0), -1.0, -0.1};
    const ValueGrid v = initial_payoff(g, 93.0);
    EXPECT_EQ(v.tau, 0.0);
    EXPECT_EQ(v.values[0], 0.0);
    EXPECT_NEAR(v.values[1], 93.0, 1e-12);
    EXPECT_EQ(v.values[2], 0.0);
    EXPECT_EQ(v.values[3], 0.0);
}

TEST(InitialPayoff, AllBelowStrikeIsZero)
{
    GridSpec g = build_grid(0.30, 1.0, 16, 7.5, -5.0);
    ASSERT_LT(g.abscissas.back(), 0.0);
    const ValueGrid v = initial_payoff(g, 93.0);
    for (double f : v.values) EXPECT_EQ(f, 0.0);
}

TEST(KinkBias, SharpLimitIsBernoulli)
{
    for (double th : {0.0, 0.25, 0.5, 0.9})
        EXPECT_NEAR(kink_bias_factor(th, 0.0), th * th - th + 1.0 / 6.0, 1e-15);
}

TEST(KinkBias, SmearedSeriesDecays)
{
    // Gaussian-smoothed |theta| near the kink.
    const double eps = 1e-2;
    EXPECT_NEAR(kink_bias_factor(0.0, eps), 1.0 / 6.0 - eps * std::sqrt(2.0 / std::numbers::pi) + eps * eps,
                1e-9);
    EXPECT_LT(std::abs(kink_bias_factor(0.0, 1.0)), 1e-8);
}

TEST(SelectLambda, EqualEnds)
{
    ValueGrid v{0.0, std::vector<double>(1024, 3.0)};
    EXPECT_EQ(select_lambda(v, 1e-12), 0.0);
}

TEST(SelectLambda, FlooredLowerEdge)
{
    const GridSpec g = build_grid(0.30, 1.0, 1024, 7.5);
    const ValueGrid v = initial_payoff(g, 93.0);
    const double floor = 93.0 * 1e-12;
    const double expect = 1024.0 / 1023.0 * std::log(v.values.back() / floor);
    EXPECT_NEAR(select_lambda(v, floor), expect, 1e-12);
}

TEST(SelectLambda, RatioOfExpTen)
{
    ValueGrid v{0.0, std::vector<double>(1024, 1.0)};
    v.values.back() = std::exp(10.0);
    EXPECT_NEAR(select_lambda(v, 1e-12), 1024.0 / 1023.0 * 10.0, 1e-12);
    EXPECT_NEAR(select_lambda(v, 1e-12), 10.0098, 5e-5);
}

TEST(SelectLambda, AllZeroIsDegenerate)
{
    ValueGrid v{0.0, std::vector<double>(64, 0.0)};
    EXPECT_EQ(code_of([&] { select_lambda(v, 1e-12); }), ErrorCode::degenerate_payoff);
}

TEST(SelectLambda, ClampedToOverflowCap)
{
    ValueGrid v{0.0, std::vector<double>(64, 0.0)};
    v.values.back() = 1e300;
    EXPECT_LE(select_lambda(v, 1e-300), max_lambda(64));
}

class EvolveSegment : public ::testing::Test {
protected:
    void SetUp() override
    {
        grid = build_grid(0.30, 1.0, 256, 7.5);
        ValueGrid v = initial_payoff(grid, 100.0);
        spec = {0.0, laplace_forward(v.values, select_lambda(v, 1e-10))};
    }
    GridSpec grid;
    EvolvedSpectrum spec;
};

TEST_F(EvolveSegment, ZeroStepIsIdentity)
{
    const EvolvedSpectrum out = evolve_segment(spec, 0.3, 0.0, grid.spacing);
    EXPECT_EQ(out.tau, spec.tau);
    for (std::size_t k = 0; k < out.spectrum.values.size(); ++k)
        EXPECT_EQ(out.spectrum.values[k], spec.spectrum.values[k]);
}

TEST_F(EvolveSegment, Semigroup)
{
    const EvolvedSpectrum two =
        evolve_segment(evolve_segment(spec, 0.3, 0.2, grid.spacing), 0.3, 0.3, grid.spacing);
    const EvolvedSpectrum one = evolve_segment(spec, 0.3, 0.5, grid.spacing);
    EXPECT_NEAR(two.tau, 0.5, 1e-15);
    for (std::size_t k = 0; k < one.spectrum.values.size(); ++k) {
        const double scale = std::max(std::abs(one.spectrum.values[k]), 1e-300);
        EXPECT_LE(std::abs(two.spectrum.values[k] - one.spectrum.values[k]) / scale, 1e-12);
    }
}

TEST_F(EvolveSegment, ZeroFrequencyFactorIsReal)
{
    const double lambda = spec.spectrum.lambda;
    const double dtau = 0.4;
    const EvolvedSpectrum out = evolve_segment(spec, 0.3, dtau, grid.spacing);
    const double s0 = lambda / 256.0;
    const Complex factor = out.spectrum.values[0] / spec.spectrum.values[0];
    EXPECT_NEAR(factor.real(), std::exp(0.09 * s0 * s0 / (2.0 * grid.spacing * grid.spacing) * dtau),
                1e-12);
    EXPECT_NEAR(factor.imag(), 0.0, 1e-12);
}

TEST_F(EvolveSegment, NegativeStepRejected)
{
    EXPECT_EQ(code_of([&] { evolve_segment(spec, 0.3, -0.1, grid.spacing); }), ErrorCode::interval);
}

TEST(RemapDividend, VanishingDividendIsIdentity)
{
    const GridSpec g = build_grid(0.30, 1.0, 512, 7.5);
    ValueGrid v{0.5, {}};
    for (double x : g.abscissas) v.values.push_back(93.0 * std::log1p(std::exp(x)));
    const ValueGrid out = remap_dividend(v, g, 1e-12, 0.5, 93.0, 0.06, 0.3);
    EXPECT_EQ(out.tau, v.tau);
    double worst = 0.0;
    for (std::size_t j = 0; j < v.values.size(); ++j)
        worst = std::max(worst, std::abs(out.values[j] - v.values[j]));
    EXPECT_LE(worst, 1e-8 * 93.0);
}

TEST(RemapDividend, LowSideStaysNonNegative)
{
    const GridSpec g = build_grid(0.30, 1.0, 512, 7.5);
    ValueGrid v{0.5, {}};
    for (double x : g.abscissas) v.values.push_back(93.0 * std::log1p(std::exp(3.0 * x)));
    const ValueGrid out = remap_dividend(v, g, 20.0, 0.5, 93.0, 0.06, 0.3);
    for (std::size_t j = 0; j < out.values.size(); ++j) {
        EXPECT_GE(out.values[j], 0.0);
        EXPECT_LE(out.values[j], v.values[j] + 1e-12);
    }
    // Nodes below the shifted grid stay under the lowest pre-remap value.
    EXPECT_LE(out.values.front(), v.values.front());
}

TEST(Price, SingleDividendReference)
{
    const PricingResult r = price(kMarket, call(100.0), {{{0.5, 7.0}}});
    EXPECT_NEAR(r.premium, 14.2172, 5e-5);
    EXPECT_EQ(r.diagnostics.segments, 2u);
}

TEST(Price, ShortFirstSegmentUsesClosedForm)
{
    const PricingResult r = price(kMarket, call(130.0), {{{0.9999, 50.0}}});
    EXPECT_TRUE(r.diagnostics.closed_form_first_segment);
    EXPECT_NEAR(r.premium, 4.9192, 5e-5);
}

TEST(Price, NoDividendMatchesClosedForm)
{
    const PricingResult r = price(kMarket, call(100.0), {});
    const ClosedForm bs = black_scholes(100.0, 100.0, 0.06, 0.30, 1.0, OptionKind::call);
    EXPECT_NEAR(r.premium, 14.7171, 5e-4);
    EXPECT_NEAR(r.premium, bs.premium, 1e-8);
    EXPECT_NEAR(r.delta, bs.delta, 1e-8);
    EXPECT_NEAR(r.gamma, bs.gamma, 1e-8);
    EXPECT_NEAR(r.theta, bs.theta, 1e-6);
}

TEST(Price, BlackScholesDegeneracyAcrossMoneyness)
{
    for (double y = 0.8; y <= 1.2 + 1e-12; y += 0.05) {
        const double k = 100.0 * y;
        const PricingResult r = price(kMarket, call(k), {});
        const ClosedForm bs = black_scholes(100.0, k, 0.06, 0.30, 1.0, OptionKind::call);
        EXPECT_LE(std::abs(r.premium - bs.premium), 1e-4 * 100.0) << k;
        EXPECT_LE(std::abs(r.delta - bs.delta), 1e-4 * 100.0) << k;
        EXPECT_LE(std::abs(r.gamma - bs.gamma), 1e-4 * 100.0) << k;
        EXPECT_LE(std::abs(r.theta - bs.theta), 1e-3 * 100.0) << k;
    }
}

TEST(Price, FourDividendsCoarseGrid)
{
    const DividendSchedule sched{{{0.2, 4.0}, {0.4, 5.0}, {0.6, 6.0}, {0.8, 3.0}}};
    const PricingResult r = price(kMarket, call(100.0), sched, {100, 7.5, {}});
    EXPECT_NEAR(r.premium, 13.4083, 5e-5);
    EXPECT_NEAR(r.delta, 0.6341, 5e-5);
    EXPECT_NEAR(r.gamma, 0.013787, 5e-7);
}

TEST(Price, NoDividendPutMatchesClosedForm)
{
    const PricingResult r = price(kMarket, put(100.0), {});
    const ClosedForm bs = black_scholes(100.0, 100.0, 0.06, 0.30, 1.0, OptionKind::put);
    EXPECT_NEAR(r.premium, bs.premium, 1e-8);
    EXPECT_NEAR(r.delta, bs.delta, 1e-8);
    EXPECT_NEAR(r.theta, bs.theta, 1e-6);
}

TEST(Price, DeepInTheMoneyWithDividendMatchesQuadrature)
{
    const DividendSchedule sched{{{0.5, 7.0}}};
    const double q = quadrature_value(kMarket, call(20.0), sched, {500, 10.0});
    EXPECT_NEAR(price(kMarket, call(20.0), sched).premium, q, 1e-7);
}

TEST(Price, LongDatedHighVariance)
{
    const MarketState m{100.0, 0.06, 1.0};
    const PricingResult r = price(m, call(100.0, 30.0), {});
    const ClosedForm bs = black_scholes(100.0, 100.0, 0.06, 1.0, 30.0, OptionKind::call);
    EXPECT_NEAR(r.premium, bs.premium, 1e-5);
    EXPECT_GT(r.diagnostics.n_sigma, 7.5);
}

TEST(Price, DeepOutOfTheMoneyPut)
{
    const PricingResult r = price(kMarket, put(20.0), {{{0.5, 7.0}}});
    EXPECT_LE(std::abs(r.premium), 1e-6 * 100.0);
}

TEST(Price, PutGreeksFromParity)
{
    const DividendSchedule sched{{{0.3, 5.0}, {0.7, 5.0}}};
    const PricingResult c = price(kMarket, call(105.0), sched);
    const PricingResult p = price(kMarket, put(105.0), sched);
    EXPECT_EQ(p.delta, c.delta - 1.0);
    EXPECT_EQ(p.gamma, c.gamma);
    const double fwd = forward_price(kMarket, sched, 0.0, 1.0);
    EXPECT_NEAR(c.premium - p.premium, std::exp(-0.06) * (fwd - 95.0), 1e-12);
}

TEST(Price, ThetaIdentity)
{
    for (auto kind : {OptionKind::call, OptionKind::put}) {
        const PricingResult r = price(kMarket, {90.0, 1.0, kind, true}, {{{0.5, 7.0}}});
        const double s = 100.0;
        const double residual = r.theta + s * 0.06 * r.delta +
                                0.5 * 0.09 * s * s * r.gamma - 0.06 * r.premium;
        EXPECT_LE(std::abs(residual), 1e-12);
        EXPECT_LE(std::abs(r.diagnostics.pde_residual), 1e-12);
    }
}

TEST(Price, MonotoneInStrikeAndSpot)
{
    const DividendSchedule sched{{{0.5, 7.0}}};
    double prev = 1e300;
    for (double k = 60.0; k <= 140.0; k += 10.0) {
        const PricingResult r = price(kMarket, call(k), sched);
        EXPECT_LT(r.premium, prev) << k;
        EXPECT_GE(r.gamma, -1e-10) << k;
        prev = r.premium;
    }
    prev = -1.0;
    for (double s = 70.0; s <= 130.0; s += 10.0) {
        const PricingResult r = price({s, 0.06, 0.30}, call(100.0), sched);
        EXPECT_GT(r.premium, prev) << s;
        EXPECT_GE(r.gamma, -1e-10) << s;
        prev = r.premium;
    }
}

TEST(Price, ConvergesMonotonically)
{
    const DividendSchedule sched{{{0.5, 7.0}}};
    std::vector<double> p;
    for (std::size_t n : {128u, 256u, 512u, 1024u, 2048u})
        p.push_back(price(kMarket, call(100.0), sched, {n, 7.5, {}}).premium);
    for (std::size_t i = 2; i < p.size(); ++i)
        EXPECT_LT(std::abs(p[i] - p[i - 1]), std::abs(p[i - 1] - p[i - 2]));
}

TEST(Price, DeepInTheMoneyHitsForwardBound)
{
    const PricingResult r = price(kMarket, call(1.0), {});
    EXPECT_NEAR(r.premium, std::exp(-0.06) * (100.0 * std::exp(0.06) - 1.0), 1e-6);
    EXPECT_NEAR(r.delta, 1.0, 1e-6);
}

TEST(Price, UnadjustedStrikeUsesFullStrike)
{
    const DividendSchedule sched{{{0.5, 7.0}}};
    const PricingResult adj = price(kMarket, call(93.0), sched);
    const PricingResult raw = price(kMarket, {100.0, 1.0, OptionKind::call, false}, {});
    EXPECT_GT(adj.premium, 0.0);
    EXPECT_GT(raw.premium, 0.0);
    EXPECT_LT(price(kMarket, {100.0, 1.0, OptionKind::call, false}, sched).premium,
              price(kMarket, call(100.0), sched).premium);
}

TEST(Price, Errors)
{
    EXPECT_EQ(code_of([] { price(kMarket, call(100.0), {}, {1000, 7.5, 0.0}); }),
              ErrorCode::configuration);
    EXPECT_EQ(code_of([] { price(kMarket, call(100.0), {}, {1024, 2.5, {}}); }), ErrorCode::coverage);
    EXPECT_EQ(code_of([] { price(kMarket, call(100.0), {{{0.5, 7.0}}}, {4, 7.5, {}}); }),
              ErrorCode::numerical_integrity);
    EXPECT_EQ(code_of([] { price(kMarket, call(50.0), {{{0.3, 30.0}, {0.6, 30.0}}}); }),
              ErrorCode::degenerate_contract);
    EXPECT_EQ(code_of([] { price({100.0, 0.06, -0.3}, call(100.0), {}); }), ErrorCode::parameter);
    EXPECT_EQ(code_of([] { price(kMarket, call(100.0), {{{1.5, 7.0}}}); }), ErrorCode::schedule);
}
