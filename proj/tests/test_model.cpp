#include <gtest/gtest.h>

#include "divflt/error.hpp"
#include "divflt/model.hpp"
#include "divflt/oracles.hpp"

#include <cmath>
#include <random>

using namespace divflt;

TEST(PvDividend, SingleLeg)
{
    EXPECT_NEAR(pv_dividend({{0.75, 10.0}}, 0.5, 0.06), 9.85112, 5e-6);
    EXPECT_NEAR(pv_dividend({{0.75, 10.0}}, 0.5, 0.06), 10.0 * std::exp(-0.015), 1e-14);
}

TEST(PvDividend, PayOnExDateIsUndiscounted)
{
    EXPECT_EQ(pv_dividend({{0.5, 7.0}}, 0.5, 0.06), 7.0);
}

TEST(PvDividend, TwoLegs)
{
    EXPECT_NEAR(pv_dividend({{0.6, 5.0}, {0.8, 5.0}}, 0.5, 0.06), 9.88089, 5e-6);
}

TEST(PvDividend, PayBeforeExDateIsRejected)
{
    try {
        pv_dividend({{0.4, 5.0}}, 0.5, 0.06);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::schedule);
    }
}

TEST(StrikeLadder, SingleDividend)
{
    const auto ladder = strike_ladder({100.0, 1.0, OptionKind::call, true}, {{{0.5, 7.0}}});
    EXPECT_EQ(ladder.terminal, 93.0);
}

TEST(StrikeLadder, FourDividends)
{
    const auto ladder = strike_ladder({100.0, 1.0, OptionKind::call, true},
                                      {{{0.2, 4.0}, {0.4, 5.0}, {0.6, 6.0}, {0.8, 3.0}}});
    ASSERT_EQ(ladder.rungs.size(), 4u);
    EXPECT_EQ(ladder.rungs[0].amount, 96.0);
    EXPECT_EQ(ladder.rungs[1].amount, 91.0);
    EXPECT_EQ(ladder.rungs[2].amount, 85.0);
    EXPECT_EQ(ladder.rungs[3].amount, 82.0);
    EXPECT_EQ(ladder.terminal, 82.0);
    EXPECT_EQ(100.0 - ladder.terminal, 4.0 + 5.0 + 6.0 + 3.0);
}

TEST(StrikeLadder, ExhaustedStrikeIsDegenerate)
{
    try {
        strike_ladder({50.0, 1.0, OptionKind::call, true}, {{{0.2, 30.0}, {0.4, 30.0}}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::degenerate_contract);
    }
}

TEST(StrikeLadder, UnadjustedContractKeepsStrike)
{
    EXPECT_EQ(terminal_strike({100.0, 1.0, OptionKind::call, false}, {{{0.5, 7.0}}}), 100.0);
}

TEST(DividendAccount, BeforeFirstExDate)
{
    EXPECT_EQ(dividend_account({{{0.5, 7.0}}}, 0.06, 0.25).value, 0.0);
}

TEST(DividendAccount, GrowsAtRate)
{
    EXPECT_NEAR(dividend_account({{{0.5, 7.0}}}, 0.06, 1.0).value, 7.21318, 5e-6);
    const DividendSchedule s{{{0.2, 4.0}, {0.6, 9.0}}};
    const double a = dividend_account(s, 0.06, 0.7).value;
    const double b = dividend_account(s, 0.06, 0.9).value;
    EXPECT_NEAR(b / a, std::exp(0.06 * 0.2), 1e-14);
}

TEST(DividendAccount, RightContinuousAtExDate)
{
    EXPECT_EQ(dividend_account({{{0.5, 7.0}}}, 0.06, 0.5).value, 7.0);
}

TEST(ForwardPrice, NoDividends)
{
    EXPECT_NEAR(forward_price({100.0, 0.06, 0.3}, {}, 0.0, 1.0), 106.18365, 5e-6);
}

TEST(ForwardPrice, OneDividend)
{
    EXPECT_NEAR(forward_price({100.0, 0.06, 0.3}, {{{0.5, 7.0}}}, 0.0, 1.0), 98.97047, 5e-6);
}

TEST(ForwardPrice, ZeroHorizonReturnsSpot)
{
    EXPECT_NEAR(forward_price({100.0, 0.06, 0.3}, {{{0.5, 7.0}}}, 0.7, 0.7), 100.0, 1e-12);
}

TEST(ForwardPrice, StartAfterEndIsIntervalError)
{
    try {
        forward_price({100.0, 0.06, 0.3}, {}, 1.0, 0.5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::interval);
    }
}

TEST(ForwardPrice, TwoFormsAgreeOnRandomSchedules)
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = static_cast<int>(u(rng) * 7);
        DividendSchedule s;
        double t = 0.0;
        for (int i = 0; i < n; ++i) {
            t += 0.01 + 0.1 * u(rng);
            s.events.push_back({t, 0.5 + 5.0 * u(rng)});
        }
        const MarketState m{50.0 + 100.0 * u(rng), 0.1 * u(rng) - 0.02, 0.3};
        const double t0 = 0.3 * u(rng);
        const double end = std::max(t, t0) + 0.2;
        const double a = forward_price(m, s, t0, end);
        const double b = forward_price_direct(m, s, t0, end);
        EXPECT_LE(std::abs(a - b), 1e-12 * std::abs(b));
    }
}

TEST(ForwardPrice, DecreasesInEachDividend)
{
    const MarketState m{100.0, 0.06, 0.3};
    DividendSchedule s{{{0.2, 4.0}, {0.4, 5.0}, {0.6, 6.0}}};
    const double base = forward_price(m, s, 0.0, 1.0);
    for (std::size_t i = 0; i < s.events.size(); ++i) {
        DividendSchedule bumped = s;
        bumped.events[i].amount += 0.1;
        EXPECT_LT(forward_price(m, bumped, 0.0, 1.0), base);
    }
}

TEST(PutFromParity, ZeroPutAtParity)
{
    const double fwd = 105.0, k = 93.0, r = 0.06, T = 1.0;
    EXPECT_NEAR(put_from_parity(std::exp(-r * T) * (fwd - k), fwd, k, r, T), 0.0, 1e-14);
}

TEST(PutFromParity, MatchesClosedFormPut)
{
    const auto call = black_scholes(100.0, 100.0, 0.06, 0.3, 1.0, OptionKind::call);
    const auto put = black_scholes(100.0, 100.0, 0.06, 0.3, 1.0, OptionKind::put);
    const double fwd = forward_price({100.0, 0.06, 0.3}, {}, 0.0, 1.0);
    EXPECT_NEAR(put_from_parity(call.premium, fwd, 100.0, 0.06, 1.0), put.premium, 1e-10);
    EXPECT_NEAR(put_from_parity(call.premium, fwd, 100.0, 0.06, 1.0),
                call.premium - (100.0 - 100.0 * std::exp(-0.06)), 1e-12);
}

TEST(PutFromParity, ListedCallValue)
{
    // Single dividend D = 7 at t = 0.5, strike 100 adjusted to 93, call 14.2172.
    const double fwd = 100.0 * std::exp(0.06) - 7.0 * std::exp(0.03);
    const double put = put_from_parity(14.2172, fwd, 93.0, 0.06, 1.0);
    EXPECT_NEAR(put, 14.2172 - std::exp(-0.06) * (fwd - 93.0), 1e-12);
    EXPECT_NEAR(put, 8.5944, 1e-4);
}

TEST(Validation, ScheduleMustBeInsideLife)
{
    EXPECT_THROW(validate(DividendSchedule{{{1.0, 2.0}}}, 1.0), Error);
    EXPECT_THROW(validate(DividendSchedule{{{0.0, 2.0}}}, 1.0), Error);
    EXPECT_THROW(validate(DividendSchedule{{{0.5, 2.0}, {0.4, 1.0}}}, 1.0), Error);
    EXPECT_THROW(validate(DividendSchedule{{{0.5, -2.0}}}, 1.0), Error);
    EXPECT_NO_THROW(validate(DividendSchedule{{{0.5, 2.0}}}, 1.0));
}
