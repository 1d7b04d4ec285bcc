#pragma once

#include <vector>

namespace divflt {

enum class OptionKind { call, put };

struct MarketState {
    double spot = 100.0;
    double rate = 0.0;
    double vol = 0.2;

    bool operator==(const MarketState&) const = default;
};

struct DividendEvent {
    double ex_date = 0.0;
    double amount = 0.0;

    bool operator==(const DividendEvent&) const = default;
};

struct DividendSchedule {
    std::vector<DividendEvent> events;
};

struct DividendLeg {
    double pay_date = 0.0;
    double amount = 0.0;

    bool operator==(const DividendLeg&) const = default;
};

struct OptionContract {
    double strike = 100.0;
    double expiry = 1.0;
    OptionKind kind = OptionKind::call;
    bool strike_adjusted = true;

    bool operator==(const OptionContract&) const = default;
};

struct CashAccount {
    double value = 0.0;
};

struct StrikeLadder {
    // (ex_date, strike after that ex-date)
    std::vector<DividendEvent> rungs;
    double terminal = 0.0;
};

void validate(const MarketState& market);
void validate(const OptionContract& contract);

// Requires strictly increasing ex-dates inside (0, expiry) and positive amounts.
void validate(const DividendSchedule& schedule, double expiry);

/// Sum of leg amounts discounted from pay date back to the ex-date.
double pv_dividend(const std::vector<DividendLeg>& legs, double ex_date, double rate);

StrikeLadder strike_ladder(const OptionContract& contract, const DividendSchedule& schedule);

/// Terminal strike: the ladder's last rung when strike-adjusted, the strike otherwise.
double terminal_strike(const OptionContract& contract, const DividendSchedule& schedule);

/// I_t = sum over t_i <= t of D_i exp(r (t - t_i)).
CashAccount dividend_account(const DividendSchedule& schedule, double rate, double t);

/// exp(r (T - t)) (S_t + I_t) - I_T, with S_t taken as market.spot.
double forward_price(const MarketState& market, const DividendSchedule& schedule, double t,
                     double T);

/// S_t exp(r (T - t)) - sum over t < t_i <= T of D_i exp(r (T - t_i)).
double forward_price_direct(const MarketState& market, const DividendSchedule& schedule,
                            double t, double T);

double put_from_parity(double call_premium, double forward, double k_t, double rate,
                       double T);

}  // namespace divflt
