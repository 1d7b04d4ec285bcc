#include "divflt/model.hpp"

#include "divflt/error.hpp"

#include <cmath>
#include <string>

namespace divflt {

void validate(const MarketState& market)
{
    if (!(market.spot > 0.0) || !std::isfinite(market.spot))
        throw Error(ErrorCode::parameter, "spot must be positive");
    if (!std::isfinite(market.rate)) throw Error(ErrorCode::parameter, "rate must be finite");
    if (!(market.vol > 0.0) || !std::isfinite(market.vol))
        throw Error(ErrorCode::parameter, "vol must be positive");
}

void validate(const OptionContract& contract)
{
    if (!(contract.strike > 0.0) || !std::isfinite(contract.strike))
        throw Error(ErrorCode::parameter, "strike must be positive");
    if (!(contract.expiry > 0.0) || !std::isfinite(contract.expiry))
        throw Error(ErrorCode::parameter, "expiry must be positive");
}

void validate(const DividendSchedule& schedule, double expiry)
{
    double prev = 0.0;
    for (std::size_t i = 0; i < schedule.events.size(); ++i) {
        const auto& e = schedule.events[i];
        const std::string where = "dividend " + std::to_string(i);
        if (!(e.ex_date > prev))
            throw Error(ErrorCode::schedule, where + ": ex_date must be positive and increasing");
        if (!(e.ex_date < expiry))
            throw Error(ErrorCode::schedule, where + ": ex_date must precede expiry");
        if (!(e.amount > 0.0) || !std::isfinite(e.amount))
            throw Error(ErrorCode::schedule, where + ": amount must be positive");
        prev = e.ex_date;
    }
}

double pv_dividend(const std::vector<DividendLeg>& legs, double ex_date, double rate)
{
    double pv = 0.0;
    for (const auto& leg : legs) {
        if (leg.pay_date < ex_date)
            throw Error(ErrorCode::schedule, "pay_date precedes ex_date");
        pv += leg.amount * std::exp(-rate * (leg.pay_date - ex_date));
    }
    return pv;
}

StrikeLadder strike_ladder(const OptionContract& contract, const DividendSchedule& schedule)
{
    StrikeLadder ladder;
    double k = contract.strike;
    for (const auto& e : schedule.events) {
        k -= e.amount;
        if (!(k > 0.0))
            throw Error(ErrorCode::degenerate_contract, "strike exhausted by dividends");
        ladder.rungs.push_back({e.ex_date, k});
    }
    ladder.terminal = k;
    return ladder;
}

double terminal_strike(const OptionContract& contract, const DividendSchedule& schedule)
{
    if (!contract.strike_adjusted) return contract.strike;
    return strike_ladder(contract, schedule).terminal;
}

CashAccount dividend_account(const DividendSchedule& schedule, double rate, double t)
{
    double total = 0.0;
    for (const auto& e : schedule.events)
        if (e.ex_date <= t) total += e.amount * std::exp(rate * (t - e.ex_date));
    return {total};
}

double forward_price(const MarketState& market, const DividendSchedule& schedule, double t,
                     double T)
{
    if (t > T) throw Error(ErrorCode::interval, "forward start after forward end");
    const double i_t = dividend_account(schedule, market.rate, t).value;
    const double i_T = dividend_account(schedule, market.rate, T).value;
    return std::exp(market.rate * (T - t)) * (market.spot + i_t) - i_T;
}

double forward_price_direct(const MarketState& market, const DividendSchedule& schedule,
                            double t, double T)
{
    if (t > T) throw Error(ErrorCode::interval, "forward start after forward end");
    double f = market.spot * std::exp(market.rate * (T - t));
    for (const auto& e : schedule.events)
        if (e.ex_date > t && e.ex_date <= T) f -= e.amount * std::exp(market.rate * (T - e.ex_date));
    return f;
}

double put_from_parity(double call_premium, double forward, double k_t, double rate, double T)
{
    return call_premium - std::exp(-rate * T) * (forward - k_t);
}

}  // namespace divflt
