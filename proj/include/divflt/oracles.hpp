#pragma once

#include "divflt/model.hpp"
#include "divflt/pricer.hpp"

#include <functional>

namespace divflt {

struct ClosedForm {
    double premium = 0.0;
    double delta = 0.0;
    double gamma = 0.0;
    double theta = 0.0;
};

ClosedForm black_scholes(double spot, double strike, double rate, double vol, double expiry,
                         OptionKind kind);

struct QuadratureConfig {
    int points = 500;            // Gauss-Legendre nodes per sub-interval
    double width_sigmas = 6.5;   // truncation half-width xi
    int nodes = 0;               // spline nodes per ex-date; 0 means `points`
};

struct QuadratureResult {
    double price = 0.0;
    double refined = 0.0;  // same recursion with twice the points
    bool precision_warning = false;
};

/// Backward recursion over ex-dates: closed form after the last ex-date, Gauss-Legendre
/// integration against the lognormal transition density before it, spline continuation
/// values in between.
double quadrature_value(const MarketState& market, const OptionContract& contract,
                        const DividendSchedule& schedule, const QuadratureConfig& config = {});

/// quadrature_value plus a self-check against 2 * points; flags a precision warning when
/// the two differ by more than 1e-4.
QuadratureResult quadrature_price(const MarketState& market, const OptionContract& contract,
                                  const DividendSchedule& schedule,
                                  const QuadratureConfig& config = {});

using PricingFunction = std::function<PricingResult(const MarketState&, const OptionContract&,
                                                    const DividendSchedule&)>;

struct BumpGreeks {
    double delta = 0.0;
    double gamma = 0.0;
};

/// Central bumps of size h: delta from premiums, gamma from the function's own deltas.
BumpGreeks bump_greeks(const PricingFunction& pricing_function, const MarketState& market,
                       const OptionContract& contract, const DividendSchedule& schedule,
                       double h);

}  // namespace divflt
