#include "divflt/oracles.hpp"

#include "divflt/error.hpp"
#include "divflt/normal.hpp"
#include "divflt/spline.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

namespace divflt {

namespace {

constexpr double kSelfCheckTolerance = 1e-4;

double call_value(double spot, double strike, double rate, double vol, double expiry)
{
    if (spot <= 0.0) return 0.0;
    const double sd = vol * std::sqrt(expiry);
    const double d1 = (std::log(spot / strike) + (rate + 0.5 * vol * vol) * expiry) / sd;
    return spot * normal_cdf(d1) - strike * std::exp(-rate * expiry) * normal_cdf(d1 - sd);
}

struct Rule {
    std::vector<double> x, w;  // on [-1, 1]
};

Rule gauss_legendre(int n)
{
    std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)>
        table(gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n)),
              &gsl_integration_glfixed_table_free);
    if (!table) throw Error(ErrorCode::internal, "Gauss-Legendre table allocation failed");
    Rule rule;
    rule.x.resize(static_cast<std::size_t>(n));
    rule.w.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        gsl_integration_glfixed_point(-1.0, 1.0, static_cast<std::size_t>(i), &rule.x[i],
                                      &rule.w[i], table.get());
    return rule;
}

// e^{-r dt} E[g(S e^{nu dt + sd Z})], Z truncated to [-xi, xi] and split where the
// transformed spot crosses any of `kinks`.
template <class G>
double expectation(const Rule& rule, double spot, double rate, double vol, double dt, double xi,
                   const std::vector<double>& kinks, const G& g)
{
    const double nu = rate - 0.5 * vol * vol;
    const double sd = vol * std::sqrt(dt);
    std::vector<double> cuts{-xi, xi};
    for (double k : kinks) {
        if (k <= 0.0) continue;
        const double z = (std::log(k / spot) - nu * dt) / sd;
        if (z > -xi && z < xi) cuts.push_back(z);
    }
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double half = 0.5 * (cuts[c + 1] - cuts[c]);
        const double mid = 0.5 * (cuts[c + 1] + cuts[c]);
        double part = 0.0;
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            const double z = mid + half * rule.x[i];
            part += rule.w[i] * normal_pdf(z) * g(spot * std::exp(nu * dt + sd * z));
        }
        total += half * part;
    }
    return std::exp(-rate * dt) * total;
}

double quadrature_call(const MarketState& market, const OptionContract& contract,
                       const DividendSchedule& schedule, const QuadratureConfig& config)
{
    const double k_t = terminal_strike(contract, schedule);
    const double r = market.rate;
    const double vol = market.vol;
    const double T = contract.expiry;
    const auto& ev = schedule.events;
    if (ev.empty()) return call_value(market.spot, k_t, r, vol, T);

    const Rule rule = gauss_legendre(config.points);
    const double xi = config.width_sigmas;
    const int nodes = config.nodes > 0 ? config.nodes : config.points;
    const std::size_t n = ev.size();

    // Value just after the last ex-date, and the kinks of the pre-dividend integrand.
    const double t_last = T - ev[n - 1].ex_date;
    auto last = [&](double s) { return call_value(s, k_t, r, vol, t_last); };

    std::unique_ptr<NaturalSpline> next;  // value just after ex-date k + 1
    for (std::size_t k = n - 1; k-- > 0;) {
        const double d_next = ev[k + 1].amount;
        const double dt = ev[k + 1].ex_date - ev[k].ex_date;
        std::vector<double> kinks{d_next};
        if (k + 1 == n - 1) kinks.push_back(d_next + k_t);

        // Log-uniform spot nodes covering the spot distribution at ex-date k.
        const double tk = ev[k].ex_date;
        double paid = 0.0;
        for (std::size_t i = 0; i <= k; ++i) paid += ev[i].amount;
        const double spread = (xi + 1.0) * vol * std::sqrt(tk);
        const double drift = (r - 0.5 * vol * vol) * tk;
        const double hi = market.spot * std::exp(drift + spread);
        const double lo = std::max(market.spot * std::exp(drift - spread) - paid,
                                   1e-4 * market.spot);
        std::vector<double> s(static_cast<std::size_t>(nodes)), v(s.size());
        for (std::size_t j = 0; j < s.size(); ++j) {
            const double u = static_cast<double>(j) / static_cast<double>(s.size() - 1);
            s[j] = lo * std::exp(u * std::log(hi / lo));
            const auto integrand = [&](double sp) {
                const double post = sp - d_next;
                if (post <= 0.0) return 0.0;
                return next ? std::max((*next)(post), 0.0) : last(post);
            };
            v[j] = expectation(rule, s[j], r, vol, dt, xi, kinks, integrand);
        }
        next = std::make_unique<NaturalSpline>(s, v);
    }

    const double d1 = ev[0].amount;
    std::vector<double> kinks{d1};
    if (n == 1) kinks.push_back(d1 + k_t);
    const auto integrand = [&](double sp) {
        const double post = sp - d1;
        if (post <= 0.0) return 0.0;
        return next ? std::max((*next)(post), 0.0) : last(post);
    };
    return expectation(rule, market.spot, r, vol, ev[0].ex_date, xi, kinks, integrand);
}

}  // namespace

ClosedForm black_scholes(double spot, double strike, double rate, double vol, double expiry,
                         OptionKind kind)
{
    if (!(spot > 0.0) || !(strike > 0.0) || !(vol > 0.0) || !(expiry > 0.0))
        throw Error(ErrorCode::parameter, "closed form needs positive spot, strike, vol, expiry");
    const double sd = vol * std::sqrt(expiry);
    const double d1 = (std::log(spot / strike) + (rate + 0.5 * vol * vol) * expiry) / sd;
    const double d2 = d1 - sd;
    const double disc = strike * std::exp(-rate * expiry);
    ClosedForm out;
    out.gamma = normal_pdf(d1) / (spot * sd);
    const double decay = -spot * normal_pdf(d1) * vol / (2.0 * std::sqrt(expiry));
    if (kind == OptionKind::call) {
        out.premium = spot * normal_cdf(d1) - disc * normal_cdf(d2);
        out.delta = normal_cdf(d1);
        out.theta = decay - rate * disc * normal_cdf(d2);
    } else {
        out.premium = disc * normal_cdf(-d2) - spot * normal_cdf(-d1);
        out.delta = normal_cdf(d1) - 1.0;
        out.theta = decay + rate * disc * normal_cdf(-d2);
    }
    return out;
}

double quadrature_value(const MarketState& market, const OptionContract& contract,
                        const DividendSchedule& schedule, const QuadratureConfig& config)
{
    validate(market);
    validate(contract);
    validate(schedule, contract.expiry);
    if (config.points < 16) throw Error(ErrorCode::configuration, "quadrature points must be >= 16");
    if (!(config.width_sigmas > 0.0))
        throw Error(ErrorCode::configuration, "width_sigmas must be positive");
    const double call = quadrature_call(market, contract, schedule, config);
    if (contract.kind == OptionKind::call) return call;
    const double fwd = forward_price(market, schedule, 0.0, contract.expiry);
    return put_from_parity(call, fwd, terminal_strike(contract, schedule), market.rate,
                           contract.expiry);
}

QuadratureResult quadrature_price(const MarketState& market, const OptionContract& contract,
                                  const DividendSchedule& schedule,
                                  const QuadratureConfig& config)
{
    QuadratureResult out;
    out.price = quadrature_value(market, contract, schedule, config);
    QuadratureConfig fine = config;
    fine.points = 2 * config.points;
    if (config.nodes > 0) fine.nodes = 2 * config.nodes;
    out.refined = quadrature_value(market, contract, schedule, fine);
    out.precision_warning = std::abs(out.price - out.refined) > kSelfCheckTolerance;
    return out;
}

BumpGreeks bump_greeks(const PricingFunction& pricing_function, const MarketState& market,
                       const OptionContract& contract, const DividendSchedule& schedule,
                       double h)
{
    if (!(h > 0.0)) throw Error(ErrorCode::parameter, "bump size must be positive");
    if (!(market.spot - 2.0 * h > 0.0))
        throw Error(ErrorCode::parameter, "bump pushes spot below zero");
    MarketState up = market, down = market;
    up.spot += h;
    down.spot -= h;
    const PricingResult pu = pricing_function(up, contract, schedule);
    const PricingResult pd = pricing_function(down, contract, schedule);
    return {(pu.premium - pd.premium) / (2.0 * h), (pu.delta - pd.delta) / (2.0 * h)};
}

}  // namespace divflt
