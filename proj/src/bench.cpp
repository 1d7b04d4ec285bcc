#include "divflt/bench.hpp"

#include "divflt/error.hpp"
#include "divflt/oracles.hpp"
#include "divflt/pricer.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>

namespace divflt {

namespace {

OptionContract call_contract(double strike, double expiry = 1.0)
{
    return {strike, expiry, OptionKind::call, true};
}

DividendSchedule case_schedule(const std::string& id)
{
    if (id == "a") return table2_schedule(1);
    if (id == "b") return table2_schedule(2);
    throw Error(ErrorCode::configuration, "unknown time-accuracy case '" + id + "'");
}

std::string digits_field(const AccuracyRecord& a)
{
    return a.exact() ? std::string("exact") : fmt::format("{}", *a.digits);
}

}  // namespace

TimingSample measure(const std::function<void()>& op, int batches, int evals_per_batch)
{
    if (batches < 1 || evals_per_batch < 1)
        throw Error(ErrorCode::configuration, "batches and evals_per_batch must be >= 1");
    using clock = std::chrono::steady_clock;
    double lo = 0.0, hi = 0.0;
    for (int b = 0; b < batches; ++b) {
        const auto start = clock::now();
        for (int e = 0; e < evals_per_batch; ++e) op();
        const double elapsed = std::chrono::duration<double>(clock::now() - start).count();
        lo = b == 0 ? elapsed : std::min(lo, elapsed);
        hi = b == 0 ? elapsed : std::max(hi, elapsed);
    }
    if (!(lo > 0.0)) throw Error(ErrorCode::measurement, "batch time below clock resolution");
    return {lo / evals_per_batch, lo / hi};
}

AccuracyRecord accuracy(double price, double reference)
{
    AccuracyRecord rec{price, reference, std::nullopt};
    const double diff = std::abs(price - reference);
    if (diff > 0.0) rec.digits = -std::log10(diff);
    return rec;
}

MarketState reference_market() { return {100.0, 0.06, 0.30}; }

DividendSchedule table2_schedule(int scenario_id)
{
    if (scenario_id == 1) return {{{0.2, 4.0}, {0.4, 5.0}, {0.6, 6.0}, {0.8, 3.0}}};
    if (scenario_id == 2) return {{{0.2, 9.0}, {0.6, 9.0}}};
    throw Error(ErrorCode::configuration, "unknown scenario id");
}

std::vector<Table1Row> run_table1(std::size_t n, int quad_points, double quad_xi)
{
    const MarketState market = reference_market();
    const GridConfig grid{n, 7.5, std::nullopt};
    const QuadratureConfig quad{quad_points, quad_xi, 0};
    std::vector<Table1Row> rows;
    for (double d : {7.0, 20.0, 50.0})
        for (double t : {0.0001, 0.5, 0.9999})
            for (double k : {70.0, 100.0, 130.0}) {
                const DividendSchedule sched{{{t, d}}};
                const double flt = price(market, call_contract(k), sched, grid).premium;
                const double q = quadrature_value(market, call_contract(k), sched, quad);
                rows.push_back({t, d, k, flt, q, std::abs(flt - q)});
            }
    return rows;
}

std::vector<Table2Row> run_table2(std::size_t n, double h)
{
    const MarketState market = reference_market();
    const GridConfig grid{n, 7.5, std::nullopt};
    const PricingFunction engine = [grid](const MarketState& m, const OptionContract& c,
                                          const DividendSchedule& s) {
        return price(m, c, s, grid);
    };
    std::vector<Table2Row> rows;
    for (int id : {1, 2}) {
        const DividendSchedule sched = table2_schedule(id);
        for (double k : {70.0, 100.0, 130.0}) {
            const PricingResult res = engine(market, call_contract(k), sched);
            const BumpGreeks bump = bump_greeks(engine, market, call_contract(k), sched, h);
            rows.push_back({id, k, res.premium, res.delta, bump.delta, res.gamma, bump.gamma});
        }
    }
    return rows;
}

std::vector<BaselineRow> run_baseline(const BaselineConfig& config)
{
    const MarketState market{100.0, 0.06, config.vol};
    const GridConfig grid{config.n, 7.5, std::nullopt};
    std::vector<BaselineRow> rows;
    for (int i = 0; i <= config.steps; ++i) {
        const double y = config.moneyness_lo +
                         (config.moneyness_hi - config.moneyness_lo) * i / config.steps;
        const OptionContract c = call_contract(y * market.spot, config.expiry);
        const PricingResult f = price(market, c, {}, grid);
        const ClosedForm b = black_scholes(market.spot, c.strike, market.rate, market.vol,
                                           c.expiry, OptionKind::call);
        rows.push_back({y, f.premium, b.premium, std::abs(f.premium - b.premium), f.delta,
                        b.delta, f.gamma, b.gamma});
    }
    return rows;
}

std::vector<TimeAccuracyRow> run_time_accuracy(const TimeAccuracyConfig& config)
{
    const MarketState market = reference_market();
    std::vector<TimeAccuracyRow> rows;
    for (const auto& id : config.cases) {
        const DividendSchedule sched = case_schedule(id);
        for (double k : config.strikes) {
            const OptionContract c = call_contract(k);
            const double ref_engine =
                price(market, c, sched, {config.reference_n, 7.5, std::nullopt}).premium;
            const double ref_quad =
                quadrature_value(market, c, sched, {config.reference_points, config.reference_xi, 0});
            if (std::abs(ref_engine - ref_quad) > config.reference_gate)
                throw Error(ErrorCode::reference_validity,
                            fmt::format("case {} K={}: references {} and {} differ by {:.3e}",
                                        id, k, ref_engine, ref_quad,
                                        std::abs(ref_engine - ref_quad)));
            const double ref = ref_engine;
            for (std::size_t n : config.engine_sizes) {
                const GridConfig grid{n, 7.5, std::nullopt};
                double p = 0.0;
                const TimingSample ts = measure(
                    [&] { p = price(market, c, sched, grid).premium; }, config.batches,
                    config.evals_per_batch);
                rows.push_back({id, "flt", k, n, ts.best_mean, ts.stability, accuracy(p, ref)});
            }
            for (int pts : config.quad_points) {
                const QuadratureConfig quad{pts, config.quad_xi, 0};
                double p = 0.0;
                const TimingSample ts = measure(
                    [&] { p = quadrature_value(market, c, sched, quad); }, config.batches,
                    config.evals_per_batch);
                rows.push_back({id, "quad", k, static_cast<std::size_t>(pts), ts.best_mean,
                                ts.stability, accuracy(p, ref)});
            }
        }
    }
    return rows;
}

std::string to_csv(const std::vector<Table1Row>& rows)
{
    std::string out = "t,D,K,flt_price,quad_price,abs_diff\n";
    for (const auto& r : rows)
        out += fmt::format("{},{},{},{},{},{}\n", r.t, r.dividend, r.strike, r.flt_price,
                           r.quad_price, r.abs_diff);
    return out;
}

std::string to_csv(const std::vector<Table2Row>& rows)
{
    std::string out = "scenario_id,K,premium,delta,delta_bump,gamma,gamma_bump\n";
    for (const auto& r : rows)
        out += fmt::format("{},{},{},{},{},{},{}\n", r.scenario_id, r.strike, r.premium, r.delta,
                           r.delta_bump, r.gamma, r.gamma_bump);
    return out;
}

std::string to_csv(const std::vector<BaselineRow>& rows)
{
    std::string out =
        "moneyness,flt_price,bs_price,abs_error,flt_delta,bs_delta,flt_gamma,bs_gamma\n";
    for (const auto& r : rows)
        out += fmt::format("{},{},{},{},{},{},{},{}\n", r.moneyness, r.flt_price, r.bs_price,
                           r.abs_error, r.flt_delta, r.bs_delta, r.flt_gamma, r.bs_gamma);
    return out;
}

std::string to_csv(const std::vector<TimeAccuracyRow>& rows)
{
    std::string out = "case_id,pricer,K,n_points,seconds_per_eval,digits,stability\n";
    for (const auto& r : rows)
        out += fmt::format("{},{},{},{},{},{},{}\n", r.case_id, r.pricer, r.strike, r.n_points,
                           r.seconds_per_eval, digits_field(r.accuracy), r.stability);
    return out;
}

}  // namespace divflt
