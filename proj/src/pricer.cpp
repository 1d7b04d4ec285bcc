#include "divflt/pricer.hpp"

#include "divflt/error.hpp"
#include "divflt/normal.hpp"
#include "divflt/spline.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace divflt {

namespace {

// A first segment whose diffusion width is below this many grid spacings is evolved
// in closed form; the grid cannot resolve the kernel.
constexpr double kKinkMargin = 0.5;
constexpr double kShareSigmas = 6.0;
constexpr double kMinSigmas = 3.0;
constexpr double kBoundSlack = 1e-8;
constexpr double kResolvedWidth = 2.0;
constexpr double kCoverageWarning = 1e-8;

bool is_even_size(std::size_t n) { return n >= 4 && n % 2 == 0; }

// Heat-evolved call payoff: K E[(exp(x + s Z) - 1)^+].
double evolved_payoff(double x, double s, double strike)
{
    if (s <= 0.0) return strike * std::max(std::exp(x) - 1.0, 0.0);
    return strike * (std::exp(x + 0.5 * s * s) * normal_cdf(x / s + s) - normal_cdf(x / s));
}

// Trigonometric interpolant of a Laplace spectrum at fractional index p.
double spectral_value(const ComplexSpectrum& spec, double p)
{
    const std::size_t n = spec.values.size();
    const double nn = static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const Complex& c = spec.values[k];
        if (k == 0) sum += c.real();
        else if (k == n / 2) sum += c.real() * std::cos(std::numbers::pi * p);
        else if (k < n / 2) {
            const double w = 2.0 * std::numbers::pi * static_cast<double>(k) * p / nn;
            sum += 2.0 * (c.real() * std::cos(w) - c.imag() * std::sin(w));
        }
    }
    return std::exp(spec.lambda * p / nn) * sum / nn;
}

}  // namespace

GridSpec build_grid(double vol, double expiry, std::size_t n, double n_sigma, double center)
{
    if (!is_even_size(n))
        throw Error(ErrorCode::configuration, "grid size must be even and >= 4");
    if (!(n_sigma > 0.0)) throw Error(ErrorCode::configuration, "n_sigma must be positive");
    if (!(vol > 0.0)) throw Error(ErrorCode::configuration, "vol must be positive");
    if (!(expiry > 0.0)) throw Error(ErrorCode::configuration, "expiry must be positive");
    if (!std::isfinite(center)) throw Error(ErrorCode::configuration, "center must be finite");

    GridSpec g;
    g.n = n;
    g.n_sigma = n_sigma;
    g.half_width = 2.0 * n_sigma * vol * std::sqrt(expiry);
    g.spacing = g.half_width / static_cast<double>(n);
    const long shift = std::lround(center / g.spacing);
    g.center = static_cast<double>(shift) * g.spacing;
    const long first = shift - static_cast<long>(n / 2);
    g.abscissas.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        g.abscissas[i] = static_cast<double>(first + static_cast<long>(i)) * g.spacing;
    g.frequencies = laplace_frequencies(n, 0.0);
    return g;
}

ValueGrid initial_payoff(const GridSpec& grid, double terminal_strike)
{
    if (!(terminal_strike > 0.0))
        throw Error(ErrorCode::parameter, "terminal strike must be positive");
    ValueGrid v{0.0, std::vector<double>(grid.n)};
    for (std::size_t i = 0; i < grid.n; ++i)
        v.values[i] = terminal_strike * std::max(std::exp(grid.abscissas[i]) - 1.0, 0.0);
    return v;
}

double kink_bias_factor(double theta, double smear_ratio)
{
    if (smear_ratio < 1e-3) return theta * theta - theta + 1.0 / 6.0;
    const double a = 2.0 * std::numbers::pi * std::numbers::pi * smear_ratio * smear_ratio;
    double sum = 0.0;
    for (int k = 1;; ++k) {
        const double kk = static_cast<double>(k);
        const double damp = std::exp(-a * kk * kk);
        if (damp < 1e-18) break;
        sum += std::cos(2.0 * std::numbers::pi * kk * theta) * damp / (kk * kk);
    }
    return sum / (std::numbers::pi * std::numbers::pi);
}

void add_kink_correction(ValueGrid& values, const GridSpec& grid, double location, double jump,
                         double smear)
{
    const double rho = grid.spacing;
    double p = (location - grid.abscissas.front()) / rho;
    const double nearest = std::round(p);
    if (std::abs(p - nearest) < 1e-9) p = nearest;
    const double m = std::floor(p);
    const double theta = p - m;
    const double weight = 0.5 * rho * jump * kink_bias_factor(theta, smear / rho);
    const long i = static_cast<long>(m);
    const long n = static_cast<long>(grid.n);
    if (i >= 0 && i < n) values.values[static_cast<std::size_t>(i)] += weight * (1.0 - theta);
    if (theta > 0.0 && i + 1 >= 0 && i + 1 < n)
        values.values[static_cast<std::size_t>(i + 1)] += weight * theta;
}

double select_lambda(const ValueGrid& values, double floor_eps)
{
    const auto& f = values.values;
    const std::size_t n = f.size();
    require_transform_size(n);
    if (std::none_of(f.begin(), f.end(), [](double v) { return v > 0.0; }))
        throw Error(ErrorCode::degenerate_payoff, "no strictly positive value on the grid");
    const double top = f.back();
    if (!(top > 0.0))
        throw Error(ErrorCode::degenerate_payoff, "upper grid edge carries no value");
    const double nn = static_cast<double>(n);
    const double lambda = nn / (nn - 1.0) * std::log(top / std::max(f.front(), floor_eps));
    return std::clamp(lambda, 0.0, max_lambda(n));
}

EvolvedSpectrum evolve_segment(const EvolvedSpectrum& spec, double vol, double dtau,
                               double spacing)
{
    if (dtau < 0.0) throw Error(ErrorCode::interval, "negative evolution interval");
    const double c = vol * vol * dtau / (2.0 * spacing * spacing);
    return {spec.tau + dtau,
            apply_symbol(spec.spectrum, [c](Complex s) { return std::exp(c * s * s); })};
}

ValueGrid remap_dividend(const ValueGrid& values, const GridSpec& grid, double dividend,
                         double tau, double terminal_strike, double rate, double vol)
{
    if (!(dividend > 0.0)) throw Error(ErrorCode::parameter, "dividend must be positive");
    const double nu = rate - 0.5 * vol * vol;
    const std::size_t n = grid.n;
    std::vector<double> shifted(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double s = terminal_strike * std::exp(grid.abscissas[j] - nu * tau);
        shifted[j] = std::log((s + dividend) / terminal_strike) + nu * tau;
        if (j > 0 && !(shifted[j] > shifted[j - 1]))
            throw Error(ErrorCode::internal, "shifted abscissas are not increasing");
    }
    NaturalSpline spline(shifted, values.values);
    ValueGrid out{values.tau, spline.evaluate(grid.abscissas)};
    // Below the shifted grid the value is continued with its local exponential decay.
    const double f_a = values.values.front();
    const double decay = f_a > 0.0 ? std::max(spline.derivative(shifted.front()) / f_a, 0.0) : 0.0;
    for (std::size_t j = 0; j < n && grid.abscissas[j] < shifted.front(); ++j)
        out.values[j] = f_a > 0.0 ? f_a * std::exp(decay * (grid.abscissas[j] - shifted.front()))
                                  : 0.0;
    return out;
}

PricingResult price_call(const MarketState& market, const OptionContract& contract,
                         const DividendSchedule& schedule, const GridConfig& config)
{
    validate(market);
    validate(contract);
    validate(schedule, contract.expiry);
    const double k_t = terminal_strike(contract, schedule);
    const double s0 = market.spot;
    const double r = market.rate;
    const double vol = market.vol;
    const double T = contract.expiry;
    const double nu = r - 0.5 * vol * vol;
    const double x_t = std::log(s0 / k_t) + nu * T;

    // The grid spans n_sigma deviations around x_T. The upper edge also covers the
    // share-measure mass near x_T + dev^2, and a payoff kink inside the grid keeps at least
    // kKinkMargin * n_sigma deviations below it.
    const double dev = vol * std::sqrt(T);
    const double upper = x_t + std::max(config.n_sigma, dev + kShareSigmas) * dev;
    double lower = x_t - config.n_sigma * dev;
    if (lower < 0.0) lower = std::min(lower, -kKinkMargin * config.n_sigma * dev);
    const GridSpec grid =
        build_grid(vol, T, config.n, (upper - lower) / (2.0 * dev), 0.5 * (upper + lower));
    const auto& x = grid.abscissas;
    const double rho = grid.spacing;
    if (config.n_sigma < kMinSigmas || x_t < x.front() || x_t > x.back())
        throw Error(ErrorCode::coverage,
                    fmt::format("grid covers fewer than {} deviations around x_T; increase n_sigma",
                                kMinSigmas));
    const double floor_eps = config.floor_eps.value_or(1e-12 * k_t);
    if (!(floor_eps > 0.0)) throw Error(ErrorCode::configuration, "floor_eps must be positive");

    PricingResult res;
    Diagnostics& diag = res.diagnostics;
    diag.x_t = x_t;
    diag.n = grid.n;
    diag.n_sigma = grid.n_sigma;
    diag.spacing = rho;
    diag.center = grid.center;
    diag.segments = schedule.events.size() + 1;

    ValueGrid values = initial_payoff(grid, k_t);
    if (values.values.front() > kCoverageWarning * k_t)
        diag.warnings.push_back("payoff is not negligible at the lower grid edge");
    if (std::none_of(values.values.begin(), values.values.end(),
                     [](double v) { return v > 0.0; })) {
        // The whole grid, n_sigma deviations around x_T, lies out of the money.
        diag.warnings.push_back("grid lies entirely out of the money; value below resolution");
        return res;
    }

    auto spectral_step = [&](ValueGrid& v, double dtau) {
        const double lambda = select_lambda(v, floor_eps);
        diag.segment_lambdas.push_back(lambda);
        EvolvedSpectrum spec{v.tau, laplace_forward(v.values, lambda)};
        spec = evolve_segment(spec, vol, dtau, rho);
        v.tau = spec.tau;
        v.values = laplace_inverse(spec.spectrum);
        return spec;
    };

    bool first = true;
    double tau = 0.0;
    for (auto it = schedule.events.rbegin(); it != schedule.events.rend(); ++it) {
        const double tau_i = T - it->ex_date;
        const double dtau = tau_i - tau;
        const double width = vol * std::sqrt(dtau);
        if (first && width < kResolvedWidth * rho) {
            diag.closed_form_first_segment = true;
            diag.segment_lambdas.push_back(0.0);
            const double d = it->amount;
            for (std::size_t j = 0; j < grid.n; ++j) {
                const double s = k_t * std::exp(x[j] - nu * tau_i);
                values.values[j] =
                    s > d ? evolved_payoff(std::log((s - d) / k_t) + nu * tau_i, width, k_t)
                          : 0.0;
            }
            values.tau = tau_i;
            const double s_kink = k_t * std::exp(-nu * tau_i) + d;
            const double stretch = s_kink / (s_kink - d);
            add_kink_correction(values, grid, std::log(s_kink / k_t) + nu * tau_i,
                                k_t * stretch, width / stretch);
        } else {
            if (first) add_kink_correction(values, grid, 0.0, k_t);
            spectral_step(values, dtau);
            values = remap_dividend(values, grid, it->amount, tau_i, k_t, r, vol);
        }
        tau = tau_i;
        first = false;
    }
    if (first) add_kink_correction(values, grid, 0.0, k_t);

    const EvolvedSpectrum final_spec = spectral_step(values, T - tau);
    diag.lambda = final_spec.spectrum.lambda;

    // Derivatives use the exact trigonometric interpolant so that bumped deltas
    // stay consistent with the spectral gamma.
    const double p = (x_t - x.front()) / rho;
    const double f = NaturalSpline(x, values.values)(x_t);
    const double fx = spectral_value(spectral_derivative(final_spec.spectrum, 0.0, rho), p);
    const double fxx = spectral_value(
        apply_symbol(final_spec.spectrum, [rho](Complex s) { return s * s / (rho * rho); }), p);
    const double disc = std::exp(-r * T);
    res.premium = f * disc;
    const double fwd = forward_price(market, schedule, 0.0, T);
    const double slack = kBoundSlack * fwd;
    if (!std::isfinite(f) || f < std::max(fwd - k_t, 0.0) - slack || f > fwd + slack)
        throw Error(ErrorCode::numerical_integrity,
                    fmt::format("premium {:.6g} violates no-arbitrage bounds; refine the grid",
                                f * disc));
    res.delta = fx * disc / s0;
    res.gamma = (fxx - fx) * disc / (s0 * s0);
    res.theta = r * res.premium - s0 * r * res.delta - 0.5 * vol * vol * s0 * s0 * res.gamma;
    diag.pde_residual = res.theta + s0 * r * res.delta + 0.5 * vol * vol * s0 * s0 * res.gamma -
                        r * res.premium;
    return res;
}

PricingResult price(const MarketState& market, const OptionContract& contract,
                    const DividendSchedule& schedule, const GridConfig& config)
{
    PricingResult call = price_call(market, contract, schedule, config);
    if (contract.kind == OptionKind::call) return call;

    const double k_t = terminal_strike(contract, schedule);
    const double fwd = forward_price(market, schedule, 0.0, contract.expiry);
    const double s0 = market.spot;
    const double r = market.rate;
    const double vol = market.vol;
    PricingResult put = call;
    put.premium = put_from_parity(call.premium, fwd, k_t, r, contract.expiry);
    put.delta = call.delta - 1.0;
    put.gamma = call.gamma;
    put.theta = r * put.premium - s0 * r * put.delta - 0.5 * vol * vol * s0 * s0 * put.gamma;
    put.diagnostics.pde_residual = put.theta + s0 * r * put.delta +
                                   0.5 * vol * vol * s0 * s0 * put.gamma - r * put.premium;
    return put;
}

}  // namespace divflt
