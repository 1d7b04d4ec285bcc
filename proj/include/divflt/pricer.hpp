#pragma once

#include "divflt/flt.hpp"
#include "divflt/model.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace divflt {

struct GridSpec {
    std::size_t n = 0;
    double n_sigma = 0.0;
    double half_width = 0.0;  // L
    double spacing = 0.0;     // rho = L / N
    double center = 0.0;      // multiple of rho; x_0 = center - L / 2
    std::vector<double> abscissas;
    double lambda = 0.0;
    ComplexSequence frequencies;
};

struct ValueGrid {
    double tau = 0.0;
    std::vector<double> values;
};

struct EvolvedSpectrum {
    double tau = 0.0;
    ComplexSpectrum spectrum;
};

struct GridConfig {
    std::size_t n = 1024;
    double n_sigma = 7.5;
    std::optional<double> floor_eps;  // defaults to 1e-12 * K_T

    bool operator==(const GridConfig&) const = default;
};

struct Diagnostics {
    double lambda = 0.0;  // decay parameter of the final segment
    std::vector<double> segment_lambdas;
    double x_t = 0.0;
    std::size_t n = 0;
    double n_sigma = 0.0;
    double spacing = 0.0;
    double center = 0.0;
    std::size_t segments = 0;
    bool closed_form_first_segment = false;
    double pde_residual = 0.0;
    std::vector<std::string> warnings;
};

struct PricingResult {
    double premium = 0.0;
    double delta = 0.0;
    double gamma = 0.0;
    double theta = 0.0;
    Diagnostics diagnostics;
};

/// L = 2 n_sigma vol sqrt(T), rho = L / N, x_n = center - L / 2 + n rho.
/// The center is rounded to a multiple of rho so that x = 0 is always a node.
GridSpec build_grid(double vol, double expiry, std::size_t n, double n_sigma,
                    double center = 0.0);

/// F(x_n, 0) = K_T max(exp(x_n) - 1, 0).
ValueGrid initial_payoff(const GridSpec& grid, double terminal_strike);

/// Trapezoid-rule bias coefficient of a slope discontinuity at fractional node offset
/// theta, smoothed by a Gaussian of width smear_ratio grid spacings.
double kink_bias_factor(double theta, double smear_ratio);

/// Cancels the leading O(rho^2) error that later spectral evolution incurs from a slope
/// jump of size `jump` at x = location, blurred over `smear` log-units.
void add_kink_correction(ValueGrid& values, const GridSpec& grid, double location,
                         double jump, double smear = 0.0);

/// lambda = N / (N - 1) ln(F_{N-1} / max(F_0, floor_eps)), clamped to [0, max_lambda].
double select_lambda(const ValueGrid& values, double floor_eps);

/// Multiplies each bin by exp((vol s_k)^2 / (2 rho^2) dtau).
EvolvedSpectrum evolve_segment(const EvolvedSpectrum& spec, double vol, double dtau,
                               double spacing);

/// Shifts the grid across an ex-date: interpolates the pairs (x'_j, F_j) back onto x.
ValueGrid remap_dividend(const ValueGrid& values, const GridSpec& grid, double dividend,
                         double tau, double terminal_strike, double rate, double vol);

PricingResult price_call(const MarketState& market, const OptionContract& contract,
                         const DividendSchedule& schedule, const GridConfig& config = {});

/// Calls go straight to the engine; puts follow from parity.
PricingResult price(const MarketState& market, const OptionContract& contract,
                    const DividendSchedule& schedule, const GridConfig& config = {});

}  // namespace divflt
