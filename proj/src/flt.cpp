#include "divflt/flt.hpp"

#include "divflt/error.hpp"

#include <fftw3.h>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

namespace divflt {

namespace {

constexpr double kResidueTolerance = 1e-8;

// FFTW's planner is not thread-safe; executing an existing plan on new arrays is.
fftw_plan cached_plan(std::size_t n, Direction direction)
{
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, int>, fftw_plan> plans;
    const int sign = direction == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(n, sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    ComplexSequence in(n), out(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n),
                                      reinterpret_cast<fftw_complex*>(in.data()),
                                      reinterpret_cast<fftw_complex*>(out.data()), sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw Error(ErrorCode::internal, "FFT plan creation failed");
    plans.emplace(key, plan);
    return plan;
}

}  // namespace

double max_lambda(std::size_t n)
{
    return 700.0 * static_cast<double>(n) / static_cast<double>(n - 1);
}

void require_transform_size(std::size_t n)
{
    if (n < 2 || n % 2 != 0)
        throw Error(ErrorCode::size, "transform length must be even and >= 2, got " +
                                         std::to_string(n));
}

ComplexSequence dft(const ComplexSequence& seq, Direction direction)
{
    const std::size_t n = seq.size();
    require_transform_size(n);
    ComplexSequence in(seq), out(n);
    fftw_execute_dft(cached_plan(n, direction), reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    if (direction == Direction::inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& v : out) v *= scale;
    }
    return out;
}

ComplexSpectrum laplace_forward(std::span<const double> f, double lambda)
{
    const std::size_t n = f.size();
    require_transform_size(n);
    if (!std::isfinite(lambda) || lambda < 0.0 || lambda > max_lambda(n))
        throw Error(ErrorCode::parameter,
                    "lambda must lie in [0, " + std::to_string(max_lambda(n)) + "]");
    ComplexSequence g(n);
    const double nn = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = std::exp(-lambda * static_cast<double>(i) / nn) * f[i];
    return {dft(g, Direction::forward), lambda};
}

std::vector<double> laplace_inverse(const ComplexSpectrum& spec)
{
    const std::size_t n = spec.values.size();
    require_transform_size(n);
    ComplexSequence g = dft(spec.values, Direction::inverse);
    const double nn = static_cast<double>(n);
    std::vector<double> f(n);
    double peak = 0.0;
    double residue = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex v = std::exp(spec.lambda * static_cast<double>(i) / nn) * g[i];
        f[i] = v.real();
        peak = std::max(peak, std::abs(v));
        residue = std::max(residue, std::abs(v.imag()));
    }
    if (!std::isfinite(peak) || residue > kResidueTolerance * peak)
        throw Error(ErrorCode::numerical_integrity,
                    fmt::format("imaginary residue {:.3g} exceeds {:.0e} of peak {:.3g}", residue,
                                kResidueTolerance, peak));
    return f;
}

ComplexSequence laplace_frequencies(std::size_t n, double lambda)
{
    require_transform_size(n);
    const double nn = static_cast<double>(n);
    ComplexSequence s(n);
    for (std::size_t k = 0; k < n; ++k)
        s[k] = Complex(lambda / nn, 2.0 * std::numbers::pi * static_cast<double>(k) / nn);
    return s;
}

ComplexSpectrum apply_symbol(const ComplexSpectrum& spec,
                             const std::function<Complex(Complex)>& symbol)
{
    const std::size_t n = spec.values.size();
    require_transform_size(n);
    const double nn = static_cast<double>(n);
    const double re = spec.lambda / nn;
    ComplexSpectrum out{ComplexSequence(n), spec.lambda};
    for (std::size_t k = 0; k < n; ++k) {
        Complex m;
        if (k == n / 2) {
            m = 0.5 * (symbol({re, std::numbers::pi}) + symbol({re, -std::numbers::pi}));
        } else {
            const double j = k < n / 2 ? static_cast<double>(k)
                                       : static_cast<double>(k) - nn;
            m = symbol({re, 2.0 * std::numbers::pi * j / nn});
        }
        out.values[k] = m * spec.values[k];
    }
    return out;
}

ComplexSpectrum spectral_derivative(const ComplexSpectrum& spec, double f0, double rho)
{
    if (!(rho > 0.0)) throw Error(ErrorCode::parameter, "spacing rho must be positive");
    ComplexSpectrum out = apply_symbol(spec, [rho](Complex s) { return s / rho; });
    for (auto& v : out.values) v -= f0;
    return out;
}

}  // namespace divflt
