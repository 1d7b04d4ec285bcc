#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace divflt {

using Complex = std::complex<double>;
using ComplexSequence = std::vector<Complex>;

enum class Direction { forward, inverse };

// Largest admissible decay parameter for a length-n transform.
double max_lambda(std::size_t n);

// Throws a size error unless n is even and at least 2.
void require_transform_size(std::size_t n);

/// Discrete Fourier transform. Forward: sum_n exp(-i 2 pi k n / N) a_n.
/// Inverse: (1/N) sum_k exp(+i 2 pi k n / N) a_k.
ComplexSequence dft(const ComplexSequence& seq, Direction direction);

struct ComplexSpectrum {
    ComplexSequence values;
    double lambda = 0.0;
};

/// f_bar_k = sum_n exp(-s_k n) f_n, computed as the DFT of exp(-lambda n / N) f_n.
ComplexSpectrum laplace_forward(std::span<const double> f, double lambda);

/// f_n = exp(lambda n / N) * IDFT(f_bar)_n. Throws a numerical-integrity error when
/// the imaginary residue exceeds 1e-8 of the largest output magnitude.
std::vector<double> laplace_inverse(const ComplexSpectrum& spec);

/// s_k = lambda / N + i 2 pi k / N in DFT bin order.
ComplexSequence laplace_frequencies(std::size_t n, double lambda);

/// Multiplies each bin by symbol(s_k). The imaginary part of s_k is taken as the
/// aliased frequency in (-pi, pi); the Nyquist bin receives the mean of the symbol at
/// +pi and -pi so that real sequences stay real.
ComplexSpectrum apply_symbol(const ComplexSpectrum& spec,
                             const std::function<Complex(Complex)>& symbol);

/// Transform of f' given the transform of f: (s / rho) f_bar - f0.
ComplexSpectrum spectral_derivative(const ComplexSpectrum& spec, double f0, double rho);

}  // namespace divflt
