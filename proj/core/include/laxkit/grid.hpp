#pragma once

#include "laxkit/prng.hpp"
#include "laxkit/tensor.hpp"

namespace laxkit {

/// Uniform periodic grid on [-L, L) with M points, x_j = -L + j h, h = 2L/M.
struct PeriodicGrid {
    int points = 0;
    double half_length = 0.0;

    double spacing() const { return 2.0 * half_length / points; }
    double x(int j) const { return -half_length + j * spacing(); }
};

/// Forward DFT, F_k = sum_j f_j exp(-2 pi i j k / M) (unscaled).
CVector fft(const CVector& f);
/// Inverse DFT with 1/M normalization.
CVector ifft(const CVector& F);

/// Spectral derivative of given order; the Nyquist mode is zeroed for odd
/// orders.
CVector spectral_derivative(const PeriodicGrid& g, const CVector& f, int order = 1);

/// Trigonometric interpolation of f onto the shifted grid x_j + offset.
/// Exact for band-limited data.
CVector shifted_samples(const PeriodicGrid& g, const CVector& f, double offset);

/// Periodic trapezoid rule: h * sum_j f_j.
cplx integrate(const PeriodicGrid& g, const CVector& f);

/// Random band-limited complex field: modes |k| <= kmax with amplitudes
/// decaying as 1/(1+k^2); overall scale `amplitude`.
CVector random_band_limited(const PeriodicGrid& g, int kmax, double amplitude,
                            SplitMix64& rng);
/// Real-valued variant.
CVector random_band_limited_real(const PeriodicGrid& g, int kmax, double amplitude,
                                 SplitMix64& rng);

}  // namespace laxkit
