#include "laxkit/grid.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace laxkit {

namespace {

Eigen::FFT<double>& fft_engine() {
    thread_local Eigen::FFT<double> engine;
    return engine;
}

/// Signed integer wavenumber index for mode k of an M-point DFT.
int mode_index(int k, int m) { return (k <= m / 2) ? k : k - m; }

}  // namespace

CVector fft(const CVector& f) {
    std::vector<cplx> in(f.data(), f.data() + f.size()), out(size_t(f.size()));
    fft_engine().fwd(out, in);
    return Eigen::Map<CVector>(out.data(), Eigen::Index(out.size()));
}

CVector ifft(const CVector& F) {
    std::vector<cplx> in(F.data(), F.data() + F.size()), out(size_t(F.size()));
    fft_engine().inv(out, in);
    return Eigen::Map<CVector>(out.data(), Eigen::Index(out.size()));
}

CVector spectral_derivative(const PeriodicGrid& g, const CVector& f, int order) {
    const int m = g.points;
    if (f.size() != m) throw std::invalid_argument("spectral_derivative: size mismatch");
    CVector F = fft(f);
    const double base = M_PI / g.half_length;  // 2 pi / (2 L)
    for (int k = 0; k < m; ++k) {
        const int idx = mode_index(k, m);
        if (order % 2 == 1 && m % 2 == 0 && k == m / 2) {
            F[k] = 0.0;
            continue;
        }
        F[k] *= std::pow(cplx(0.0, base * idx), order);
    }
    return ifft(F);
}

CVector shifted_samples(const PeriodicGrid& g, const CVector& f, double offset) {
    const int m = g.points;
    CVector F = fft(f);
    const double base = M_PI / g.half_length;
    for (int k = 0; k < m; ++k) {
        const int idx = mode_index(k, m);
        F[k] *= std::exp(cplx(0.0, base * idx * offset));
    }
    return ifft(F);
}

cplx integrate(const PeriodicGrid& g, const CVector& f) {
    return g.spacing() * f.sum();
}

CVector random_band_limited(const PeriodicGrid& g, int kmax, double amplitude,
                            SplitMix64& rng) {
    const int m = g.points;
    CVector F = CVector::Zero(m);
    for (int k = -kmax; k <= kmax; ++k) {
        const double w = 1.0 / (1.0 + double(k) * double(k));
        const cplx c(rng.uniform(-1, 1), rng.uniform(-1, 1));
        F[(k + m) % m] += w * c;
    }
    CVector f = ifft(F) * double(m);
    const double peak = f.cwiseAbs().maxCoeff();
    if (peak > 0) f *= amplitude / peak;
    return f;
}

CVector random_band_limited_real(const PeriodicGrid& g, int kmax, double amplitude,
                                 SplitMix64& rng) {
    CVector f = random_band_limited(g, kmax, amplitude, rng);
    CVector re = f.real().cast<cplx>();
    const double peak = re.cwiseAbs().maxCoeff();
    if (peak > 0) re *= amplitude / peak;
    return re;
}

}  // namespace laxkit
