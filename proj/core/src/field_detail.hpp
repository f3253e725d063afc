#pragma once

#include "laxkit/cartan.hpp"
#include "laxkit/fields.hpp"

namespace laxkit::fields::detail {

inline const CMatrix& sigma_x() {
    static const CMatrix m = (CMatrix(2, 2) << 0, 1, 1, 0).finished();
    return m;
}
inline const CMatrix& sigma_y() {
    static const CMatrix m = (CMatrix(2, 2) << 0, cplx(0, -1), cplx(0, 1), 0).finished();
    return m;
}
inline const CMatrix& sigma_z() {
    static const CMatrix m = (CMatrix(2, 2) << 1, 0, 0, -1).finished();
    return m;
}

inline const CartanData& a2() {
    static const CartanData cd = cartan_data(2);
    return cd;
}

/// Om sigma^y Om^{-1} and Om^{-1} sigma^y Om for Om = diag(e^{i b phi/4}, e^{-i b phi/4}).
inline CMatrix sg_conj_plus(double beta, cplx phi) {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 1) = cplx(0, -1) * std::exp(cplx(0, beta / 2.0) * phi);
    m(1, 0) = cplx(0, 1) * std::exp(cplx(0, -beta / 2.0) * phi);
    return m;
}
inline CMatrix sg_conj_minus(double beta, cplx phi) {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 1) = cplx(0, -1) * std::exp(cplx(0, -beta / 2.0) * phi);
    m(1, 0) = cplx(0, 1) * std::exp(cplx(0, beta / 2.0) * phi);
    return m;
}

/// Diagonal gauge factor g = exp(s (phi . H)) for the A2 defining rep.
inline CMatrix a2_gauge(double s, cplx phi1, cplx phi2) {
    const CartanData& cd = a2();
    CVector v(2);
    v << phi1, phi2;
    CMatrix expo = s * cd.dot_H(v);
    CMatrix g = CMatrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i) g(i, i) = std::exp(expo(i, i));
    return g;
}

/// gamma_k = exp(beta alpha_k . Phi), k = 0,1,2 (three affine roots).
inline std::array<cplx, 3> a2_gammas(double beta, cplx phi1, cplx phi2) {
    const CartanData& cd = a2();
    std::array<cplx, 3> g;
    for (int k = 0; k < 3; ++k) {
        const auto& al = cd.simple_roots[size_t(k)];
        g[size_t(k)] = std::exp(beta * (al[0] * phi1 + al[1] * phi2));
    }
    return g;
}

/// X_- = g^{-2} E_- g^2 = gamma_1 e21 + gamma_2 e32 - gamma_3 e13.
inline CMatrix a2_x_minus(double beta, cplx phi1, cplx phi2) {
    const auto g = a2_gammas(beta, phi1, phi2);
    CMatrix x = CMatrix::Zero(3, 3);
    x(1, 0) = g[0];
    x(2, 1) = g[1];
    x(0, 2) = -g[2];
    return x;
}

/// X_+ = g^2 E_+ g^{-2} = gamma_1 e12 + gamma_2 e23 - gamma_3 e31.
inline CMatrix a2_x_plus(double beta, cplx phi1, cplx phi2) {
    const auto g = a2_gammas(beta, phi1, phi2);
    CMatrix x = CMatrix::Zero(3, 3);
    x(0, 1) = g[0];
    x(1, 2) = g[1];
    x(2, 0) = -g[2];
    return x;
}

/// theta-combinations (beta/2) Theta . H = diag(a, b, c) for theta = (t1, t2).
inline std::array<cplx, 3> a2_abc(double beta, cplx t1, cplx t2) {
    const double s3 = std::sqrt(3.0);
    return {beta / 2.0 * (t1 / 2.0 + t2 / (2.0 * s3)),
            beta / 2.0 * (-t1 / 2.0 + t2 / (2.0 * s3)),
            -beta / 2.0 * t2 / s3};
}

}  // namespace laxkit::fields::detail
