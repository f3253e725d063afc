#pragma once

#include "laxkit/tensor.hpp"

#include <functional>
#include <string>

namespace laxkit {

/// Classical r-matrix family: evaluates to a site_dim^2 x site_dim^2 operator
/// at a spectral parameter.  Evaluation within `pole_guard` of a pole throws
/// instead of returning a huge matrix.
struct SpectralOperator {
    int site_dim = 2;
    std::string kind;  // "yangian" | "trig-An" | "sine-gordon" | "toda-linear" | fixtures
    std::function<CMatrix(cplx)> evaluate;
    std::function<bool(cplx)> near_pole;  // true if evaluation is disallowed

    CMatrix operator()(cplx lambda) const;
};

inline constexpr double kPoleGuard = 1e-8;

/// r(lambda) = P / lambda on C^n (x) C^n.
SpectralOperator yangian_r(int n);

/// Trigonometric A_n family on C^(n+1) (x) C^(n+1):
/// r(l) = coth(l) sum_i e_ii (x) e_ii
///      + (1/sinh l) sum_{i != j} exp([sgn(i-j) - (i-j) 2/(n+1)] l) e_ij (x) e_ji.
SpectralOperator trig_An_r(int n);

/// 4x4 sine-Gordon r-matrix in 2x2 block form:
/// (1/sinh l) [ ((sz+1)/2) cosh l , s- ; s+ , ((-sz+1)/2) cosh l ].
SpectralOperator sine_gordon_r();

/// Exchange-type r for the N-site periodic Toda chain in the N x N (linear)
/// description, multiplicative parameters u1 = e^{2 l1}, u2 = e^{2 l2}:
///   r(u1,u2) = -[ (u1+u2)/2 sum_j e_jj (x) e_jj
///                 + u1 sum_{k>j} e_jk (x) e_kj
///                 + u2 sum_{k<j} e_jk (x) e_kj ] / (u1 - u2).
/// Coefficients are pinned by the exchange relations of the periodic Toda Lax
/// matrix under the {p, q} = delta bracket; see tests/test_discrete.cpp.
CMatrix toda_linear_r(int sites, cplx u1, cplx u2);

/// Same operator in the additive parameterization, evaluated at separation
/// lambda via u_i = e^{2 lambda_i} (only the difference matters).
SpectralOperator toda_linear_r_additive(int sites);

/// Spectral-independent permutation "r" -- a deliberate non-solution used as
/// a negative control in the CYBE checks.
SpectralOperator permutation_fixture(int n);

/// Max-norm of [r12(l1-l2), r13(l1) + r23(l2)] + [r13(l1), r23(l2)]
/// on the three-leg space (C^site_dim)^(x3).
double cybe_residual(const SpectralOperator& r, cplx l1, cplx l2);

/// Max-norm of r12(l) + r21(-l) with r21 = P r12 P.
double skew_symmetry_residual(const SpectralOperator& r, cplx l);

}  // namespace laxkit
