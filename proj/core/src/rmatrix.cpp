#include "laxkit/rmatrix.hpp"

#include <cmath>
#include <stdexcept>

namespace laxkit {

CMatrix SpectralOperator::operator()(cplx lambda) const {
    if (near_pole && near_pole(lambda))
        throw std::domain_error("SpectralOperator: evaluation at or near a pole");
    return evaluate(lambda);
}

SpectralOperator yangian_r(int n) {
    if (n < 2) throw std::invalid_argument("yangian_r: n >= 2");
    CMatrix p = permutation_operator(n);
    SpectralOperator op;
    op.site_dim = n;
    op.kind = "yangian";
    op.near_pole = [](cplx l) { return std::abs(l) < kPoleGuard; };
    op.evaluate = [p](cplx l) { return CMatrix((1.0 / l) * p); };
    return op;
}

SpectralOperator trig_An_r(int n) {
    if (n < 1) throw std::invalid_argument("trig_An_r: n >= 1");
    const int d = n + 1;
    SpectralOperator op;
    op.site_dim = d;
    op.kind = "trig-An";
    op.near_pole = [](cplx l) { return std::abs(std::sinh(l)) < kPoleGuard; };
    op.evaluate = [n, d](cplx l) {
        const cplx sh = std::sinh(l);
        const cplx ch = std::cosh(l);
        CMatrix r = CMatrix::Zero(d * d, d * d);
        for (int i = 0; i < d; ++i)
            r((i * d) + i, (i * d) + i) += ch / sh;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                if (i == j) continue;
                const double sgn = (i > j) ? 1.0 : -1.0;
                const double shift = double(i - j) * 2.0 / double(n + 1);
                const cplx w = std::exp((sgn - shift) * l) / sh;
                // e_ij (x) e_ji: row (i,j), column (j,i) in 0-based legs
                r(i * d + j, j * d + i) += w;
            }
        return r;
    };
    return op;
}

SpectralOperator sine_gordon_r() {
    SpectralOperator op;
    op.site_dim = 2;
    op.kind = "sine-gordon";
    op.near_pole = [](cplx l) { return std::abs(std::sinh(l)) < kPoleGuard; };
    op.evaluate = [](cplx l) {
        const cplx sh = std::sinh(l);
        const cplx ch = std::cosh(l);
        CMatrix r = CMatrix::Zero(4, 4);
        // blocks: (1,1) = diag(1,0) cosh, (2,2) = diag(0,1) cosh,
        //         (1,2) = sigma^-,  (2,1) = sigma^+
        r(0, 0) = ch;
        r(3, 3) = ch;
        r(1, 2) = 1.0;  // sigma^- block: entry (2,1) of block (1,2)
        r(2, 1) = 1.0;  // sigma^+ block: entry (1,2) of block (2,1)
        return CMatrix(r / sh);
    };
    return op;
}

CMatrix toda_linear_r(int sites, cplx u1, cplx u2) {
    const int d = sites;
    const cplx den = u1 - u2;
    if (std::abs(den) < kPoleGuard * std::max(std::abs(u1), std::abs(u2)))
        throw std::domain_error("toda_linear_r: u1 == u2 pole");
    CMatrix r = CMatrix::Zero(d * d, d * d);
    const cplx diag = -(u1 + u2) / (2.0 * den);
    for (int j = 0; j < d; ++j) r(j * d + j, j * d + j) = diag;
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
            if (j == k) continue;
            const cplx w = (k > j) ? u1 : u2;
            r(j * d + k, k * d + j) = -w / den;
        }
    return r;
}

SpectralOperator toda_linear_r_additive(int sites) {
    SpectralOperator op;
    op.site_dim = sites;
    op.kind = "toda-linear";
    op.near_pole = [](cplx l) { return std::abs(std::sinh(l)) < kPoleGuard; };
    op.evaluate = [sites](cplx l) {
        return toda_linear_r(sites, std::exp(2.0 * l), cplx(1.0));
    };
    return op;
}

SpectralOperator permutation_fixture(int n) {
    CMatrix p = permutation_operator(n);
    SpectralOperator op;
    op.site_dim = n;
    op.kind = "permutation-fixture";
    op.near_pole = [](cplx) { return false; };
    op.evaluate = [p](cplx) { return p; };
    return op;
}

double cybe_residual(const SpectralOperator& r, cplx l1, cplx l2) {
    const int d = r.site_dim;
    const CMatrix r12 = embed_two_leg(r(l1 - l2), 0, 1, 3, d);
    const CMatrix r13 = embed_two_leg(r(l1), 0, 2, 3, d);
    const CMatrix r23 = embed_two_leg(r(l2), 1, 2, 3, d);
    const CMatrix sum = r13 + r23;
    const CMatrix lhs = r12 * sum - sum * r12 + r13 * r23 - r23 * r13;
    return max_abs(lhs);
}

double skew_symmetry_residual(const SpectralOperator& r, cplx l) {
    const CMatrix p = permutation_operator(r.site_dim);
    const CMatrix r12 = r(l);
    const CMatrix r21 = p * r(-l) * p;
    return max_abs(CMatrix(r12 + r21));
}

}  // namespace laxkit
