#include "laxkit/discrete.hpp"

#include <cmath>
#include <stdexcept>

namespace laxkit::discrete {

namespace {

int wrap(int i, int n) { return ((i % n) + n) % n; }

CMatrix com(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

/// tr_a(M) for M acting on C^d (x) C^d: (tr_a M)_{kl} = sum_i M_{(ik),(il)}.
CMatrix partial_trace_first(const CMatrix& m, int d) {
    CMatrix out = CMatrix::Zero(d, d);
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
            for (int i = 0; i < d; ++i) out(k, l) += m(i * d + k, i * d + l);
    return out;
}

bool finite(const CVector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
    return true;
}

}  // namespace

Kind kind_from_string(const std::string& s) {
    if (s == "toda-linear") return Kind::TodaLinear;
    if (s == "toda-quadratic" || s == "toda") return Kind::TodaQuadratic;
    if (s == "dst") return Kind::Dst;
    throw std::invalid_argument("unknown discrete model kind: " + s);
}

PhasePoint vacuum_point(const Model& m) {
    PhasePoint pt;
    pt.u = CVector::Zero(m.sites);
    pt.v = CVector::Zero(m.sites);
    pt.orientation = (m.kind == Kind::Dst) ? "(x,X)"
                   : (m.kind == Kind::TodaQuadratic) ? "(q,p)" : "(p,q)";
    return pt;
}

PhasePoint make_dst_point(const CVector& x, const CVector& X) {
    if (x.size() != X.size()) throw std::invalid_argument("make_dst_point: length mismatch");
    return PhasePoint{x, X, "(x,X)"};
}

PhasePoint make_toda_point(const Model& m, const CVector& q, const CVector& p) {
    if (q.size() != p.size()) throw std::invalid_argument("make_toda_point: length mismatch");
    if (m.kind == Kind::TodaQuadratic) return PhasePoint{q, p, "(q,p)"};
    if (m.kind == Kind::TodaLinear) return PhasePoint{p, q, "(p,q)"};
    throw std::invalid_argument("make_toda_point: not a toda model");
}

PhasePoint random_point(const Model& m, SplitMix64& rng, double amplitude) {
    const int n = m.sites;
    CVector a(n), b(n);
    if (m.kind == Kind::Dst) {
        for (int i = 0; i < n; ++i) {
            a[i] = cplx(rng.uniform(-amplitude, amplitude), rng.uniform(-amplitude, amplitude));
            b[i] = cplx(rng.uniform(-amplitude, amplitude), rng.uniform(-amplitude, amplitude));
        }
        return make_dst_point(a, b);
    }
    for (int i = 0; i < n; ++i) {
        a[i] = rng.uniform(-amplitude, amplitude);        // q
        b[i] = rng.uniform(-amplitude, amplitude) * 1.5;  // p
    }
    return make_toda_point(m, a, b);
}

CVector coord_q(const Model& m, const PhasePoint& pt) {
    if (m.kind == Kind::Dst) throw std::invalid_argument("coord_q: dst has no q");
    return (m.kind == Kind::TodaQuadratic) ? pt.u : pt.v;
}

CVector coord_p(const Model& m, const PhasePoint& pt) {
    if (m.kind == Kind::Dst) throw std::invalid_argument("coord_p: dst has no p");
    return (m.kind == Kind::TodaQuadratic) ? pt.v : pt.u;
}

// ---------------------------------------------------------------------------
// Lax matrices
// ---------------------------------------------------------------------------

LaurentMatrix site_lax_poly(const Model& m, int site, const PhasePoint& pt) {
    if (site < 1 || site > m.sites) throw std::out_of_range("site_lax_poly: site out of range");
    const int j = site - 1;
    LaurentMatrix L(2);
    if (m.kind == Kind::Dst) {
        const cplx x = pt.u[j], X = pt.v[j];
        const cplx Nj = 1.0 - x * X;
        L(0, 0) = LaurentPoly::monomial(1.0, 1) + LaurentPoly::constant(Nj);
        L(0, 1) = LaurentPoly::constant(x);
        L(1, 0) = LaurentPoly::constant(-X);
        L(1, 1) = LaurentPoly::constant(1.0);
        return L;
    }
    if (m.kind == Kind::TodaQuadratic) {
        const cplx q = pt.u[j], p = pt.v[j];
        L(0, 0) = LaurentPoly::monomial(1.0, 1) + LaurentPoly::constant(-p);
        L(0, 1) = LaurentPoly::constant(std::exp(q));
        L(1, 0) = LaurentPoly::constant(-std::exp(-q));
        L(1, 1) = LaurentPoly{};
        return L;
    }
    throw std::invalid_argument("site_lax_poly: toda-linear has no site-local Lax matrix");
}

CMatrix site_lax(const Model& m, int site, const PhasePoint& pt, cplx lambda) {
    return site_lax_poly(m, site, pt).eval(lambda);
}

MatrixObservable site_lax_observable(const Model& m, int site, const PhasePoint& pt,
                                     cplx lambda) {
    const int n = pt.pairs();
    const int j = site - 1;
    MatrixObservable obs;
    obs.value = site_lax(m, site, pt, lambda);
    obs.grad_u.assign(size_t(n), CMatrix::Zero(2, 2));
    obs.grad_v.assign(size_t(n), CMatrix::Zero(2, 2));
    if (m.kind == Kind::Dst) {
        const cplx x = pt.u[j], X = pt.v[j];
        CMatrix dx = CMatrix::Zero(2, 2), dX = CMatrix::Zero(2, 2);
        dx(0, 0) = -X; dx(0, 1) = 1.0;
        dX(0, 0) = -x; dX(1, 0) = -1.0;
        obs.grad_u[size_t(j)] = dx;
        obs.grad_v[size_t(j)] = dX;
    } else if (m.kind == Kind::TodaQuadratic) {
        const cplx q = pt.u[j];
        CMatrix dq = CMatrix::Zero(2, 2), dp = CMatrix::Zero(2, 2);
        dq(0, 1) = std::exp(q); dq(1, 0) = std::exp(-q);
        dp(0, 0) = -1.0;
        obs.grad_u[size_t(j)] = dq;
        obs.grad_v[size_t(j)] = dp;
    } else {
        throw std::invalid_argument("site_lax_observable: not a site-local model");
    }
    return obs;
}

LaurentMatrix linear_lax_poly(const PhasePoint& pt) {
    const int n = pt.pairs();
    if (n < 2) throw std::invalid_argument("linear_lax_poly: need N >= 2");
    const CVector& p = pt.u;
    const CVector& q = pt.v;
    LaurentMatrix L(n);
    for (int j = 0; j < n; ++j)
        L(j, j) = LaurentPoly::constant(p[j]);
    for (int j = 0; j + 1 < n; ++j) {
        const cplx w = std::exp((q[j + 1] - q[j]) / 2.0);
        L(j, j + 1) += LaurentPoly::constant(w);
        L(j + 1, j) += LaurentPoly::constant(w);
    }
    const cplx wn = std::exp((q[0] - q[n - 1]) / 2.0);
    L(0, n - 1) += LaurentPoly::monomial(wn, 1);   // u * w_N
    L(n - 1, 0) += LaurentPoly::monomial(wn, -1);  // u^{-1} * w_N
    return L;
}

CMatrix linear_lax(const PhasePoint& pt, cplx u) {
    return linear_lax_poly(pt).eval(u);
}

MatrixObservable linear_lax_observable(const PhasePoint& pt, cplx u) {
    const int n = pt.pairs();
    const CVector& q = pt.v;
    MatrixObservable obs;
    obs.value = linear_lax(pt, u);
    obs.grad_u.assign(size_t(n), CMatrix::Zero(n, n));  // d/dp
    obs.grad_v.assign(size_t(n), CMatrix::Zero(n, n));  // d/dq
    for (int m = 0; m < n; ++m) obs.grad_u[size_t(m)](m, m) = 1.0;
    // bulk bonds w_j = exp((q_{j+1} - q_j)/2) at (j, j+1) and (j+1, j)
    for (int j = 0; j + 1 < n; ++j) {
        const cplx w = std::exp((q[j + 1] - q[j]) / 2.0);
        obs.grad_v[size_t(j + 1)](j, j + 1) += 0.5 * w;
        obs.grad_v[size_t(j + 1)](j + 1, j) += 0.5 * w;
        obs.grad_v[size_t(j)](j, j + 1) -= 0.5 * w;
        obs.grad_v[size_t(j)](j + 1, j) -= 0.5 * w;
    }
    // corner bond w_N = exp((q_1 - q_N)/2) at (1,N) with u and (N,1) with 1/u
    const cplx wn = std::exp((q[0] - q[n - 1]) / 2.0);
    obs.grad_v[0](0, n - 1) += 0.5 * u * wn;
    obs.grad_v[0](n - 1, 0) += 0.5 * wn / u;
    obs.grad_v[size_t(n - 1)](0, n - 1) -= 0.5 * u * wn;
    obs.grad_v[size_t(n - 1)](n - 1, 0) -= 0.5 * wn / u;
    return obs;
}

// ---------------------------------------------------------------------------
// Monodromy and transfer
// ---------------------------------------------------------------------------

LaurentMatrix monodromy_poly(const Model& m, const PhasePoint& pt) {
    LaurentMatrix T = LaurentMatrix::identity(2);
    for (int site = 1; site <= m.sites; ++site)
        T = site_lax_poly(m, site, pt) * T;  // L_N ... L_1
    return T;
}

CMatrix monodromy(const Model& m, const PhasePoint& pt, cplx lambda) {
    CMatrix T = CMatrix::Identity(2, 2);
    for (int site = 1; site <= m.sites; ++site)
        T = site_lax(m, site, pt, lambda) * T;
    return T;
}

CMatrix partial_monodromy(const Model& m, const PhasePoint& pt, int i, int j, cplx lambda) {
    if (i == j - 1) return CMatrix::Identity(2, 2);
    if (i < j) throw std::invalid_argument("partial_monodromy: need i >= j-1");
    CMatrix T = CMatrix::Identity(2, 2);
    for (int s = j; s <= i; ++s) T = site_lax(m, s, pt, lambda) * T;
    return T;
}

MatrixObservable monodromy_observable(const Model& m, const PhasePoint& pt, cplx lambda) {
    const int N = m.sites;
    std::vector<CMatrix> L;
    L.resize(size_t(N));
    for (int s = 0; s < N; ++s) L[size_t(s)] = site_lax(m, s + 1, pt, lambda);

    // suffix[s] = L_{s-1} ... L_1, prefix[s] = L_N ... L_{s+1} (1-based sites)
    std::vector<CMatrix> suffix, prefix;
    suffix.resize(size_t(N));
    prefix.resize(size_t(N));
    CMatrix acc = CMatrix::Identity(2, 2);
    for (int s = 0; s < N; ++s) { suffix[size_t(s)] = acc; acc = L[size_t(s)] * acc; }
    CMatrix T = acc;
    acc = CMatrix::Identity(2, 2);
    for (int s = N - 1; s >= 0; --s) { prefix[size_t(s)] = acc; acc = acc * L[size_t(s)]; }

    MatrixObservable obs;
    obs.value = T;
    obs.grad_u.assign(size_t(N), CMatrix::Zero(2, 2));
    obs.grad_v.assign(size_t(N), CMatrix::Zero(2, 2));
    for (int s = 0; s < N; ++s) {
        MatrixObservable site = site_lax_observable(m, s + 1, pt, lambda);
        obs.grad_u[size_t(s)] = prefix[size_t(s)] * site.grad_u[size_t(s)] * suffix[size_t(s)];
        obs.grad_v[size_t(s)] = prefix[size_t(s)] * site.grad_v[size_t(s)] * suffix[size_t(s)];
    }
    return obs;
}

TransferFunction transfer(const Model& m, const PhasePoint& pt, int k_max) {
    TransferFunction tf;
    tf.poly = monodromy_poly(m, pt).trace();
    tf.log_coeffs = log_series(tf.poly, k_max);
    return tf;
}

Observable transfer_observable(const Model& m, const PhasePoint& pt, cplx lambda) {
    MatrixObservable T = monodromy_observable(m, pt, lambda);
    Observable o;
    o.value = T.value.trace();
    o.grad_u = CVector::Zero(pt.pairs());
    o.grad_v = CVector::Zero(pt.pairs());
    for (int c = 0; c < pt.pairs(); ++c) {
        o.grad_u[c] = T.grad_u[size_t(c)].trace();
        o.grad_v[c] = T.grad_v[size_t(c)].trace();
    }
    return o;
}

Observable powertrace_observable(const PhasePoint& pt, int n, cplx u) {
    MatrixObservable L = linear_lax_observable(pt, u);
    const int N = pt.pairs();
    CMatrix Ln1 = CMatrix::Identity(N, N);  // L^{n-1}
    for (int k = 1; k < n; ++k) Ln1 *= L.value;
    Observable o;
    o.value = (Ln1 * L.value).trace();
    o.grad_u = CVector::Zero(N);
    o.grad_v = CVector::Zero(N);
    for (int c = 0; c < N; ++c) {
        o.grad_u[c] = double(n) * (Ln1 * L.grad_u[size_t(c)]).trace();
        o.grad_v[c] = double(n) * (Ln1 * L.grad_v[size_t(c)]).trace();
    }
    return o;
}

// ---------------------------------------------------------------------------
// Charges
// ---------------------------------------------------------------------------

namespace {

cplx dst_charge(const PhasePoint& pt, int k) {
    const int N = pt.pairs();
    const CVector& x = pt.u;
    const CVector& X = pt.v;
    auto nn = [&](int i) { return 1.0 - x[wrap(i, N)] * X[wrap(i, N)]; };
    cplx acc = 0.0;
    for (int i = 0; i < N; ++i) {
        if (k == 1) {
            acc += nn(i);
        } else if (k == 2) {
            acc += -x[wrap(i + 1, N)] * X[i] - 0.5 * nn(i) * nn(i);
        } else {
            acc += -x[wrap(i + 2, N)] * X[i]
                 + (nn(i) + nn(i + 1)) * x[wrap(i + 1, N)] * X[i]
                 + nn(i) * nn(i) * nn(i) / 3.0;
        }
    }
    return acc;
}

cplx toda_charge(const CVector& q, const CVector& p, int k) {
    const int N = int(q.size());
    cplx acc = 0.0;
    for (int j = 0; j < N; ++j) {
        if (k == 1) acc += p[j];
        else acc += -0.5 * p[j] * p[j] - std::exp(q[wrap(j + 1, N)] - q[j]);
    }
    return acc;
}

}  // namespace

ChargeReport closed_form_charges(const Model& m, const PhasePoint& pt, int count) {
    const int maxk = (m.kind == Kind::Dst) ? 3 : 2;
    if (count < 1 || count > maxk)
        throw std::out_of_range("closed_form_charges: unsupported count");
    ChargeReport rep;
    rep.source = "closed-form";
    for (int k = 1; k <= count; ++k) {
        if (m.kind == Kind::Dst) rep.charges.push_back(dst_charge(pt, k));
        else rep.charges.push_back(toda_charge(coord_q(m, pt), coord_p(m, pt), k));
        rep.signs.push_back(1.0);
        rep.offsets.push_back(0.0);
    }
    return rep;
}

Observable charge_observable(const Model& m, const PhasePoint& pt, int k) {
    const int N = pt.pairs();
    Observable o;
    o.grad_u = CVector::Zero(N);
    o.grad_v = CVector::Zero(N);
    if (m.kind == Kind::Dst) {
        const CVector& x = pt.u;
        const CVector& X = pt.v;
        auto nn = [&](int i) { return 1.0 - x[wrap(i, N)] * X[wrap(i, N)]; };
        o.value = dst_charge(pt, k);
        for (int j = 0; j < N; ++j) {
            const int jm1 = wrap(j - 1, N), jm2 = wrap(j - 2, N);
            const int jp1 = wrap(j + 1, N), jp2 = wrap(j + 2, N);
            if (k == 1) {
                o.grad_u[j] = -X[j];
                o.grad_v[j] = -x[j];
            } else if (k == 2) {
                o.grad_u[j] = -X[jm1] + nn(j) * X[j];
                o.grad_v[j] = -x[jp1] + nn(j) * x[j];
            } else {
                o.grad_u[j] = -X[jm2] + (nn(jm1) + nn(j)) * X[jm1]
                            - X[j] * x[jp1] * X[j] - X[j] * x[j] * X[jm1]
                            - nn(j) * nn(j) * X[j];
                o.grad_v[j] = -x[jp2] + (nn(j) + nn(jp1)) * x[jp1]
                            - x[j] * x[jp1] * X[j] - x[j] * x[j] * X[jm1]
                            - nn(j) * nn(j) * x[j];
            }
        }
        return o;
    }
    // Toda charges in (q, p); gradients routed into the model's orientation.
    const CVector q = coord_q(m, pt), p = coord_p(m, pt);
    o.value = toda_charge(q, p, k);
    CVector dq = CVector::Zero(N), dp = CVector::Zero(N);
    for (int j = 0; j < N; ++j) {
        if (k == 1) {
            dp[j] = 1.0;
        } else {
            dp[j] = -p[j];
            dq[j] = std::exp(q[wrap(j + 1, N)] - q[j]) - std::exp(q[j] - q[wrap(j - 1, N)]);
        }
    }
    if (m.kind == Kind::TodaQuadratic) { o.grad_u = dq; o.grad_v = dp; }
    else { o.grad_u = dp; o.grad_v = dq; }
    return o;
}

ChargeReport extract_charges(const Model& m, const PhasePoint& pt, int count) {
    if (m.kind == Kind::TodaLinear)
        throw std::invalid_argument("extract_charges: use powertrace_charges for toda-linear");
    const int maxk = (m.kind == Kind::Dst) ? std::min(3, m.sites) : 2;
    if (count < 1 || count > maxk)
        throw std::out_of_range("extract_charges: calibration table missing for this index");

    const LaurentSeries raw = transfer(m, pt, count).log_coeffs;
    const LaurentSeries raw_vac = transfer(m, vacuum_point(m), count).log_coeffs;
    const ChargeReport vac = closed_form_charges(m, vacuum_point(m), count);

    ChargeReport rep;
    rep.source = "series-extracted";
    for (int k = 1; k <= count; ++k) {
        const double s = (m.kind == Kind::TodaQuadratic && k == 1) ? -1.0 : 1.0;
        const cplx offset = vac.charges[size_t(k - 1)] - s * raw_vac.coeff_of_power(-k);
        rep.signs.push_back(s);
        rep.offsets.push_back(offset);
        rep.charges.push_back(s * raw.coeff_of_power(-k) + offset);
    }
    return rep;
}

ChargeReport powertrace_charges(const PhasePoint& pt, int count) {
    if (count < 1 || count > 2)
        throw std::out_of_range("powertrace_charges: only n <= 2 supported");
    const LaurentMatrix L = linear_lax_poly(pt);
    ChargeReport rep;
    rep.source = "closed-form";
    // I_1 is the u-independent part of tr L; I_2 = -1/2 [u^0](tr L^2).
    rep.charges.push_back(L.trace().coeff(0));
    rep.signs.push_back(1.0);
    rep.offsets.push_back(0.0);
    if (count == 2) {
        rep.charges.push_back(-0.5 * (L * L).trace().coeff(0));
        rep.signs.push_back(1.0);
        rep.offsets.push_back(0.0);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Flows and Lax time components
// ---------------------------------------------------------------------------

PhaseVelocity eom_rhs(const Model& m, int generator_index, const PhasePoint& pt) {
    if (m.kind == Kind::TodaLinear)
        throw std::invalid_argument("eom_rhs: integrate the quadratic description instead");
    return flow_rhs(charge_observable(m, pt, generator_index));
}

CMatrix lax_time_component(const Model& m, int generator_index, int site, cplx mu,
                           const PhasePoint& pt) {
    const int N = m.sites;
    const int j = wrap(site - 1, N);
    CMatrix A = CMatrix::Zero(2, 2);
    if (m.kind == Kind::Dst) {
        const CVector& x = pt.u;
        const CVector& X = pt.v;
        auto nn = [&](int i) { return 1.0 - x[wrap(i, N)] * X[wrap(i, N)]; };
        const int jm1 = wrap(j - 1, N), jm2 = wrap(j - 2, N), jp1 = wrap(j + 1, N);
        if (generator_index == 1) {
            A(0, 0) = 1.0;
        } else if (generator_index == 2) {
            A(0, 0) = mu; A(0, 1) = x[j]; A(1, 0) = -X[jm1];
        } else if (generator_index == 3) {
            A(0, 0) = mu * mu + x[j] * X[jm1];
            A(0, 1) = mu * x[j] - x[j] * nn(j) + x[jp1];
            A(1, 0) = -mu * X[jm1] + X[jm1] * nn(jm1) - X[jm2];
            A(1, 1) = -x[j] * X[jm1];
        } else {
            throw std::out_of_range("lax_time_component: dst supports j = 1..3");
        }
        return A;
    }
    if (m.kind == Kind::TodaQuadratic) {
        if (generator_index != 2)
            throw std::out_of_range("lax_time_component: toda supports j = 2 only");
        const CVector q = coord_q(m, pt);
        const int jm1 = wrap(j - 1, N);
        A(0, 0) = mu;
        A(0, 1) = std::exp(q[j]);
        A(1, 0) = -std::exp(-q[jm1]);
        return A;
    }
    throw std::invalid_argument("lax_time_component: unsupported model");
}

std::vector<CMatrix> generic_A_fit(const Model& m, int site, cplx mu,
                                   const PhasePoint& pt, int order,
                                   int nsamples, double radius) {
    if (nsamples < order + 2)
        throw std::invalid_argument("generic_A_fit: need nsamples >= order + 2");
    const int N = m.sites;
    const int n = wrap(site - 1, N) + 1;  // 1-based
    std::vector<CMatrix> coeff(size_t(order + 1), CMatrix::Zero(2, 2));
    // Fourier extraction of descending powers on a circle |lambda| = radius.
    for (int s = 0; s < nsamples; ++s) {
        const double th = 2.0 * M_PI * double(s) / double(nsamples);
        const cplx lam = radius * std::exp(cplx(0.0, th));
        const cplx t = monodromy(m, pt, lam).trace();
        if (std::abs(t) < 1e-12 || std::abs(lam - mu) < 1e-12)
            throw std::domain_error("generic_A_fit: sample hits a zero of t or mu");
        const CMatrix left = partial_monodromy(m, pt, n - 1, 1, lam);
        const CMatrix right = partial_monodromy(m, pt, N, n, lam);
        const CMatrix A = (left * right) / (t * (lam - mu));
        for (int k = 0; k <= order; ++k)
            coeff[size_t(k)] += A * std::pow(lam, k) / double(nsamples);
    }
    return coeff;  // coeff[k] multiplies lambda^{-k}; coeff[0] ~ 0
}

// ---------------------------------------------------------------------------
// Residuals
// ---------------------------------------------------------------------------

double zero_curvature_residual(const Model& m, int generator_index, cplx mu,
                               const PhasePoint& pt) {
    const int N = m.sites;
    const PhaseVelocity vel = eom_rhs(m, generator_index, pt);
    double worst = 0.0;
    for (int site = 1; site <= N; ++site) {
        MatrixObservable L = site_lax_observable(m, site, pt, mu);
        CMatrix Ldot = CMatrix::Zero(2, 2);
        for (int c = 0; c < N; ++c)
            Ldot += L.grad_u[size_t(c)] * vel.du[c] + L.grad_v[size_t(c)] * vel.dv[c];
        const CMatrix An = lax_time_component(m, generator_index, site, mu, pt);
        const CMatrix An1 = lax_time_component(m, generator_index, site + 1, mu, pt);
        worst = std::max(worst, max_abs(CMatrix(Ldot - (An1 * L.value - L.value * An))));
    }
    return worst;
}

double sklyanin_residual(const Model& m, const PhasePoint& pt, cplx lambda, cplx mu) {
    const CMatrix r = yangian_r(2)(lambda - mu);
    double worst = 0.0;
    for (int site = 1; site <= m.sites; ++site) {
        MatrixObservable L1 = site_lax_observable(m, site, pt, lambda);
        MatrixObservable L2 = site_lax_observable(m, site, pt, mu);
        const CMatrix lhs = matrix_bracket(L1, L2);
        const CMatrix rhs = com(r, tensor_product(L1.value, L2.value));
        worst = std::max(worst, max_abs(CMatrix(lhs - rhs)));
    }
    return worst;
}

double sklyanin_monodromy_residual(const Model& m, const PhasePoint& pt,
                                   cplx lambda, cplx mu) {
    const CMatrix r = yangian_r(2)(lambda - mu);
    MatrixObservable T1 = monodromy_observable(m, pt, lambda);
    MatrixObservable T2 = monodromy_observable(m, pt, mu);
    const CMatrix lhs = matrix_bracket(T1, T2);
    const CMatrix rhs = com(r, tensor_product(T1.value, T2.value));
    return max_abs(CMatrix(lhs - rhs));
}

double linear_bracket_residual(const PhasePoint& pt, cplx lambda, cplx mu) {
    const int N = pt.pairs();
    const cplx u1 = std::exp(2.0 * lambda), u2 = std::exp(2.0 * mu);
    MatrixObservable L1 = linear_lax_observable(pt, u1);
    MatrixObservable L2 = linear_lax_observable(pt, u2);
    const CMatrix lhs = matrix_bracket(L1, L2);
    const CMatrix eye = CMatrix::Identity(N, N);
    const CMatrix M = tensor_product(L1.value, eye) + tensor_product(eye, L2.value);
    const CMatrix rhs = com(toda_linear_r(N, u1, u2), M);
    return max_abs(CMatrix(lhs - rhs));
}

double involution_residual(const Observable& f, const Observable& g) {
    return std::abs(bracket(f, g));
}

CMatrix linear_A(const PhasePoint& pt, int n, cplx lambda, cplx mu) {
    if (n < 1 || n > 2) throw std::out_of_range("linear_A: n <= 2");
    const int N = pt.pairs();
    const cplx u1 = std::exp(2.0 * lambda), u2 = std::exp(2.0 * mu);
    const CMatrix r = toda_linear_r(N, u1, u2);
    CMatrix Ln1 = CMatrix::Identity(N, N);
    for (int k = 1; k < n; ++k) Ln1 *= linear_lax(pt, u1);
    const CMatrix prod = tensor_product(Ln1, CMatrix::Identity(N, N)) * r;
    return double(n) * partial_trace_first(prod, N);
}

double linear_A_commutator_residual(const PhasePoint& pt, int n, cplx lambda, cplx mu) {
    const int N = pt.pairs();
    const cplx u1 = std::exp(2.0 * lambda), u2 = std::exp(2.0 * mu);
    const Observable tn = powertrace_observable(pt, n, u1);
    MatrixObservable L = linear_lax_observable(pt, u2);
    CMatrix lhs = CMatrix::Zero(N, N);
    for (int c = 0; c < N; ++c)
        lhs += tn.grad_u[c] * L.grad_v[size_t(c)] - tn.grad_v[c] * L.grad_u[size_t(c)];
    const CMatrix A = linear_A(pt, n, lambda, mu);
    return max_abs(CMatrix(lhs - com(A, L.value)));
}

// ---------------------------------------------------------------------------
// Time integration
// ---------------------------------------------------------------------------

namespace {

std::vector<cplx> drift_reference(const Model& m, const PhasePoint& pt, int count) {
    return closed_form_charges(m, pt, count).charges;
}

void drift_update(const Model& m, const PhasePoint& pt, const std::vector<cplx>& ref,
                  std::vector<double>& drift) {
    const ChargeReport now = closed_form_charges(m, pt, int(ref.size()));
    for (size_t k = 0; k < ref.size(); ++k) {
        const double d = std::abs(now.charges[k] - ref[k]) / (std::abs(ref[k]) + 1.0);
        drift[k] = std::max(drift[k], d);
    }
}

}  // namespace

Trajectory integrate(const Model& m, int generator_index, const PhasePoint& p0,
                     double dt, int steps, Scheme scheme, int charge_count,
                     int sample_every) {
    if (steps <= 0) throw std::invalid_argument("integrate: steps must be positive");
    Trajectory traj;
    traj.drift.rel_drift.assign(size_t(charge_count), 0.0);
    const std::vector<cplx> ref = drift_reference(m, p0, charge_count);

    PhasePoint pt = p0;
    auto record = [&](int step) {
        if (sample_every > 0 && step % sample_every == 0) {
            traj.times.push_back(step * dt);
            traj.samples.push_back(pt);
        }
    };
    record(0);

    if (scheme == Scheme::Leapfrog) {
        if (m.kind != Kind::TodaQuadratic)
            throw std::invalid_argument("integrate: leapfrog is for the toda chain");
        const int N = m.sites;
        Eigen::VectorXd q = coord_q(m, pt).real(), p = coord_p(m, pt).real();
        auto force = [N](const Eigen::VectorXd& qq) {
            Eigen::VectorXd f(N);
            for (int j = 0; j < N; ++j)
                f[j] = std::exp(qq[wrap(j + 1, N)] - qq[j]) - std::exp(qq[j] - qq[wrap(j - 1, N)]);
            return f;
        };
        Eigen::VectorXd f = force(q);
        for (int s = 1; s <= steps; ++s) {
            p += 0.5 * dt * f;
            q += dt * p;
            f = force(q);
            p += 0.5 * dt * f;
            pt = make_toda_point(m, q.cast<cplx>(), p.cast<cplx>());
            if (!finite(pt.u) || !finite(pt.v)) {
                traj.drift.nan_detected = true;
                traj.drift.nan_step = s;
                break;
            }
            drift_update(m, pt, ref, traj.drift.rel_drift);
            record(s);
        }
    } else {
        auto rhs = [&](const PhasePoint& y) { return eom_rhs(m, generator_index, y); };
        for (int s = 1; s <= steps; ++s) {
            const PhaseVelocity k1 = rhs(pt);
            PhasePoint y2{pt.u + 0.5 * dt * k1.du, pt.v + 0.5 * dt * k1.dv, pt.orientation};
            const PhaseVelocity k2 = rhs(y2);
            PhasePoint y3{pt.u + 0.5 * dt * k2.du, pt.v + 0.5 * dt * k2.dv, pt.orientation};
            const PhaseVelocity k3 = rhs(y3);
            PhasePoint y4{pt.u + dt * k3.du, pt.v + dt * k3.dv, pt.orientation};
            const PhaseVelocity k4 = rhs(y4);
            pt.u += (dt / 6.0) * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
            pt.v += (dt / 6.0) * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
            if (!finite(pt.u) || !finite(pt.v)) {
                traj.drift.nan_detected = true;
                traj.drift.nan_step = s;
                break;
            }
            drift_update(m, pt, ref, traj.drift.rel_drift);
            record(s);
        }
    }
    traj.times.push_back(steps * dt);
    traj.samples.push_back(pt);
    return traj;
}

}  // namespace laxkit::discrete
