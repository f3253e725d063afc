#include <doctest.h>

#include "laxkit/discrete.hpp"

#include <cmath>

using namespace laxkit;
using namespace laxkit::discrete;

namespace {

int wrap(int i, int n) { return ((i % n) + n) % n; }

/// Independent evaluator of the dst difference equations (third flow):
/// xdot_j = x_{j+2} - 2 x_{j+1} N_j - x_{j+1} N_{j+1} + x_j N_j^2
///          + x_j^2 X_{j-1} + x_{j+1}
/// Xdot_j = -X_{j-2} + 2 X_{j-1} N_j + X_{j-1} N_{j-1} - X_j N_j^2
///          - X_j^2 x_{j+1} - X_{j-1}
PhaseVelocity dst_difference_equations(const PhasePoint& pt) {
    const int N = pt.pairs();
    const CVector& x = pt.u;
    const CVector& X = pt.v;
    auto nn = [&](int i) { return 1.0 - x[wrap(i, N)] * X[wrap(i, N)]; };
    PhaseVelocity vel;
    vel.du = CVector(N);
    vel.dv = CVector(N);
    for (int j = 0; j < N; ++j) {
        const int jp1 = wrap(j + 1, N), jp2 = wrap(j + 2, N);
        const int jm1 = wrap(j - 1, N), jm2 = wrap(j - 2, N);
        vel.du[j] = x[jp2] - 2.0 * x[jp1] * nn(j) - x[jp1] * nn(j + 1)
                  + x[j] * nn(j) * nn(j) + x[j] * x[j] * X[jm1] + x[jp1];
        vel.dv[j] = -X[jm2] + 2.0 * X[jm1] * nn(j) + X[jm1] * nn(j - 1)
                  - X[j] * nn(j) * nn(j) - X[j] * X[j] * x[jp1] - X[jm1];
    }
    return vel;
}

}  // namespace

TEST_CASE("site Lax matrices match their defining entries") {
    Model dst{Kind::Dst, 2};
    PhasePoint vac = vacuum_point(dst);
    CMatrix l = site_lax(dst, 1, vac, 0.7);
    CHECK(std::abs(l(0, 0) - cplx(1.7)) < 1e-15);
    CHECK(std::abs(l(0, 1)) == 0.0);
    CHECK(std::abs(l(1, 0)) == 0.0);
    CHECK(std::abs(l(1, 1) - cplx(1.0)) == 0.0);

    Model toda{Kind::TodaQuadratic, 2};
    CVector q = CVector::Zero(2), p = CVector::Zero(2);
    p[0] = 1.0;
    PhasePoint tp = make_toda_point(toda, q, p);
    CMatrix lt = site_lax(toda, 1, tp, 0.3);
    CHECK(std::abs(lt(0, 0) - cplx(0.3 - 1.0)) < 1e-15);
    CHECK(std::abs(lt(0, 1) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(lt(1, 0) + cplx(1.0)) < 1e-15);
    CHECK(std::abs(lt(1, 1)) == 0.0);
}

TEST_CASE("linear toda Lax transcription at the origin") {
    Model lin{Kind::TodaLinear, 3};
    PhasePoint pt = vacuum_point(lin);
    CMatrix l = linear_lax(pt, 1.0);  // u = 1
    CMatrix want = CMatrix::Zero(3, 3);
    want(0, 1) = want(1, 0) = want(1, 2) = want(2, 1) = 1.0;  // e^0 couplings
    want(0, 2) = want(2, 0) = 1.0;                            // u^{+-1} corners
    CHECK(max_abs(CMatrix(l - want)) < 1e-15);
}

TEST_CASE("site Lax partials match finite differences") {
    Model dst{Kind::Dst, 3};
    SplitMix64 rng(41);
    PhasePoint pt = random_point(dst, rng);
    const double h = 1e-6;
    const cplx lam(0.9, 0.2);
    for (int site = 1; site <= 3; ++site) {
        MatrixObservable obs = site_lax_observable(dst, site, pt, lam);
        for (int c = 0; c < 3; ++c) {
            PhasePoint plus = pt, minus = pt;
            plus.u[c] += h; minus.u[c] -= h;
            CMatrix fd = (site_lax(dst, site, plus, lam) - site_lax(dst, site, minus, lam)) / (2 * h);
            CHECK(max_abs(CMatrix(obs.grad_u[size_t(c)] - fd)) < 1e-7);
            plus = pt; minus = pt;
            plus.v[c] += h; minus.v[c] -= h;
            CMatrix fdv = (site_lax(dst, site, plus, lam) - site_lax(dst, site, minus, lam)) / (2 * h);
            CHECK(max_abs(CMatrix(obs.grad_v[size_t(c)] - fdv)) < 1e-7);
        }
    }
    Model lin{Kind::TodaLinear, 3};
    PhasePoint lp = random_point(lin, rng);
    MatrixObservable lobs = linear_lax_observable(lp, cplx(1.4, 0.3));
    for (int c = 0; c < 3; ++c) {
        PhasePoint plus = lp, minus = lp;
        plus.v[c] += h; minus.v[c] -= h;
        CMatrix fd = (linear_lax(plus, cplx(1.4, 0.3)) - linear_lax(minus, cplx(1.4, 0.3))) / (2 * h);
        CHECK(max_abs(CMatrix(lobs.grad_v[size_t(c)] - fd)) < 1e-7);
    }
}

TEST_CASE("monodromy products") {
    Model dst{Kind::Dst, 2};
    PhasePoint vac = vacuum_point(dst);
    LaurentMatrix T = monodromy_poly(dst, vac);
    // [[ (l+1)^2, 0 ], [0, 1]]
    CHECK(std::abs(T(0, 0).coeff(2) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(T(0, 0).coeff(1) - cplx(2.0)) < 1e-15);
    CHECK(std::abs(T(0, 0).coeff(0) - cplx(1.0)) < 1e-15);
    CHECK(T(0, 1).is_zero());
    CHECK(T(1, 0).is_zero());

    CVector x(2), X(2);
    x << 1.0, 0.0;
    X << 0.5, 0.0;
    PhasePoint probe = make_dst_point(x, X);
    LaurentMatrix Tp = monodromy_poly(dst, probe);
    // [[ (l+1)(l+0.5), l+1 ], [ -0.5, 1 ]]
    CHECK(std::abs(Tp(0, 0).coeff(2) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(Tp(0, 0).coeff(1) - cplx(1.5)) < 1e-15);
    CHECK(std::abs(Tp(0, 0).coeff(0) - cplx(0.5)) < 1e-15);
    CHECK(std::abs(Tp(0, 1).coeff(1) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(Tp(0, 1).coeff(0) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(Tp(1, 0).coeff(0) + cplx(0.5)) < 1e-15);
    CHECK(std::abs(Tp(1, 1).coeff(0) - cplx(1.0)) < 1e-15);

    Model toda{Kind::TodaQuadratic, 2};
    LaurentMatrix Tt = monodromy_poly(toda, vacuum_point(toda));
    // [[ l^2 - 1, l ], [ -l, -1 ]]
    CHECK(std::abs(Tt(0, 0).coeff(2) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(Tt(0, 0).coeff(0) + cplx(1.0)) < 1e-15);
    CHECK(std::abs(Tt(0, 1).coeff(1) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(Tt(1, 0).coeff(1) + cplx(1.0)) < 1e-15);
    CHECK(std::abs(Tt(1, 1).coeff(0) + cplx(1.0)) < 1e-15);
}

TEST_CASE("transfer polynomial and log coefficients") {
    Model dst{Kind::Dst, 2};
    CVector x(2), X(2);
    x << 1.0, 0.0;
    X << 0.5, 0.0;
    TransferFunction tf = transfer(dst, make_dst_point(x, X), 2);
    CHECK(std::abs(tf.poly.coeff(2) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(tf.poly.coeff(1) - cplx(1.5)) < 1e-15);
    CHECK(std::abs(tf.poly.coeff(0) - cplx(1.5)) < 1e-15);
    CHECK(std::abs(tf.log_coeffs.coeff_of_power(-1) - cplx(1.5)) < 1e-14);
    CHECK(std::abs(tf.log_coeffs.coeff_of_power(-2) - cplx(0.375)) < 1e-14);

    Model toda{Kind::TodaQuadratic, 2};
    CVector q = CVector::Zero(2), p(2);
    p << 1.0, -1.0;
    TransferFunction tt = transfer(toda, make_toda_point(toda, q, p), 2);
    CHECK(std::abs(tt.poly.coeff(2) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(tt.poly.coeff(1)) < 1e-15);
    CHECK(std::abs(tt.poly.coeff(0) + cplx(3.0)) < 1e-15);
    CHECK(std::abs(tt.log_coeffs.coeff_of_power(-1)) < 1e-14);
    CHECK(std::abs(tt.log_coeffs.coeff_of_power(-2) + cplx(3.0)) < 1e-14);

    for (int N : {2, 3, 5}) {
        Model m{Kind::Dst, N};
        TransferFunction tv = transfer(m, vacuum_point(m), 1);
        CHECK(std::abs(tv.log_coeffs.coeff_of_power(-1) - cplx(double(N))) < 1e-13);
    }
}

TEST_CASE("closed-form charges") {
    for (int N : {2, 4}) {
        Model dst{Kind::Dst, N};
        ChargeReport rep = closed_form_charges(dst, vacuum_point(dst), 3);
        CHECK(std::abs(rep.charges[0] - cplx(double(N))) < 1e-15);
        CHECK(std::abs(rep.charges[1] + cplx(N / 2.0)) < 1e-15);
        CHECK(std::abs(rep.charges[2] - cplx(N / 3.0)) < 1e-15);
    }
    Model toda{Kind::TodaQuadratic, 2};
    CVector q = CVector::Zero(2), p(2);
    p << 2.0, 0.0;
    ChargeReport rep = closed_form_charges(toda, make_toda_point(toda, q, p), 2);
    CHECK(std::abs(rep.charges[0] - cplx(2.0)) < 1e-15);
    CHECK(std::abs(rep.charges[1] + cplx(4.0)) < 1e-15);

    Model dst2{Kind::Dst, 2};
    CVector x(2), X(2);
    x << 1.0, 0.0;
    X << 0.5, 0.0;
    ChargeReport rd = closed_form_charges(dst2, make_dst_point(x, X), 2);
    CHECK(std::abs(rd.charges[0] - cplx(1.5)) < 1e-15);
    CHECK(std::abs(rd.charges[1] + cplx(0.625)) < 1e-15);
}

TEST_CASE("charge gradients match finite differences") {
    SplitMix64 rng(5);
    const double h = 1e-6;
    for (Kind kind : {Kind::Dst, Kind::TodaQuadratic}) {
        Model m{kind, 4};
        PhasePoint pt = random_point(m, rng);
        const int kmax = (kind == Kind::Dst) ? 3 : 2;
        for (int k = 1; k <= kmax; ++k) {
            Observable o = charge_observable(m, pt, k);
            for (int c = 0; c < 4; ++c) {
                PhasePoint plus = pt, minus = pt;
                plus.u[c] += h; minus.u[c] -= h;
                cplx fd = (charge_observable(m, plus, k).value - charge_observable(m, minus, k).value) / (2 * h);
                CHECK(std::abs(o.grad_u[c] - fd) <= 1e-5 * (std::abs(fd) + 1.0));
                plus = pt; minus = pt;
                plus.v[c] += h; minus.v[c] -= h;
                cplx fdv = (charge_observable(m, plus, k).value - charge_observable(m, minus, k).value) / (2 * h);
                CHECK(std::abs(o.grad_v[c] - fdv) <= 1e-5 * (std::abs(fdv) + 1.0));
            }
        }
    }
}

TEST_CASE("series-extracted charges equal closed forms after calibration") {
    Model toda{Kind::TodaQuadratic, 2};
    CVector q = CVector::Zero(2), p(2);
    p << 2.0, 0.0;
    PhasePoint tp = make_toda_point(toda, q, p);
    // raw coefficients of ln t: (-2, -4) for t = l^2 - 2l - 2
    TransferFunction tf = transfer(toda, tp, 2);
    CHECK(std::abs(tf.log_coeffs.coeff_of_power(-1) + cplx(2.0)) < 1e-14);
    CHECK(std::abs(tf.log_coeffs.coeff_of_power(-2) + cplx(4.0)) < 1e-13);
    ChargeReport ex = extract_charges(toda, tp, 2);
    CHECK(ex.signs[0] == -1.0);
    CHECK(ex.signs[1] == 1.0);
    CHECK(std::abs(ex.offsets[0]) < 1e-13);
    CHECK(std::abs(ex.offsets[1]) < 1e-13);
    CHECK(std::abs(ex.charges[0] - cplx(2.0)) < 1e-13);
    CHECK(std::abs(ex.charges[1] + cplx(4.0)) < 1e-13);

    Model dst{Kind::Dst, 2};
    CVector x(2), X(2);
    x << 1.0, 0.0;
    X << 0.5, 0.0;
    ChargeReport ed = extract_charges(dst, make_dst_point(x, X), 2);
    CHECK(ed.signs[0] == 1.0);
    CHECK(ed.signs[1] == 1.0);
    CHECK(std::abs(ed.offsets[0]) < 1e-13);
    CHECK(std::abs(ed.offsets[1] + cplx(1.0)) < 1e-13);
    CHECK(std::abs(ed.charges[0] - cplx(1.5)) < 1e-13);
    CHECK(std::abs(ed.charges[1] + cplx(0.625)) < 1e-13);

    // Calibration constants are phase-space independent.
    SplitMix64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        Model m{Kind::Dst, 4};
        PhasePoint pt = random_point(m, rng);
        ChargeReport a = extract_charges(m, pt, 3);
        ChargeReport b = closed_form_charges(m, pt, 3);
        for (int k = 0; k < 3; ++k) {
            const double denom = std::abs(b.charges[size_t(k)]) + 1.0;
            CHECK(std::abs(a.charges[size_t(k)] - b.charges[size_t(k)]) <= 1e-10 * denom);
        }
    }
    // At the vacuum the calibrated values are exact.
    Model m4{Kind::Dst, 4};
    ChargeReport av = extract_charges(m4, vacuum_point(m4), 3);
    ChargeReport bv = closed_form_charges(m4, vacuum_point(m4), 3);
    for (int k = 0; k < 3; ++k)
        CHECK(std::abs(av.charges[size_t(k)] - bv.charges[size_t(k)]) < 1e-12);

    CHECK_THROWS_AS(extract_charges(Model{Kind::Dst, 2}, vacuum_point(Model{Kind::Dst, 2}), 3),
                    std::out_of_range);
}

TEST_CASE("power-trace charges of the linear description") {
    Model lin{Kind::TodaLinear, 3};
    CVector q = CVector::Zero(3), p = CVector::Zero(3);
    p[0] = 2.0;
    ChargeReport rep = powertrace_charges(make_toda_point(lin, q, p), 2);
    CHECK(std::abs(rep.charges[0] - cplx(2.0)) < 1e-15);
    ChargeReport repv = powertrace_charges(vacuum_point(lin), 2);
    CHECK(std::abs(repv.charges[1] + cplx(3.0)) < 1e-14);

    // Random point: matches the quadratic description exactly.
    SplitMix64 rng(9);
    Model quad{Kind::TodaQuadratic, 3};
    PhasePoint qp = random_point(quad, rng);
    PhasePoint lp = make_toda_point(lin, coord_q(quad, qp), coord_p(quad, qp));
    ChargeReport a = powertrace_charges(lp, 2);
    ChargeReport b = closed_form_charges(quad, qp, 2);
    CHECK(std::abs(a.charges[0] - b.charges[0]) <= 1e-12);
    CHECK(std::abs(a.charges[1] - b.charges[1]) <= 1e-12);
    CHECK_THROWS_AS(powertrace_charges(lp, 3), std::out_of_range);
}

TEST_CASE("equations of motion") {
    Model dst{Kind::Dst, 3};
    PhaseVelocity vz = eom_rhs(dst, 3, vacuum_point(dst));
    CHECK(max_abs(CMatrix(vz.du)) == 0.0);
    CHECK(max_abs(CMatrix(vz.dv)) == 0.0);

    SplitMix64 rng(13);
    for (int N : {3, 5}) {
        Model m{Kind::Dst, N};
        PhasePoint pt = random_point(m, rng);
        PhaseVelocity flow = eom_rhs(m, 3, pt);
        PhaseVelocity reference = dst_difference_equations(pt);
        for (int j = 0; j < N; ++j) {
            CHECK(std::abs(flow.du[j] - reference.du[j]) <= 1e-12);
            CHECK(std::abs(flow.dv[j] - reference.dv[j]) <= 1e-12);
        }
    }

    // Toda: qdot_j = p_j and qddot_j = e^{q_{j+1}-q_j} - e^{q_j-q_{j-1}}.
    Model toda{Kind::TodaQuadratic, 3};
    PhasePoint tp = random_point(toda, rng);
    PhaseVelocity tv = eom_rhs(toda, 2, tp);
    const CVector q = coord_q(toda, tp), p = coord_p(toda, tp);
    for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(tv.du[j] - p[j]) <= 1e-14);
        const cplx qdd = std::exp(q[wrap(j + 1, 3)] - q[j]) - std::exp(q[j] - q[wrap(j - 1, 3)]);
        CHECK(std::abs(tv.dv[j] - qdd) <= 1e-13);
    }
}

TEST_CASE("closed-form Lax time components") {
    Model dst{Kind::Dst, 3};
    PhasePoint vac = vacuum_point(dst);
    CMatrix a1 = lax_time_component(dst, 1, 2, 0.4, vac);
    CHECK(std::abs(a1(0, 0) - cplx(1.0)) == 0.0);
    CHECK(max_abs(a1) == 1.0);
    CMatrix a2 = lax_time_component(dst, 2, 1, 0.4, vac);
    CHECK(std::abs(a2(0, 0) - cplx(0.4)) < 1e-15);
    CHECK(std::abs(a2(0, 1)) == 0.0);
    CHECK(std::abs(a2(1, 0)) == 0.0);

    Model toda{Kind::TodaQuadratic, 2};
    CMatrix at = lax_time_component(toda, 2, 1, 0.9, vacuum_point(toda));
    CHECK(std::abs(at(0, 0) - cplx(0.9)) < 1e-15);
    CHECK(std::abs(at(0, 1) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(at(1, 0) + cplx(1.0)) < 1e-15);
}

TEST_CASE("discrete zero curvature") {
    SplitMix64 rng(23);
    Model dst{Kind::Dst, 4};
    PhasePoint pt = random_point(dst, rng);
    CHECK(zero_curvature_residual(dst, 1, 0.7, pt) <= 1e-12);
    CHECK(zero_curvature_residual(dst, 2, 0.7, pt) <= 1e-11);
    CHECK(zero_curvature_residual(dst, 3, 0.7, pt) <= 1e-11);

    Model toda{Kind::TodaQuadratic, 4};
    PhasePoint tp = random_point(toda, rng);
    CHECK(zero_curvature_residual(toda, 2, 0.7, tp) <= 1e-11);

    // Negative control: the first Lax time component paired with the third
    // flow violates the identity by many orders of magnitude.
    const PhaseVelocity vel = eom_rhs(dst, 3, pt);
    double worst = 0.0;
    for (int site = 1; site <= 4; ++site) {
        MatrixObservable L = site_lax_observable(dst, site, pt, 0.7);
        CMatrix ldot = CMatrix::Zero(2, 2);
        for (int c = 0; c < 4; ++c)
            ldot += L.grad_u[size_t(c)] * vel.du[c] + L.grad_v[size_t(c)] * vel.dv[c];
        CMatrix an = lax_time_component(dst, 1, site, 0.7, pt);
        CMatrix an1 = lax_time_component(dst, 1, site + 1, 0.7, pt);
        worst = std::max(worst, max_abs(CMatrix(ldot - (an1 * L.value - L.value * an))));
    }
    CHECK(worst > 1e-3);
}

TEST_CASE("Sklyanin bracket residuals") {
    SplitMix64 rng(29);
    for (Kind kind : {Kind::Dst, Kind::TodaQuadratic}) {
        for (int N : {2, 3, 4}) {
            Model m{kind, N};
            PhasePoint pt = random_point(m, rng);
            CHECK(sklyanin_residual(m, pt, cplx(1.3), cplx(0.4)) <= 1e-11);
            CHECK(sklyanin_monodromy_residual(m, pt, cplx(1.3), cplx(0.4)) <= 1e-10);
        }
    }
}

TEST_CASE("linear bracket residual for the toda chain") {
    SplitMix64 rng(31);
    for (int N : {2, 3, 4}) {
        Model lin{Kind::TodaLinear, N};
        for (int t = 0; t < 5; ++t) {
            PhasePoint pt = random_point(lin, rng);
            CHECK(linear_bracket_residual(pt, cplx(0.45, 0.1), cplx(-0.3, 0.05)) <= 1e-10);
        }
    }
    // Negative control: the rational r of the quadratic description does
    // not close the linear bracket.
    Model lin{Kind::TodaLinear, 2};
    PhasePoint pt = random_point(lin, rng);
    const cplx u1 = std::exp(cplx(0.9)), u2 = std::exp(cplx(-0.6));
    MatrixObservable L1 = linear_lax_observable(pt, u1);
    MatrixObservable L2 = linear_lax_observable(pt, u2);
    CMatrix eye = CMatrix::Identity(2, 2);
    CMatrix M = tensor_product(L1.value, eye) + tensor_product(eye, L2.value);
    CMatrix r = yangian_r(2)(cplx(0.45) - cplx(-0.3));
    CMatrix rhs = r * M - M * r;
    CHECK(max_abs(CMatrix(matrix_bracket(L1, L2) - rhs)) > 1e-3);
}

TEST_CASE("charge involution") {
    SplitMix64 rng(37);
    Model dst{Kind::Dst, 4};
    PhasePoint pt = random_point(dst, rng);
    CHECK(involution_residual(charge_observable(dst, pt, 2), charge_observable(dst, pt, 3)) <= 1e-11);
    CHECK(involution_residual(charge_observable(dst, pt, 1), charge_observable(dst, pt, 3)) <= 1e-11);

    Model toda{Kind::TodaQuadratic, 4};
    PhasePoint tp = random_point(toda, rng);
    CHECK(involution_residual(transfer_observable(toda, tp, cplx(1.1, 0.3)),
                              transfer_observable(toda, tp, cplx(-0.7, 0.2))) <= 1e-10);

    Model lin{Kind::TodaLinear, 3};
    PhasePoint lp = random_point(lin, rng);
    CHECK(involution_residual(powertrace_observable(lp, 2, std::exp(cplx(0.8))),
                              powertrace_observable(lp, 2, std::exp(cplx(-0.5)))) <= 1e-10);
}

TEST_CASE("linear Lax time component and its commutator identity") {
    SplitMix64 rng(43);
    Model lin{Kind::TodaLinear, 3};
    PhasePoint pt1 = random_point(lin, rng);
    PhasePoint pt2 = random_point(lin, rng);
    // n = 1: A = tr_a(r) is independent of the phase point.
    CMatrix a1 = linear_A(pt1, 1, cplx(0.8), cplx(0.2));
    CMatrix a2 = linear_A(pt2, 1, cplx(0.8), cplx(0.2));
    CHECK(max_abs(CMatrix(a1 - a2)) < 1e-14);
    CHECK(linear_A_commutator_residual(pt1, 1, cplx(0.8), cplx(0.2)) <= 1e-11);
    CHECK(linear_A_commutator_residual(pt1, 2, cplx(0.8), cplx(0.2)) <= 1e-10);
}

TEST_CASE("generic Lax-pair fit reproduces the closed forms") {
    Model dst{Kind::Dst, 3};
    PhasePoint vac = vacuum_point(dst);
    const cplx mu(0.3, 0.0);
    auto coeff = generic_A_fit(dst, 2, mu, vac, 2);
    CHECK(max_abs(CMatrix(coeff[1] - lax_time_component(dst, 1, 2, mu, vac))) <= 1e-9);

    SplitMix64 rng(47);
    PhasePoint pt = random_point(dst, rng);
    auto c2 = generic_A_fit(dst, 2, mu, pt, 3);
    CHECK(max_abs(CMatrix(c2[1] - lax_time_component(dst, 1, 2, mu, pt))) <= 1e-8);
    CHECK(max_abs(CMatrix(c2[2] - lax_time_component(dst, 2, 2, mu, pt))) <= 1e-8);

    // Partial monodromies compose exactly: T(N,1) = T(N,n) T(n-1,1).
    const cplx lam(1.7, 0.4);
    for (int n = 1; n <= 3; ++n) {
        CMatrix lhs = partial_monodromy(dst, pt, 3, 1, lam);
        CMatrix rhs = partial_monodromy(dst, pt, 3, n, lam) * partial_monodromy(dst, pt, n - 1, 1, lam);
        CHECK(max_abs(CMatrix(lhs - rhs)) < 1e-13);
    }
}

TEST_CASE("time integration and drift") {
    // dst vacuum is a fixed point.
    Model dst{Kind::Dst, 3};
    Trajectory t = integrate(dst, 3, vacuum_point(dst), 1e-2, 100, Scheme::Rk4, 3);
    CHECK(max_abs(CMatrix(t.samples.back().u)) < 1e-14);
    for (double d : t.drift.rel_drift) CHECK(d < 1e-14);

    // Short toda leapfrog run conserves I1 to machine precision.
    Model toda{Kind::TodaQuadratic, 4};
    SplitMix64 rng(53);
    PhasePoint p0 = random_point(toda, rng, 0.1);
    Trajectory tt = integrate(toda, 2, p0, 1e-3, 2000, Scheme::Leapfrog, 2);
    CHECK(tt.drift.rel_drift[0] <= 1e-13);
    CHECK(tt.drift.rel_drift[1] <= 1e-6);

    // rk4 on the dst third flow: halving dt reduces the I2 drift ~ 2^4.
    Model m{Kind::Dst, 3};
    PhasePoint q0 = random_point(m, rng, 0.25);
    Trajectory a = integrate(m, 3, q0, 2e-2, 200, Scheme::Rk4, 3);
    Trajectory b = integrate(m, 3, q0, 1e-2, 400, Scheme::Rk4, 3);
    const double ratio = a.drift.rel_drift[2] / (b.drift.rel_drift[2] + 1e-300);
    CHECK(ratio > 8.0);
    CHECK(ratio < 32.0);
}
