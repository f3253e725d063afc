#include <doctest.h>

#include "laxkit/poisson.hpp"
#include "laxkit/prng.hpp"

#include <cmath>

using namespace laxkit;

namespace {

PhasePoint random_phase_point(int n, SplitMix64& rng) {
    PhasePoint pt;
    pt.u = CVector(n);
    pt.v = CVector(n);
    pt.orientation = "(u,v)";
    for (int i = 0; i < n; ++i) {
        pt.u[i] = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        pt.v[i] = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    }
    return pt;
}

/// Random polynomial-and-exponential observable built from the Jet2 algebra.
Jet2 random_jet(int n, const PhasePoint& pt, SplitMix64& rng, bool quadratic_only = false) {
    Jet2 acc(n, cplx(rng.uniform(-1, 1), 0.0));
    const int terms = 2 + int(rng.next_u64() % 3);
    for (int t = 0; t < terms; ++t) {
        Jet2 a = Jet2::coordinate_u(n, int(rng.next_u64() % std::uint64_t(n)), pt);
        Jet2 b = Jet2::coordinate_v(n, int(rng.next_u64() % std::uint64_t(n)), pt);
        Jet2 term = (rng.next_u64() % 2) ? a * b : a * a;
        if (!quadratic_only && rng.next_u64() % 3 == 0)
            term = term + Jet2::coordinate_u(n, 0, pt).scaled(0.3).exp();
        acc = acc + term.scaled(cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)));
    }
    return acc;
}

}  // namespace

TEST_CASE("canonical pairs bracket to delta") {
    SplitMix64 rng(1);
    PhasePoint pt = random_phase_point(3, rng);
    Observable u1 = Jet2::coordinate_u(3, 0, pt).observable();
    Observable v1 = Jet2::coordinate_v(3, 0, pt).observable();
    Observable v2 = Jet2::coordinate_v(3, 1, pt).observable();
    CHECK(bracket(u1, v1) == cplx(1.0));
    CHECK(bracket(u1, v2) == cplx(0.0));
    CHECK(bracket(v1, u1) == cplx(-1.0));
}

TEST_CASE("antisymmetry and the Leibniz property") {
    SplitMix64 rng(2);
    PhasePoint pt = random_phase_point(2, rng);
    for (int t = 0; t < 20; ++t) {
        Jet2 f = random_jet(2, pt, rng), g = random_jet(2, pt, rng), h = random_jet(2, pt, rng);
        const cplx fg = bracket(f.observable(), g.observable());
        const cplx gf = bracket(g.observable(), f.observable());
        CHECK(std::abs(fg + gf) == 0.0);
        CHECK(std::abs(bracket(f.observable(), f.observable())) == 0.0);

        // {f, gh} = g {f, h} + {f, g} h
        const cplx lhs = bracket(f.observable(), (g * h).observable());
        const cplx rhs = g.value() * bracket(f.observable(), h.observable())
                       + fg * h.value();
        const double scale = std::abs(lhs) + 1.0;
        CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
    }

    // {u1 v1, v1} = d(u1 v1)/du1 = v1.
    Jet2 u1 = Jet2::coordinate_u(2, 0, pt);
    Jet2 v1 = Jet2::coordinate_v(2, 0, pt);
    CHECK(std::abs(bracket((u1 * v1).observable(), v1.observable()) - pt.v[0]) < 1e-15);
}

TEST_CASE("Jacobi identity") {
    SplitMix64 rng(3);
    PhasePoint pt = random_phase_point(2, rng);
    for (int t = 0; t < 10; ++t) {
        Jet2 f = random_jet(2, pt, rng, true);
        Jet2 g = random_jet(2, pt, rng, true);
        Jet2 h = random_jet(2, pt, rng, true);
        CHECK(jacobi_residual(f, g, h) <= 1e-12);
    }
    Jet2 u1 = Jet2::coordinate_u(2, 0, pt);
    Jet2 v1 = Jet2::coordinate_v(2, 0, pt);
    CHECK(jacobi_residual(u1, v1, u1 * v1) == 0.0);
    CHECK(jacobi_residual(u1 * u1, v1 * v1, u1 * v1) <= 1e-12);
    // With exponentials in the algebra too.
    for (int t = 0; t < 10; ++t) {
        Jet2 f = random_jet(2, pt, rng), g = random_jet(2, pt, rng), h = random_jet(2, pt, rng);
        CHECK(jacobi_residual(f, g, h) <= 1e-11);
    }
}

TEST_CASE("matrix bracket layout") {
    SplitMix64 rng(4);
    PhasePoint pt = random_phase_point(1, rng);
    // M1 = M2 = diag(u1, v1): bracket(u1, v1) = 1 lands at ((1,1),(2,2)),
    // i.e. row 2 col 2 (1-based) of the 4x4; the transpose slot carries -1.
    MatrixObservable m;
    m.value = CMatrix::Zero(2, 2);
    m.value(0, 0) = pt.u[0];
    m.value(1, 1) = pt.v[0];
    m.grad_u.assign(1, CMatrix::Zero(2, 2));
    m.grad_v.assign(1, CMatrix::Zero(2, 2));
    m.grad_u[0](0, 0) = 1.0;
    m.grad_v[0](1, 1) = 1.0;
    CMatrix b = matrix_bracket(m, m);
    CMatrix want = CMatrix::Zero(4, 4);
    want(1, 1) = 1.0;
    want(2, 2) = -1.0;
    CHECK(max_abs(CMatrix(b - want)) == 0.0);

    MatrixObservable constant;
    constant.value = CMatrix::Identity(2, 2);
    constant.grad_u.assign(1, CMatrix::Zero(2, 2));
    constant.grad_v.assign(1, CMatrix::Zero(2, 2));
    CHECK(max_abs(matrix_bracket(constant, constant)) == 0.0);
}

TEST_CASE("Hamiltonian flow signs") {
    SplitMix64 rng(5);
    PhasePoint pt = random_phase_point(2, rng);
    // H = sum u_i^2 / 2: dv_i/dt = u_i, du_i/dt = 0.
    Jet2 H(2, 0.0);
    for (int i = 0; i < 2; ++i) {
        Jet2 ui = Jet2::coordinate_u(2, i, pt);
        H = H + (ui * ui).scaled(0.5);
    }
    PhaseVelocity vel = flow_rhs(H.observable());
    CHECK(max_abs(CMatrix(vel.du)) == 0.0);
    CHECK(std::abs(vel.dv[0] - pt.u[0]) < 1e-15);

    // H = u1 v1: du1/dt = -u1, dv1/dt = v1.
    Jet2 H2 = Jet2::coordinate_u(2, 0, pt) * Jet2::coordinate_v(2, 0, pt);
    PhaseVelocity vel2 = flow_rhs(H2.observable());
    CHECK(std::abs(vel2.du[0] + pt.u[0]) < 1e-15);
    CHECK(std::abs(vel2.dv[0] - pt.v[0]) < 1e-15);
}

TEST_CASE("analytic gradients match central finite differences") {
    SplitMix64 rng(6);
    const int n = 2;
    PhasePoint pt = random_phase_point(n, rng);
    const double h = 1e-6;
    for (int t = 0; t < 5; ++t) {
        // Rebuild the same observable at shifted points via a fixed recipe.
        auto build = [&](const PhasePoint& at) {
            Jet2 u0 = Jet2::coordinate_u(n, 0, at);
            Jet2 v1 = Jet2::coordinate_v(n, 1, at);
            return (u0 * u0 * v1 + u0.scaled(0.4).exp()).scaled(cplx(0.7, 0.1));
        };
        Observable o = build(pt).observable();
        for (int c = 0; c < n; ++c) {
            PhasePoint plus = pt, minus = pt;
            plus.u[c] += h; minus.u[c] -= h;
            const cplx fd = (build(plus).value() - build(minus).value()) / (2.0 * h);
            CHECK(std::abs(o.grad_u[c] - fd) <= 1e-5 * (std::abs(fd) + 1.0));
            plus = pt; minus = pt;
            plus.v[c] += h; minus.v[c] -= h;
            const cplx fdv = (build(plus).value() - build(minus).value()) / (2.0 * h);
            CHECK(std::abs(o.grad_v[c] - fdv) <= 1e-5 * (std::abs(fdv) + 1.0));
        }
    }
}
