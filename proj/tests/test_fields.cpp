#include <doctest.h>

#include "laxkit/fields.hpp"

#include <cmath>

using namespace laxkit;
using namespace laxkit::fields;

namespace {

const ModelParams kP{1.3, 0.8};  // mass, beta

}  // namespace

TEST_CASE("U matrices at reference points") {
    // nls vacuum: diag(l/2, -l/2).
    FieldState nv = vacuum_state(FieldKind::Nls, 16, 4.0);
    auto U = build_U(FieldKind::Nls, nv, kP, cplx(0.8, 0.1));
    CHECK(std::abs(U[0](0, 0) - cplx(0.4, 0.05)) < 1e-15);
    CHECK(std::abs(U[0](0, 1)) == 0.0);

    // sg vacuum at u = 1 (lambda = 0): the two ladder terms cancel.
    FieldState sv = vacuum_state(FieldKind::SineGordon, 16, 4.0);
    auto Us = build_U(FieldKind::SineGordon, sv, kP, 0.0);
    CHECK(max_abs(Us[0]) < 1e-15);

    // atft-A2 vacuum: (m/4)(u E+ + u^-1 E-).
    FieldState av = vacuum_state(FieldKind::AtftA2, 16, 4.0);
    const cplx lam(0.6, 0.0);
    const cplx u = std::exp(2.0 * lam / 3.0);
    auto Ua = build_U(FieldKind::AtftA2, av, kP, lam);
    CartanData cd = cartan_data(2);
    CMatrix want = kP.mass / 4.0 * (u * cd.big_E_plus() + (1.0 / u) * cd.big_E_minus());
    CHECK(max_abs(CMatrix(Ua[3] - want)) < 1e-14);

    // ll pole guard.
    FieldState lv = vacuum_state(FieldKind::LandauLifshitz, 16, 4.0);
    CHECK_THROWS_AS(build_U(FieldKind::LandauLifshitz, lv, kP, 0.0), std::domain_error);
}

TEST_CASE("V matrices at reference points") {
    FieldState nv = vacuum_state(FieldKind::Nls, 16, 4.0);
    auto V1 = build_V(FieldKind::Nls, Variant::V1, nv, kP, 0.7);
    CHECK(std::abs(V1[0](0, 0) - cplx(1.0)) == 0.0);
    CHECK(max_abs(V1[0]) == 1.0);
    auto V3 = build_V(FieldKind::Nls, Variant::V3, nv, kP, cplx(0.7));
    CHECK(std::abs(V3[0](0, 0) - cplx(0.49)) < 1e-15);
    CHECK(std::abs(V3[0](1, 1)) == 0.0);

    // sg momentum variant coincides with U.
    SplitMix64 rng(3);
    FieldState s = random_state(FieldKind::SineGordon, 64, 6.0, 5, 0.4, rng);
    auto Vm = build_V(FieldKind::SineGordon, Variant::Momentum, s, kP, cplx(0.3));
    auto Uu = build_U(FieldKind::SineGordon, s, kP, cplx(0.3));
    double worst = 0.0;
    for (int j = 0; j < 64; ++j) worst = std::max(worst, max_abs(CMatrix(Vm[size_t(j)] - Uu[size_t(j)])));
    CHECK(worst == 0.0);
}

TEST_CASE("charge values at reference states") {
    const double L = 4.0;
    FieldState s = vacuum_state(FieldKind::Nls, 32, L);
    const cplx c(0.3, 0.4);
    for (int j = 0; j < 32; ++j) {
        s.comps[0][j] = c;
        s.comps[1][j] = std::conj(c);
    }
    FieldChargeReport rep = charges(FieldKind::Nls, s, kP);
    CHECK(std::abs(rep.values[0] - cplx(2.0 * L * std::norm(c))) < 1e-12);
    CHECK(std::abs(rep.values[1]) < 1e-12);
    CHECK(std::abs(rep.values[2] + cplx(2.0 * L * std::norm(c) * std::norm(c))) < 1e-12);

    FieldState sv = vacuum_state(FieldKind::SineGordon, 32, L);
    FieldChargeReport rs = charges(FieldKind::SineGordon, sv, kP);
    CHECK(std::abs(rs.values[1] + cplx(2.0 * L * kP.mass * kP.mass / (kP.beta * kP.beta))) < 1e-12);

    FieldState av = vacuum_state(FieldKind::AtftA2, 32, L);
    FieldChargeReport ra = charges(FieldKind::AtftA2, av, kP);
    CHECK(std::abs(ra.values[1] - cplx(2.0 * L * 3.0 * kP.mass * kP.mass / (kP.beta * kP.beta))) < 1e-12);
}

TEST_CASE("equations of motion at reference states") {
    // nls constant mode: psi_t = -2 i |c|^2 c.
    FieldState s = vacuum_state(FieldKind::Nls, 32, 4.0);
    const cplx c(0.5, -0.2);
    for (int j = 0; j < 32; ++j) {
        s.comps[0][j] = c;
        s.comps[1][j] = std::conj(c);
    }
    auto dot = eom_rhs(FieldKind::Nls, s, kP);
    CHECK(std::abs(dot[0][0] + cplx(0, 2) * std::norm(c) * c) < 1e-13);

    // sg vacuum is stationary; ll north pole is stationary.
    FieldState sv = vacuum_state(FieldKind::SineGordon, 32, 4.0);
    auto ds = eom_rhs(FieldKind::SineGordon, sv, kP);
    CHECK(ds[0].cwiseAbs().maxCoeff() == 0.0);
    CHECK(ds[1].cwiseAbs().maxCoeff() < 1e-12);
    FieldState lv = vacuum_state(FieldKind::LandauLifshitz, 32, 4.0);
    auto dl = eom_rhs(FieldKind::LandauLifshitz, lv, kP);
    for (const auto& comp : dl) CHECK(comp.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sg flow equals the variational derivative of the discrete energy") {
    SplitMix64 rng(7);
    FieldState s = random_state(FieldKind::SineGordon, 64, 6.0, 5, 0.4, rng);
    auto dot = eom_rhs(FieldKind::SineGordon, s, kP);
    // pidot_j = -(1/h) dH/dphi_j by central finite differences of the
    // discretized Hamiltonian.
    const double eps = 1e-5;
    const double h = s.grid.spacing();
    for (int j = 0; j < 64; j += 7) {
        FieldState plus = s, minus = s;
        plus.comps[0][j] += eps;
        minus.comps[0][j] -= eps;
        const cplx hp = charges(FieldKind::SineGordon, plus, kP).values[1];
        const cplx hm = charges(FieldKind::SineGordon, minus, kP).values[1];
        const cplx variational = -(hp - hm) / (2.0 * eps * h);
        CHECK(std::abs(dot[1][j] - variational) < 1e-6);
    }
}

TEST_CASE("atft flow equals the variational derivative of H1/2") {
    SplitMix64 rng(8);
    FieldState s = random_state(FieldKind::AtftA2, 64, 6.0, 5, 0.3, rng);
    auto dot = eom_rhs(FieldKind::AtftA2, s, kP);
    const double eps = 1e-5;
    const double h = s.grid.spacing();
    for (int c = 0; c < 2; ++c)
        for (int j = 0; j < 64; j += 9) {
            FieldState plus = s, minus = s;
            plus.comps[size_t(c)][j] += eps;
            minus.comps[size_t(c)][j] -= eps;
            const cplx hp = charges(FieldKind::AtftA2, plus, kP).values[1];
            const cplx hm = charges(FieldKind::AtftA2, minus, kP).values[1];
            const cplx variational = -0.5 * (hp - hm) / (2.0 * eps * h);
            CHECK(std::abs(dot[size_t(2 + c)][j] - variational) < 1e-6);
        }
}

TEST_CASE("continuum zero curvature residuals") {
    SplitMix64 rng(11);
    const int m = 128;
    const double L = 6.0;

    FieldState nls = random_state(FieldKind::Nls, m, L, 6, 0.4, rng);
    CHECK(zero_curvature_residual(FieldKind::Nls, Variant::V1, nls, kP, cplx(0.9, 0.2)) < 1e-8);
    CHECK(zero_curvature_residual(FieldKind::Nls, Variant::V2, nls, kP, cplx(0.9, 0.2)) < 1e-8);
    CHECK(zero_curvature_residual(FieldKind::Nls, Variant::V3, nls, kP, cplx(0.9, 0.2)) < 1e-6);

    FieldState sg = random_state(FieldKind::SineGordon, m, L, 5, 0.3, rng);
    CHECK(zero_curvature_residual(FieldKind::SineGordon, Variant::Hamiltonian, sg, kP, cplx(0.4, 0.1)) < 1e-6);

    FieldState lio = random_state(FieldKind::Liouville, m, L, 5, 0.25, rng);
    CHECK(zero_curvature_residual(FieldKind::Liouville, Variant::Hamiltonian, lio, kP, cplx(0.3, 0.2)) < 1e-6);

    FieldState ll = random_state(FieldKind::LandauLifshitz, m, L, 5, 0.3, rng);
    CHECK(zero_curvature_residual(FieldKind::LandauLifshitz, Variant::Hamiltonian, ll, kP, cplx(0.7, 0.3)) < 1e-6);

    FieldState atft = random_state(FieldKind::AtftA2, m, L, 5, 0.25, rng);
    CHECK(zero_curvature_residual(FieldKind::AtftA2, Variant::Hamiltonian, atft, kP, cplx(0.5, 0.2)) < 1e-6);
}

TEST_CASE("numerical monodromy") {
    const double L = 4.0;
    FieldState nv = vacuum_state(FieldKind::Nls, 64, L);
    const cplx lam(0.7, 0.3);
    CMatrix T = monodromy_numeric(FieldKind::Nls, nv, kP, lam);
    CHECK(std::abs(T.trace() - 2.0 * std::cosh(lam * L)) < 1e-10);

    FieldState sv = vacuum_state(FieldKind::SineGordon, 64, L);
    CMatrix Ts = monodromy_numeric(FieldKind::SineGordon, sv, kP, 0.0);  // u = 1
    CHECK(max_abs(CMatrix(Ts - CMatrix::Identity(2, 2))) < 1e-12);

    CHECK_THROWS_AS(monodromy_numeric(FieldKind::Nls, nv, kP, cplx(100.0, 0.0)),
                    std::domain_error);
}

TEST_CASE("monodromy trace converges with resolution") {
    // Fourth-order scheme: doubling M divides the error by ~16.
    SplitMix64 rng(13);
    FieldState coarse = random_state(FieldKind::Nls, 64, 5.0, 4, 0.5, rng);
    FieldState fine = vacuum_state(FieldKind::Nls, 128, 5.0);
    FieldState finest = vacuum_state(FieldKind::Nls, 512, 5.0);
    for (int c = 0; c < 2; ++c) {
        fine.comps[size_t(c)] = shifted_samples(PeriodicGrid{64, 5.0}, coarse.comps[size_t(c)], 0.0);
        // re-sample by zero-padding in mode space: use the analytic trick of
        // evaluating the coarse modes on the finer grids
        CVector F = fft(coarse.comps[size_t(c)]);
        CVector big = CVector::Zero(128), biggest = CVector::Zero(512);
        for (int k = 0; k < 64; ++k) {
            const int idx = (k <= 32) ? k : k - 64;
            big[(idx + 128) % 128] = F[k] / 64.0 * 128.0;
            biggest[(idx + 512) % 512] = F[k] / 64.0 * 512.0;
        }
        fine.comps[size_t(c)] = ifft(big);
        finest.comps[size_t(c)] = ifft(biggest);
    }
    const cplx lam(0.4, 0.2);
    const cplx t64 = monodromy_numeric(FieldKind::Nls, coarse, kP, lam).trace();
    const cplx t128 = monodromy_numeric(FieldKind::Nls, fine, kP, lam).trace();
    const cplx tref = monodromy_numeric(FieldKind::Nls, finest, kP, lam).trace();
    const double e64 = std::abs(t64 - tref), e128 = std::abs(t128 - tref);
    CHECK(e128 < e64 / 10.0);
}

TEST_CASE("evolution conserves the model charges") {
    // nls constant mode: |psi| stays constant to 1e-10 under split-step.
    FieldState s = vacuum_state(FieldKind::Nls, 32, 4.0);
    const cplx c(0.4, 0.1);
    for (int j = 0; j < 32; ++j) {
        s.comps[0][j] = c;
        s.comps[1][j] = std::conj(c);
    }
    EvolveReport rep = evolve(FieldKind::Nls, s, kP, 1e-3, 500, FieldScheme::SplitStep);
    for (int j = 0; j < 32; ++j)
        CHECK(std::abs(std::abs(rep.state.comps[0][j]) - std::abs(c)) < 1e-10);

    // ll north pole stays put.
    FieldState lv = vacuum_state(FieldKind::LandauLifshitz, 32, 4.0);
    EvolveReport rl = evolve(FieldKind::LandauLifshitz, lv, kP, 1e-3, 100, FieldScheme::Rk4);
    CHECK((rl.state.comps[2] - CVector::Ones(32)).cwiseAbs().maxCoeff() < 1e-12);

    // short sg leapfrog run on a smooth state: H drift stays small.
    SplitMix64 rng(17);
    FieldState sg = random_state(FieldKind::SineGordon, 64, 6.0, 4, 0.3, rng);
    EvolveReport rs = evolve(FieldKind::SineGordon, sg, kP, 0.01, 400, FieldScheme::Leapfrog, {}, 40);
    CHECK(!rs.aborted);
    CHECK(rs.charge_drift[1] < 1e-5);
}

TEST_CASE("gauge transformation reproduces the reduced connection") {
    SplitMix64 rng(19);
    // Vacuum: Omega = identity and U-tilde = U.
    FieldState av = vacuum_state(FieldKind::AtftA2, 32, 4.0);
    GaugeCheckReport g0 = atft_gauge(FieldKind::AtftA2, av, kP, cplx(0.4));
    CHECK(g0.residual < 1e-12);
    auto Uv = build_U(FieldKind::AtftA2, av, kP, cplx(0.4));
    CHECK(max_abs(CMatrix(g0.u_tilde[0] - Uv[0])) < 1e-12);

    FieldState s = random_state(FieldKind::AtftA2, 128, 6.0, 5, 0.3, rng);
    for (double lam : {0.2, 0.5, -0.4}) {
        GaugeCheckReport g = atft_gauge(FieldKind::AtftA2, s, kP, cplx(lam));
        CHECK(g.residual < 1e-6);
    }

    // sg: the diagonal of the reduced connection carries f = pi + phi'.
    FieldState sg = random_state(FieldKind::SineGordon, 128, 6.0, 5, 0.3, rng);
    GaugeCheckReport gs = atft_gauge(FieldKind::SineGordon, sg, kP, cplx(0.3));
    CHECK(gs.residual < 1e-6);
    const CVector dphi = spectral_derivative(sg.grid, sg.comps[0]);
    const cplx f0 = sg.comps[1][0] + dphi[0];
    CHECK(std::abs(gs.u_tilde[0](0, 0) - kP.beta * f0 / cplx(0, 4)) < 1e-6);
}

TEST_CASE("atft and spin-chain evolutions conserve their charges") {
    SplitMix64 rng(23);
    const ModelParams params{1.0, 1.0};
    // A2 affine Toda, leapfrog.
    FieldState atft = random_state(FieldKind::AtftA2, 128, 8.0, 4, 0.25, rng);
    const double dta = 0.2 * atft.grid.spacing();
    EvolveReport ra = evolve(FieldKind::AtftA2, atft, params, dta, 600, FieldScheme::Leapfrog, {}, 60);
    CHECK(!ra.aborted);
    CHECK(ra.charge_drift[0] <= 1e-5);  // P1
    CHECK(ra.charge_drift[1] <= 1e-5);  // H1

    // Spin chain, rk4 with renormalization.
    FieldState ll = random_state(FieldKind::LandauLifshitz, 128, 8.0, 4, 0.25, rng);
    const double h = ll.grid.spacing();
    EvolveReport rl = evolve(FieldKind::LandauLifshitz, ll, params, 0.1 * h * h, 400, FieldScheme::Rk4, {}, 40);
    CHECK(!rl.aborted);
    CHECK(rl.charge_drift[0] <= 1e-5);  // P
    CHECK(rl.charge_drift[1] <= 1e-5);  // H
}
