#include "laxkit/fields.hpp"

#include "field_detail.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace laxkit::fields {

using namespace detail;

FieldKind field_kind_from_string(const std::string& s) {
    if (s == "nls") return FieldKind::Nls;
    if (s == "sg" || s == "sine-gordon") return FieldKind::SineGordon;
    if (s == "liouville") return FieldKind::Liouville;
    if (s == "atft-A2" || s == "atft-a2") return FieldKind::AtftA2;
    if (s == "ll" || s == "landau-lifshitz") return FieldKind::LandauLifshitz;
    throw std::invalid_argument("unknown field model: " + s);
}

Variant variant_from_string(const std::string& s) {
    if (s == "v1") return Variant::V1;
    if (s == "v2") return Variant::V2;
    if (s == "v3") return Variant::V3;
    if (s == "hamiltonian") return Variant::Hamiltonian;
    if (s == "momentum") return Variant::Momentum;
    throw std::invalid_argument("unknown V variant: " + s);
}

int component_count(FieldKind k) {
    switch (k) {
        case FieldKind::Nls: return 2;
        case FieldKind::SineGordon:
        case FieldKind::Liouville: return 2;
        case FieldKind::AtftA2: return 4;
        case FieldKind::LandauLifshitz: return 3;
    }
    return 0;
}

FieldState vacuum_state(FieldKind k, int points, double half_length) {
    FieldState s;
    s.grid = PeriodicGrid{points, half_length};
    s.comps.assign(size_t(component_count(k)), CVector::Zero(points));
    if (k == FieldKind::LandauLifshitz) s.comps[2] = CVector::Ones(points);
    return s;
}

FieldState random_state(FieldKind k, int points, double half_length, int kmax,
                        double amplitude, SplitMix64& rng) {
    FieldState s = vacuum_state(k, points, half_length);
    switch (k) {
        case FieldKind::Nls: {
            s.comps[0] = random_band_limited(s.grid, kmax, amplitude, rng);
            s.comps[1] = s.comps[0].conjugate();
            break;
        }
        case FieldKind::SineGordon:
        case FieldKind::AtftA2: {
            for (auto& c : s.comps)
                c = random_band_limited_real(s.grid, kmax, amplitude, rng);
            break;
        }
        case FieldKind::Liouville: {
            for (auto& c : s.comps)
                c = random_band_limited(s.grid, kmax, amplitude, rng);
            break;
        }
        case FieldKind::LandauLifshitz: {
            CVector s1 = random_band_limited_real(s.grid, kmax, amplitude, rng);
            CVector s2 = random_band_limited_real(s.grid, kmax, amplitude, rng);
            for (int j = 0; j < points; ++j) {
                const double a = s1[j].real(), b = s2[j].real();
                const double n = std::sqrt(a * a + b * b + 1.0);
                s.comps[0][j] = a / n;
                s.comps[1][j] = b / n;
                s.comps[2][j] = 1.0 / n;
            }
            break;
        }
    }
    return s;
}

void validate_state(FieldKind k, const FieldState& s) {
    if (int(s.comps.size()) != component_count(k))
        throw std::invalid_argument("FieldState: wrong component count");
    for (const auto& c : s.comps) {
        if (c.size() != s.grid.points)
            throw std::invalid_argument("FieldState: component size mismatch");
        if (!c.allFinite()) throw std::domain_error("FieldState: non-finite component");
    }
    if (k == FieldKind::LandauLifshitz) {
        for (int j = 0; j < s.grid.points; ++j) {
            const double n2 = std::norm(s.comps[0][j]) + std::norm(s.comps[1][j])
                            + std::norm(s.comps[2][j]);
            if (std::abs(n2 - 1.0) > 1e-10)
                throw std::domain_error("FieldState: spins must be unit length");
        }
    }
}

// ---------------------------------------------------------------------------
// Lax connection
// ---------------------------------------------------------------------------

namespace {

CMatrix nls_U_at(cplx lambda, cplx psi, cplx psibar) {
    CMatrix u(2, 2);
    u << lambda / 2.0, psibar, psi, -lambda / 2.0;
    return u;
}

CMatrix sg_U_at(const ModelParams& p, cplx u, cplx phi, cplx pi) {
    const cplx i4(0.0, -0.25);  // 1/(4 i)
    return p.beta * i4 * pi * sigma_z()
         + p.mass * u * i4 * sg_conj_plus(p.beta, phi)
         - p.mass / u * i4 * sg_conj_minus(p.beta, phi);
}

CMatrix liouville_U_at(cplx lambda, cplx phi, cplx pi) {
    CMatrix u(2, 2);
    const cplx I(0, 1);
    u << -I * pi / 2.0, -std::exp(-lambda - I * phi),
         2.0 * std::sinh(lambda - I * phi), I * pi / 2.0;
    return u;
}

CMatrix liouville_V_at(cplx lambda, cplx phi, cplx dphi) {
    CMatrix v(2, 2);
    const cplx I(0, 1);
    v << -I * dphi / 2.0, std::exp(-lambda - I * phi),
         2.0 * std::cosh(lambda - I * phi), I * dphi / 2.0;
    return v;
}

CMatrix ll_S_at(cplx s1, cplx s2, cplx s3) {
    CMatrix m(2, 2);
    m << s3, s1 - cplx(0, 1) * s2, s1 + cplx(0, 1) * s2, -s3;
    return m;
}

CMatrix atft_U_at(const ModelParams& p, cplx u, cplx phi1, cplx phi2, cplx pi1, cplx pi2) {
    const CartanData& cd = a2();
    CVector piv(2);
    piv << pi1, pi2;
    const CMatrix g = a2_gauge(p.beta / 2.0, phi1, phi2);
    const CMatrix gi = a2_gauge(-p.beta / 2.0, phi1, phi2);
    return p.beta / 2.0 * cd.dot_H(piv)
         + p.mass / 4.0 * (u * g * cd.big_E_plus() * gi + (1.0 / u) * gi * cd.big_E_minus() * g);
}

CMatrix atft_V_at(const ModelParams& p, cplx u, cplx phi1, cplx phi2, cplx dphi1, cplx dphi2) {
    const CartanData& cd = a2();
    CVector dv(2);
    dv << dphi1, dphi2;
    const CMatrix g = a2_gauge(p.beta / 2.0, phi1, phi2);
    const CMatrix gi = a2_gauge(-p.beta / 2.0, phi1, phi2);
    return p.beta / 2.0 * cd.dot_H(dv)
         + p.mass / 4.0 * (u * g * cd.big_E_plus() * gi - (1.0 / u) * gi * cd.big_E_minus() * g);
}

cplx sg_multiplicative(cplx lambda) { return std::exp(lambda); }
cplx atft_multiplicative(cplx lambda) { return std::exp(2.0 * lambda / 3.0); }

}  // namespace

std::vector<CMatrix> build_U(FieldKind k, const FieldState& s, const ModelParams& p,
                             cplx lambda) {
    const int m = s.grid.points;
    std::vector<CMatrix> out;
    out.reserve(size_t(m));
    switch (k) {
        case FieldKind::Nls:
            for (int j = 0; j < m; ++j)
                out.push_back(nls_U_at(lambda, s.comps[0][j], s.comps[1][j]));
            break;
        case FieldKind::SineGordon: {
            const cplx u = sg_multiplicative(lambda);
            for (int j = 0; j < m; ++j)
                out.push_back(sg_U_at(p, u, s.comps[0][j], s.comps[1][j]));
            break;
        }
        case FieldKind::Liouville:
            for (int j = 0; j < m; ++j)
                out.push_back(liouville_U_at(lambda, s.comps[0][j], s.comps[1][j]));
            break;
        case FieldKind::AtftA2: {
            const cplx u = atft_multiplicative(lambda);
            for (int j = 0; j < m; ++j)
                out.push_back(atft_U_at(p, u, s.comps[0][j], s.comps[1][j],
                                        s.comps[2][j], s.comps[3][j]));
            break;
        }
        case FieldKind::LandauLifshitz: {
            if (std::abs(lambda) < 1e-8)
                throw std::domain_error("build_U: lambda = 0 is a pole of the spin chain connection");
            for (int j = 0; j < m; ++j)
                out.push_back(ll_S_at(s.comps[0][j], s.comps[1][j], s.comps[2][j]) / (2.0 * lambda));
            break;
        }
    }
    return out;
}

std::vector<CMatrix> build_V(FieldKind k, Variant v, const FieldState& s,
                             const ModelParams& p, cplx lambda) {
    const int m = s.grid.points;
    std::vector<CMatrix> out;
    out.reserve(size_t(m));
    switch (k) {
        case FieldKind::Nls: {
            const CVector& psi = s.comps[0];
            const CVector& psibar = s.comps[1];
            const CVector dpsi = spectral_derivative(s.grid, psi);
            const CVector dpsibar = spectral_derivative(s.grid, psibar);
            for (int j = 0; j < m; ++j) {
                CMatrix vv = CMatrix::Zero(2, 2);
                if (v == Variant::V1) {
                    vv(0, 0) = 1.0;
                } else if (v == Variant::V2) {
                    vv << lambda, psibar[j], psi[j], 0.0;
                } else if (v == Variant::V3) {
                    vv << lambda * lambda - psi[j] * psibar[j],
                          lambda * psibar[j] + dpsibar[j],
                          lambda * psi[j] - dpsi[j],
                          psi[j] * psibar[j];
                } else {
                    throw std::invalid_argument("build_V: nls supports V1, V2, V3");
                }
                out.push_back(vv);
            }
            break;
        }
        case FieldKind::SineGordon: {
            if (v == Variant::Momentum) return build_U(k, s, p, lambda);
            if (v != Variant::Hamiltonian)
                throw std::invalid_argument("build_V: sg supports hamiltonian and momentum");
            const cplx u = sg_multiplicative(lambda);
            const CVector dphi = spectral_derivative(s.grid, s.comps[0]);
            const cplx i4(0.0, -0.25);
            for (int j = 0; j < m; ++j)
                out.push_back(CMatrix(p.beta * i4 * dphi[j] * sigma_z()
                                      + p.mass * u * i4 * sg_conj_plus(p.beta, s.comps[0][j])
                                      + p.mass / u * i4 * sg_conj_minus(p.beta, s.comps[0][j])));
            break;
        }
        case FieldKind::Liouville: {
            if (v != Variant::Hamiltonian)
                throw std::invalid_argument("build_V: liouville has a single V operator");
            const CVector dphi = spectral_derivative(s.grid, s.comps[0]);
            for (int j = 0; j < m; ++j)
                out.push_back(liouville_V_at(lambda, s.comps[0][j], dphi[j]));
            break;
        }
        case FieldKind::AtftA2: {
            if (v != Variant::Hamiltonian)
                throw std::invalid_argument("build_V: atft-A2 has a single V operator");
            const cplx u = atft_multiplicative(lambda);
            const CVector d1 = spectral_derivative(s.grid, s.comps[0]);
            const CVector d2 = spectral_derivative(s.grid, s.comps[1]);
            for (int j = 0; j < m; ++j)
                out.push_back(atft_V_at(p, u, s.comps[0][j], s.comps[1][j], d1[j], d2[j]));
            break;
        }
        case FieldKind::LandauLifshitz: {
            if (v != Variant::Hamiltonian)
                throw std::invalid_argument("build_V: ll has a single V operator");
            if (std::abs(lambda) < 1e-8)
                throw std::domain_error("build_V: lambda = 0 pole");
            std::vector<CVector> ds;
            for (int c = 0; c < 3; ++c) ds.push_back(spectral_derivative(s.grid, s.comps[size_t(c)]));
            for (int j = 0; j < m; ++j) {
                const CMatrix S = ll_S_at(s.comps[0][j], s.comps[1][j], s.comps[2][j]);
                const CMatrix Sx = ll_S_at(ds[0][j], ds[1][j], ds[2][j]);
                out.push_back(CMatrix(S / (2.0 * lambda * lambda) - (Sx * S) / (2.0 * lambda)));
            }
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Charges
// ---------------------------------------------------------------------------

FieldChargeReport charges(FieldKind k, const FieldState& s, const ModelParams& p) {
    FieldChargeReport rep;
    const PeriodicGrid& g = s.grid;
    switch (k) {
        case FieldKind::Nls: {
            const CVector& psi = s.comps[0];
            const CVector& psibar = s.comps[1];
            const CVector dpsi = spectral_derivative(g, psi);
            const CVector dpsibar = spectral_derivative(g, psibar);
            rep.names = {"N", "P", "H"};
            rep.values.push_back(integrate(g, psi.cwiseProduct(psibar)));
            rep.values.push_back(0.5 * integrate(g, CVector(dpsibar.cwiseProduct(psi)
                                                            - psibar.cwiseProduct(dpsi))));
            CVector dens = psi.cwiseProduct(psibar).cwiseProduct(psi.cwiseProduct(psibar))
                         + dpsi.cwiseProduct(dpsibar);
            rep.values.push_back(-integrate(g, dens));
            break;
        }
        case FieldKind::SineGordon: {
            const CVector& phi = s.comps[0];
            const CVector& pi = s.comps[1];
            const CVector dphi = spectral_derivative(g, phi);
            rep.names = {"P", "H"};
            rep.values.push_back(integrate(g, dphi.cwiseProduct(pi)));
            CVector dens(g.points);
            for (int j = 0; j < g.points; ++j)
                dens[j] = 0.5 * (pi[j] * pi[j] + dphi[j] * dphi[j])
                        - p.mass * p.mass / (p.beta * p.beta) * std::cos(p.beta * phi[j]);
            rep.values.push_back(integrate(g, dens));
            break;
        }
        case FieldKind::Liouville:
            break;  // no conserved-charge catalog for this model
        case FieldKind::AtftA2: {
            const CVector d1 = spectral_derivative(g, s.comps[0]);
            const CVector d2 = spectral_derivative(g, s.comps[1]);
            const CVector dp1 = spectral_derivative(g, s.comps[2]);
            const CVector dp2 = spectral_derivative(g, s.comps[3]);
            rep.names = {"P1", "H1"};
            CVector mom(g.points), ham(g.points);
            for (int j = 0; j < g.points; ++j) {
                const cplx pi1 = s.comps[2][j], pi2 = s.comps[3][j];
                mom[j] = pi1 * d1[j] - dp1[j] * s.comps[0][j]
                       + pi2 * d2[j] - dp2[j] * s.comps[1][j];
                const auto gam = a2_gammas(p.beta, s.comps[0][j], s.comps[1][j]);
                ham[j] = pi1 * pi1 + pi2 * pi2 + d1[j] * d1[j] + d2[j] * d2[j]
                       + p.mass * p.mass / (p.beta * p.beta) * (gam[0] + gam[1] + gam[2]);
            }
            rep.values.push_back(integrate(g, mom));
            rep.values.push_back(integrate(g, ham));
            break;
        }
        case FieldKind::LandauLifshitz: {
            const CVector d1 = spectral_derivative(g, s.comps[0]);
            const CVector d2 = spectral_derivative(g, s.comps[1]);
            const CVector d3 = spectral_derivative(g, s.comps[2]);
            rep.names = {"P", "H"};
            CVector mom(g.points), ham(g.points);
            for (int j = 0; j < g.points; ++j) {
                const cplx s3 = s.comps[2][j];
                if (std::abs(s3 + 1.0) < 1e-6)
                    throw std::domain_error("charges: spin momentum singular at S3 = -1");
                mom[j] = (s.comps[0][j] * d2[j] - s.comps[1][j] * d1[j]) / (1.0 + s3);
                ham[j] = d1[j] * d1[j] + d2[j] * d2[j] + d3[j] * d3[j];
            }
            rep.values.push_back(integrate(g, mom));
            rep.values.push_back(-0.25 * integrate(g, ham));
            break;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Equations of motion
// ---------------------------------------------------------------------------

std::vector<CVector> eom_rhs(FieldKind k, const FieldState& s, const ModelParams& p) {
    const PeriodicGrid& g = s.grid;
    std::vector<CVector> dot(s.comps.size(), CVector::Zero(g.points));
    switch (k) {
        case FieldKind::Nls: {
            // i psi_t = -psi_xx + 2 |psi|^2 psi, psibar the conjugate.
            const CVector lap = spectral_derivative(g, s.comps[0], 2);
            for (int j = 0; j < g.points; ++j) {
                const cplx psi = s.comps[0][j];
                dot[0][j] = cplx(0, 1) * (lap[j] - 2.0 * std::norm(psi) * psi);
                dot[1][j] = std::conj(dot[0][j]);
            }
            break;
        }
        case FieldKind::SineGordon: {
            const CVector lap = spectral_derivative(g, s.comps[0], 2);
            dot[0] = s.comps[1];
            for (int j = 0; j < g.points; ++j)
                dot[1][j] = lap[j] - p.mass * p.mass / p.beta
                                   * std::sin(p.beta * s.comps[0][j]);
            break;
        }
        case FieldKind::Liouville: {
            const CVector lap = spectral_derivative(g, s.comps[0], 2);
            dot[0] = s.comps[1];
            for (int j = 0; j < g.points; ++j)
                dot[1][j] = lap[j] + 4.0 * cplx(0, 1) * std::exp(cplx(0, -2.0) * s.comps[0][j]);
            break;
        }
        case FieldKind::AtftA2: {
            const CVector lap1 = spectral_derivative(g, s.comps[0], 2);
            const CVector lap2 = spectral_derivative(g, s.comps[1], 2);
            dot[0] = s.comps[2];
            dot[1] = s.comps[3];
            const CartanData& cd = a2();
            for (int j = 0; j < g.points; ++j) {
                const auto gam = a2_gammas(p.beta, s.comps[0][j], s.comps[1][j]);
                cplx f1 = 0.0, f2 = 0.0;
                for (int r = 0; r < 3; ++r) {
                    f1 += cd.simple_roots[size_t(r)][0] * gam[size_t(r)];
                    f2 += cd.simple_roots[size_t(r)][1] * gam[size_t(r)];
                }
                const double c = p.mass * p.mass / (2.0 * p.beta);
                dot[2][j] = lap1[j] - c * f1;
                dot[3][j] = lap2[j] - c * f2;
            }
            break;
        }
        case FieldKind::LandauLifshitz: {
            const CVector d1 = spectral_derivative(g, s.comps[0], 2);
            const CVector d2 = spectral_derivative(g, s.comps[1], 2);
            const CVector d3 = spectral_derivative(g, s.comps[2], 2);
            for (int j = 0; j < g.points; ++j) {
                // S x S_xx
                dot[0][j] = s.comps[1][j] * d3[j] - s.comps[2][j] * d2[j];
                dot[1][j] = s.comps[2][j] * d1[j] - s.comps[0][j] * d3[j];
                dot[2][j] = s.comps[0][j] * d2[j] - s.comps[1][j] * d1[j];
            }
            break;
        }
    }
    return dot;
}

std::vector<CVector> literal_rhs(FieldKind k, Variant v, const FieldState& s,
                                 const ModelParams& p) {
    const PeriodicGrid& g = s.grid;
    std::vector<CVector> dot(s.comps.size(), CVector::Zero(g.points));
    if (k == FieldKind::Nls) {
        const CVector& psi = s.comps[0];
        const CVector& psibar = s.comps[1];
        if (v == Variant::V1) {
            dot[0] = -psi;
            dot[1] = psibar;
        } else if (v == Variant::V2) {
            dot[0] = spectral_derivative(g, psi);
            dot[1] = spectral_derivative(g, psibar);
        } else {
            const CVector lap = spectral_derivative(g, psi, 2);
            const CVector lapbar = spectral_derivative(g, psibar, 2);
            for (int j = 0; j < g.points; ++j) {
                dot[0][j] = -lap[j] + 2.0 * psi[j] * psi[j] * psibar[j];
                dot[1][j] = lapbar[j] - 2.0 * psi[j] * psibar[j] * psibar[j];
            }
        }
        return dot;
    }
    if (k == FieldKind::LandauLifshitz) {
        std::vector<CVector> real = eom_rhs(k, s, p);
        for (auto& c : real) c *= cplx(0, 1);  // S_t = i S x S_xx
        return real;
    }
    return eom_rhs(k, s, p);
}

// ---------------------------------------------------------------------------
// Zero curvature
// ---------------------------------------------------------------------------

namespace {

/// Analytic time derivative of U given field velocities.
std::vector<CMatrix> u_dot(FieldKind k, const FieldState& s, const ModelParams& p,
                           cplx lambda, const std::vector<CVector>& vel) {
    const int m = s.grid.points;
    std::vector<CMatrix> out;
    out.reserve(size_t(m));
    switch (k) {
        case FieldKind::Nls:
            for (int j = 0; j < m; ++j) {
                CMatrix d = CMatrix::Zero(2, 2);
                d(0, 1) = vel[1][j];
                d(1, 0) = vel[0][j];
                out.push_back(d);
            }
            break;
        case FieldKind::SineGordon: {
            const cplx u = sg_multiplicative(lambda);
            const cplx i4(0.0, -0.25);
            for (int j = 0; j < m; ++j) {
                const cplx phidot = vel[0][j], pidot = vel[1][j];
                const CMatrix cp = sg_conj_plus(p.beta, s.comps[0][j]);
                const CMatrix cm = sg_conj_minus(p.beta, s.comps[0][j]);
                const cplx fac(0.0, p.beta / 4.0);
                CMatrix d = p.beta * i4 * pidot * sigma_z();
                d += p.mass * u * i4 * (fac * phidot) * (sigma_z() * cp - cp * sigma_z());
                d -= p.mass / u * i4 * (-fac * phidot) * (sigma_z() * cm - cm * sigma_z());
                out.push_back(d);
            }
            break;
        }
        case FieldKind::Liouville: {
            const cplx I(0, 1);
            for (int j = 0; j < m; ++j) {
                const cplx phi = s.comps[0][j];
                const cplx phidot = vel[0][j], pidot = vel[1][j];
                CMatrix d(2, 2);
                d << -I * pidot / 2.0, I * phidot * std::exp(-lambda - I * phi),
                     -2.0 * I * phidot * std::cosh(lambda - I * phi), I * pidot / 2.0;
                out.push_back(d);
            }
            break;
        }
        case FieldKind::AtftA2: {
            const CartanData& cd = a2();
            const cplx u = atft_multiplicative(lambda);
            for (int j = 0; j < m; ++j) {
                const CMatrix g = a2_gauge(p.beta / 2.0, s.comps[0][j], s.comps[1][j]);
                const CMatrix gi = a2_gauge(-p.beta / 2.0, s.comps[0][j], s.comps[1][j]);
                CVector pidot(2), phidot(2);
                phidot << vel[0][j], vel[1][j];
                pidot << vel[2][j], vel[3][j];
                const CMatrix hdot = p.beta / 2.0 * cd.dot_H(phidot);
                const CMatrix kp = g * cd.big_E_plus() * gi;
                const CMatrix km = gi * cd.big_E_minus() * g;
                CMatrix d = p.beta / 2.0 * cd.dot_H(pidot);
                d += p.mass / 4.0 * u * (hdot * kp - kp * hdot);
                d -= p.mass / 4.0 / u * (hdot * km - km * hdot);
                out.push_back(d);
            }
            break;
        }
        case FieldKind::LandauLifshitz:
            for (int j = 0; j < m; ++j)
                out.push_back(ll_S_at(vel[0][j], vel[1][j], vel[2][j]) / (2.0 * lambda));
            break;
    }
    return out;
}

/// Spectral x-derivative of a matrix field (entrywise across the grid).
std::vector<CMatrix> matrix_field_derivative(const PeriodicGrid& g,
                                             const std::vector<CMatrix>& f) {
    const int m = g.points;
    const int d = int(f[0].rows());
    std::vector<CMatrix> out(size_t(m), CMatrix::Zero(d, d));
    CVector buf(m);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            for (int j = 0; j < m; ++j) buf[j] = f[size_t(j)](a, b);
            CVector db = spectral_derivative(g, buf);
            for (int j = 0; j < m; ++j) out[size_t(j)](a, b) = db[j];
        }
    return out;
}

}  // namespace

double zero_curvature_residual(FieldKind k, Variant v, const FieldState& s,
                               const ModelParams& p, cplx lambda) {
    const std::vector<CVector> vel = literal_rhs(k, v, s, p);
    const std::vector<CMatrix> U = build_U(k, s, p, lambda);
    const std::vector<CMatrix> V = build_V(k, v, s, p, lambda);
    const std::vector<CMatrix> Ud = u_dot(k, s, p, lambda, vel);
    const std::vector<CMatrix> Vp = matrix_field_derivative(s.grid, V);
    // The affine Toda pair closes the compatibility identity with the
    // commutator orientation reversed.
    const double csign = (k == FieldKind::AtftA2) ? -1.0 : 1.0;
    double worst = 0.0;
    for (int j = 0; j < s.grid.points; ++j) {
        const CMatrix comm = U[size_t(j)] * V[size_t(j)] - V[size_t(j)] * U[size_t(j)];
        worst = std::max(worst, max_abs(CMatrix(Ud[size_t(j)] - Vp[size_t(j)] + csign * comm)));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Numerical monodromy
// ---------------------------------------------------------------------------

CMatrix monodromy_numeric(FieldKind k, const FieldState& s, const ModelParams& p,
                          cplx lambda) {
    if (std::abs(lambda.real()) * 2.0 * s.grid.half_length > 500.0)
        throw std::domain_error("monodromy_numeric: |Re lambda| * 2L > 500 overflows");
    const int m = s.grid.points;
    const double h = s.grid.spacing();
    // Two-point Gauss nodes inside each cell, fields interpolated spectrally.
    const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
    const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
    FieldState s1 = s, s2 = s;
    for (size_t c = 0; c < s.comps.size(); ++c) {
        s1.comps[c] = shifted_samples(s.grid, s.comps[c], c1 * h);
        s2.comps[c] = shifted_samples(s.grid, s.comps[c], c2 * h);
    }
    const std::vector<CMatrix> A1 = build_U(k, s1, p, lambda);
    const std::vector<CMatrix> A2m = build_U(k, s2, p, lambda);
    const int d = int(A1[0].rows());
    CMatrix T = CMatrix::Identity(d, d);
    const double w = std::sqrt(3.0) / 12.0;
    for (int j = 0; j < m; ++j) {
        const CMatrix& a = A1[size_t(j)];
        const CMatrix& b = A2m[size_t(j)];
        const CMatrix omega = 0.5 * h * (a + b) + w * h * h * (b * a - a * b);
        T = omega.exp() * T;
    }
    return T;
}

// ---------------------------------------------------------------------------
// Evolution
// ---------------------------------------------------------------------------

namespace {

double state_peak(const FieldState& s) {
    double peak = 0.0;
    for (const auto& c : s.comps) peak = std::max(peak, c.cwiseAbs().maxCoeff());
    return peak;
}

bool state_finite(const FieldState& s) {
    for (const auto& c : s.comps)
        if (!c.allFinite()) return false;
    return true;
}

void ll_renormalize(FieldState& s) {
    for (int j = 0; j < s.grid.points; ++j) {
        const double n = std::sqrt(std::norm(s.comps[0][j]) + std::norm(s.comps[1][j])
                                   + std::norm(s.comps[2][j]));
        for (int c = 0; c < 3; ++c) s.comps[size_t(c)][j] /= n;
    }
}

void rk4_step(FieldKind k, FieldState& s, const ModelParams& p, double dt) {
    auto add = [](const FieldState& base, const std::vector<CVector>& d, double f) {
        FieldState out = base;
        for (size_t c = 0; c < out.comps.size(); ++c) out.comps[c] += f * d[c];
        return out;
    };
    const auto k1 = eom_rhs(k, s, p);
    const auto k2 = eom_rhs(k, add(s, k1, dt / 2), p);
    const auto k3 = eom_rhs(k, add(s, k2, dt / 2), p);
    const auto k4 = eom_rhs(k, add(s, k3, dt), p);
    for (size_t c = 0; c < s.comps.size(); ++c)
        s.comps[c] += dt / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    if (k == FieldKind::LandauLifshitz) ll_renormalize(s);
}

void split_step(FieldState& s, double dt) {
    // Strang splitting for i psi_t = -psi_xx + 2|psi|^2 psi.
    auto kick = [&](double tau) {
        for (int j = 0; j < s.grid.points; ++j) {
            const double n2 = std::norm(s.comps[0][j]);
            s.comps[0][j] *= std::exp(cplx(0.0, -2.0 * n2 * tau));
        }
    };
    kick(dt / 2);
    CVector F = fft(s.comps[0]);
    const int m = s.grid.points;
    const double base = M_PI / s.grid.half_length;
    for (int kk = 0; kk < m; ++kk) {
        const int idx = (kk <= m / 2) ? kk : kk - m;
        const double kap = base * idx;
        F[kk] *= std::exp(cplx(0.0, -kap * kap * dt));
    }
    s.comps[0] = ifft(F);
    kick(dt / 2);
    s.comps[1] = s.comps[0].conjugate();
}

void leapfrog_step(FieldKind k, FieldState& s, const ModelParams& p, double dt) {
    const int nf = (k == FieldKind::AtftA2) ? 2 : 1;  // field/momentum pairs
    auto kick = [&](double tau) {
        const auto rhs = eom_rhs(k, s, p);
        for (int c = 0; c < nf; ++c) s.comps[size_t(nf + c)] += tau * rhs[size_t(nf + c)];
    };
    kick(dt / 2);
    for (int c = 0; c < nf; ++c) s.comps[size_t(c)] += dt * s.comps[size_t(nf + c)];
    kick(dt / 2);
}

}  // namespace

EvolveReport evolve(FieldKind k, const FieldState& s0, const ModelParams& p,
                    double dt, int steps, FieldScheme scheme,
                    const std::vector<cplx>& trT_probes, int sample_every) {
    if (scheme == FieldScheme::SplitStep && k != FieldKind::Nls)
        throw std::invalid_argument("evolve: split-step applies to nls");
    if (scheme == FieldScheme::Leapfrog
        && !(k == FieldKind::SineGordon || k == FieldKind::AtftA2))
        throw std::invalid_argument("evolve: leapfrog applies to sg and atft-A2");

    EvolveReport rep;
    rep.state = s0;
    const FieldChargeReport c0 = charges(k, s0, p);
    rep.charge_drift.assign(c0.values.size(), 0.0);
    rep.trT_drift.assign(trT_probes.size(), 0.0);
    std::vector<cplx> trT0;
    for (cplx probe : trT_probes)
        trT0.push_back(monodromy_numeric(k, s0, p, probe).trace());
    const double peak0 = state_peak(s0) + 1.0;

    auto sample = [&](int step) {
        if (sample_every <= 0 && step != 0 && step != steps) return;
        if (sample_every > 0 && step % sample_every != 0 && step != steps) return;
        rep.times.push_back(step * dt);
        const FieldChargeReport c = charges(k, rep.state, p);
        rep.charge_series.push_back(c.values);
        for (size_t i = 0; i < c.values.size(); ++i) {
            const double d = std::abs(c.values[i] - c0.values[i])
                           / (std::abs(c0.values[i]) + 1.0);
            rep.charge_drift[i] = std::max(rep.charge_drift[i], d);
        }
        std::vector<cplx> row;
        for (size_t i = 0; i < trT_probes.size(); ++i) {
            const cplx t = monodromy_numeric(k, rep.state, p, trT_probes[i]).trace();
            row.push_back(t);
            rep.trT_drift[i] = std::max(rep.trT_drift[i],
                                        std::abs(t - trT0[i]) / (1.0 + std::abs(trT0[i])));
        }
        rep.trT_series.push_back(row);
    };
    sample(0);

    for (int step = 1; step <= steps; ++step) {
        switch (scheme) {
            case FieldScheme::Rk4: rk4_step(k, rep.state, p, dt); break;
            case FieldScheme::SplitStep: split_step(rep.state, dt); break;
            case FieldScheme::Leapfrog: leapfrog_step(k, rep.state, p, dt); break;
        }
        if (!state_finite(rep.state)) {
            rep.aborted = true;
            rep.abort_step = step;
            rep.abort_reason = "non-finite field value";
            return rep;
        }
        if (state_peak(rep.state) > 10.0 * peak0) {
            rep.aborted = true;
            rep.abort_step = step;
            rep.abort_reason = "instability: field amplitude grew more than 10x";
            return rep;
        }
        sample(step);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Gauge transformation
// ---------------------------------------------------------------------------

GaugeCheckReport atft_gauge(FieldKind k, const FieldState& s, const ModelParams& p,
                            cplx lambda) {
    const int m = s.grid.points;
    std::vector<CMatrix> omega, expected;
    omega.reserve(size_t(m));
    expected.reserve(size_t(m));
    if (k == FieldKind::SineGordon) {
        const cplx u = sg_multiplicative(lambda);
        const CVector dphi = spectral_derivative(s.grid, s.comps[0]);
        const cplx i4(0.0, -0.25);
        for (int j = 0; j < m; ++j) {
            const cplx phi = s.comps[0][j];
            CMatrix om = CMatrix::Zero(2, 2);
            om(0, 0) = std::exp(cplx(0, p.beta / 4.0) * phi);
            om(1, 1) = std::exp(cplx(0, -p.beta / 4.0) * phi);
            omega.push_back(om);
            const cplx f = s.comps[1][j] + dphi[j];  // f = pi + phi'
            // conj_minus at 2 phi is Om^{-2} sigma^y Om^{2}
            expected.push_back(CMatrix(p.beta * i4 * f * sigma_z()
                                       + p.mass * u * i4 * sigma_y()
                                       - p.mass / u * i4 * sg_conj_minus(p.beta, 2.0 * phi)));
        }
    } else if (k == FieldKind::AtftA2) {
        const CartanData& cd = a2();
        const cplx u = atft_multiplicative(lambda);
        const CVector d1 = spectral_derivative(s.grid, s.comps[0]);
        const CVector d2 = spectral_derivative(s.grid, s.comps[1]);
        for (int j = 0; j < m; ++j) {
            omega.push_back(a2_gauge(p.beta / 2.0, s.comps[0][j], s.comps[1][j]));
            CVector theta(2);
            theta << s.comps[2][j] - d1[j], s.comps[3][j] - d2[j];
            expected.push_back(CMatrix(p.beta / 2.0 * cd.dot_H(theta)
                                       + p.mass / 4.0 * (u * cd.big_E_plus()
                                                         + (1.0 / u) * a2_x_minus(p.beta, s.comps[0][j], s.comps[1][j]))));
        }
    } else {
        throw std::invalid_argument("atft_gauge: supported for sg and atft-A2");
    }

    const std::vector<CMatrix> U = build_U(k, s, p, lambda);
    const std::vector<CMatrix> domega = matrix_field_derivative(s.grid, omega);
    GaugeCheckReport rep;
    rep.residual = 0.0;
    rep.u_tilde.reserve(size_t(m));
    for (int j = 0; j < m; ++j) {
        const CMatrix oi = omega[size_t(j)].inverse();
        const CMatrix ut = oi * U[size_t(j)] * omega[size_t(j)] - oi * domega[size_t(j)];
        rep.u_tilde.push_back(ut);
        rep.residual = std::max(rep.residual, max_abs(CMatrix(ut - expected[size_t(j)])));
    }
    return rep;
}

}  // namespace laxkit::fields
