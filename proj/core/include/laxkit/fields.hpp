#pragma once

#include "laxkit/cartan.hpp"
#include "laxkit/grid.hpp"

#include <string>
#include <vector>

namespace laxkit::fields {

enum class FieldKind { Nls, SineGordon, Liouville, AtftA2, LandauLifshitz };

FieldKind field_kind_from_string(const std::string& s);

struct ModelParams {
    double mass = 1.0;
    double beta = 1.0;
};

/// Periodic grid plus per-model field components:
///   nls             {psi, psibar}
///   sg / liouville  {phi, pi}
///   atft-A2         {phi1, phi2, pi1, pi2}
///   ll              {S1, S2, S3}  (unit spins, S3 > -1 for the momentum)
struct FieldState {
    PeriodicGrid grid;
    std::vector<CVector> comps;

    int components() const { return int(comps.size()); }
};

int component_count(FieldKind k);
FieldState vacuum_state(FieldKind k, int points, double half_length);
/// Seeded smooth random state (band-limited modes, |k| <= kmax); spins are
/// generated as a normalized perturbation of the north pole.
FieldState random_state(FieldKind k, int points, double half_length, int kmax,
                        double amplitude, SplitMix64& rng);
/// Enforce model invariants (unit spins, psibar = conj psi); throws on NaN.
void validate_state(FieldKind k, const FieldState& s);

// ---------------------------------------------------------------------------
// Lax connection
// ---------------------------------------------------------------------------

/// Spatial Lax component U(x_j, lambda) at every grid point.
/// Model parameterizations: sg uses u = e^lambda, atft-A2 uses
/// u = e^{2 lambda/(n+1)} internally; the public argument is always lambda.
/// Poles: ll requires lambda != 0.
std::vector<CMatrix> build_U(FieldKind k, const FieldState& s, const ModelParams& p,
                             cplx lambda);

/// Time components of the Lax pairs.
enum class Variant {
    V1,           // nls: first flow
    V2,           // nls: momentum flow
    V3,           // nls: Hamiltonian flow
    Hamiltonian,  // sg: V^(H); atft-A2 / liouville / ll: the model V operator
    Momentum      // sg: V^(P) (coincides with U)
};

Variant variant_from_string(const std::string& s);

std::vector<CMatrix> build_V(FieldKind k, Variant v, const FieldState& s,
                             const ModelParams& p, cplx lambda);

// ---------------------------------------------------------------------------
// Charges, equations of motion, evolution
// ---------------------------------------------------------------------------

struct FieldChargeReport {
    std::vector<std::string> names;
    std::vector<cplx> values;
};

/// Trapezoid quadrature on the periodic grid, spectral derivatives.
/// nls: N, P, H; sg: P, H; atft-A2: P1, H1; ll: P, H.  Liouville exposes no
/// charges.
FieldChargeReport charges(FieldKind k, const FieldState& s, const ModelParams& p);

/// Canonical evolution right-hand side (the one the steppers integrate):
///   nls      i psi_t = -psi_xx + 2 |psi|^2 psi   (and conjugate)
///   sg       phi_t = pi,  pi_t = phi'' - (m^2/beta) sin(beta phi)
///   liouville phi_t = pi, pi_t = phi'' + 4 i exp(-2 i phi)
///   atft-A2  phi_t = pi,  pi_t = phi'' - (m^2/(2 beta)) sum_k alpha_k gamma_k
///   ll       S_t = S x S_xx
std::vector<CVector> eom_rhs(FieldKind k, const FieldState& s, const ModelParams& p);

/// Literal-mode right-hand side used by the algebraic (zero-curvature)
/// checks, treating conjugate pairs as independent fields:
///   nls variant V1: psi_t = -psi,            psibar_t = +psibar
///       variant V2: psi_t = psi',            psibar_t = psibar'
///       variant V3: psi_t = -psi'' + 2 psi^2 psibar, psibar_t = psibar'' - 2 psi psibar^2
///   ll: S_t = i S x S_xx
/// Other models: identical to eom_rhs.
std::vector<CVector> literal_rhs(FieldKind k, Variant v, const FieldState& s,
                                 const ModelParams& p);

/// max-norm over the grid of Udot - V' + [U, V] (the affine Toda pair closes
/// the compatibility identity with the commutator orientation reversed, which
/// is accounted for internally).  Udot uses literal_rhs; V' is spectral.
double zero_curvature_residual(FieldKind k, Variant v, const FieldState& s,
                               const ModelParams& p, cplx lambda);

/// Path-ordered exponential of U across [-L, L], fourth-order two-point
/// Gauss-Magnus scheme with trigonometric interpolation of the fields.
/// Throws for |Re(lambda)| * 2L > 500 (overflow guard).
CMatrix monodromy_numeric(FieldKind k, const FieldState& s, const ModelParams& p,
                          cplx lambda);

enum class FieldScheme { Rk4, SplitStep, Leapfrog };

struct EvolveReport {
    FieldState state;                            // final state
    std::vector<double> times;                   // sample times
    std::vector<std::vector<cplx>> charge_series;  // per sample
    std::vector<std::vector<cplx>> trT_series;     // per sample, per probe
    std::vector<double> charge_drift;            // relative, per charge
    std::vector<double> trT_drift;               // absolute drift per probe
    bool aborted = false;
    int abort_step = -1;
    std::string abort_reason;
};

/// Time evolution with conservation monitoring.  SplitStep applies to nls,
/// Leapfrog to sg/atft-A2, Rk4 to anything.  Aborts (with diagnostics) if the
/// energy grows by more than 10x or a non-finite value appears.
EvolveReport evolve(FieldKind k, const FieldState& s0, const ModelParams& p,
                    double dt, int steps, FieldScheme scheme,
                    const std::vector<cplx>& trT_probes = {},
                    int sample_every = 0);

// ---------------------------------------------------------------------------
// Gauge transformation (ATFT family)
// ---------------------------------------------------------------------------

struct GaugeCheckReport {
    double residual;                 // max-norm versus the closed form
    std::vector<CMatrix> u_tilde;    // transformed connection on the grid
};

/// Om^{-1} U Om - Om^{-1} Om' against the closed diagonal-plus-ladder form
/// with Theta = Pi - Phi_x (sg: the combination f = pi + phi' appears).
GaugeCheckReport atft_gauge(FieldKind k, const FieldState& s, const ModelParams& p,
                            cplx lambda);

}  // namespace laxkit::fields
