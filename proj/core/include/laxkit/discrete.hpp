#pragma once

#include "laxkit/laurent.hpp"
#include "laxkit/poisson.hpp"
#include "laxkit/prng.hpp"
#include "laxkit/rmatrix.hpp"

#include <string>
#include <vector>

namespace laxkit::discrete {

enum class Kind { TodaLinear, TodaQuadratic, Dst };

Kind kind_from_string(const std::string& s);

/// Periodic chain; site indices wrap mod `sites` everywhere.
struct Model {
    Kind kind;
    int sites;
};

/// Canonical-pair layout per model (first slot is differentiated first in
/// the Poisson bracket):
///   dst            u = x,  v = X    ({x_i, X_j} = delta_ij)
///   toda-quadratic u = q,  v = p    ({q_i, p_j} = delta_ij)
///   toda-linear    u = p,  v = q    ({p_i, q_j} = delta_ij)
/// The quadratic Toda description needs the (q, p) orientation for its
/// exchange relations to close against the rational r-matrix; the physical
/// trajectories are unaffected.
PhasePoint vacuum_point(const Model& m);
PhasePoint make_dst_point(const CVector& x, const CVector& X);
PhasePoint make_toda_point(const Model& m, const CVector& q, const CVector& p);
PhasePoint random_point(const Model& m, SplitMix64& rng, double amplitude = 0.3);

/// Coordinate accessors in the physical naming (q, p) / (x, X).
CVector coord_q(const Model& m, const PhasePoint& pt);
CVector coord_p(const Model& m, const PhasePoint& pt);

// ---------------------------------------------------------------------------
// Lax matrices
// ---------------------------------------------------------------------------

/// Site-local 2x2 Lax matrix (toda-quadratic, dst), entries polynomial in
/// the spectral parameter.
LaurentMatrix site_lax_poly(const Model& m, int site, const PhasePoint& pt);
CMatrix site_lax(const Model& m, int site, const PhasePoint& pt, cplx lambda);

/// Site Lax with analytic partials w.r.t. every canonical coordinate.
MatrixObservable site_lax_observable(const Model& m, int site, const PhasePoint& pt,
                                     cplx lambda);

/// Whole-chain N x N Lax matrix of the linear Toda description.  The Laurent
/// variable is the multiplicative parameter u = e^{2 lambda}.
LaurentMatrix linear_lax_poly(const PhasePoint& pt);
CMatrix linear_lax(const PhasePoint& pt, cplx u);
MatrixObservable linear_lax_observable(const PhasePoint& pt, cplx u);

// ---------------------------------------------------------------------------
// Monodromy and transfer
// ---------------------------------------------------------------------------

/// T = L_N L_{N-1} ... L_1 (site-local kinds only).
LaurentMatrix monodromy_poly(const Model& m, const PhasePoint& pt);
CMatrix monodromy(const Model& m, const PhasePoint& pt, cplx lambda);
MatrixObservable monodromy_observable(const Model& m, const PhasePoint& pt, cplx lambda);

/// Partial product T(i,j) = L_i L_{i-1} ... L_j for i >= j; identity when
/// i == j-1 (empty product).  1-based sites.
CMatrix partial_monodromy(const Model& m, const PhasePoint& pt, int i, int j, cplx lambda);

struct TransferFunction {
    LaurentPoly poly;         // trace of the monodromy
    LaurentSeries log_coeffs; // log_series(poly)
};

TransferFunction transfer(const Model& m, const PhasePoint& pt, int k_max);

/// tr T(lambda) with gradients (site-local kinds).
Observable transfer_observable(const Model& m, const PhasePoint& pt, cplx lambda);

/// tr L^n(u) with gradients (toda-linear).
Observable powertrace_observable(const PhasePoint& pt, int n, cplx u);

// ---------------------------------------------------------------------------
// Charges
// ---------------------------------------------------------------------------

struct ChargeReport {
    std::vector<cplx> charges;
    std::string source;           // "closed-form" | "series-extracted"
    std::vector<double> signs;    // calibration sign s_k
    std::vector<cplx> offsets;    // calibration offset per charge
};

/// Exact closed-form charges with periodic index wrap.  dst supports
/// count <= 3, the Toda descriptions count <= 2.
ChargeReport closed_form_charges(const Model& m, const PhasePoint& pt, int count);

/// Closed-form charge I_k with analytic gradients.
Observable charge_observable(const Model& m, const PhasePoint& pt, int k);

/// Charges from the 1/lambda expansion of ln t(lambda), calibrated by a
/// frozen per-(model,k) sign and a vacuum-anchored offset.  Requires
/// count <= sites for dst (beyond that the periodic wrap term is
/// field-dependent and no constant calibration exists).
ChargeReport extract_charges(const Model& m, const PhasePoint& pt, int count);

/// Charges from tr L and tr L^2 of the linear description (toda-linear).
ChargeReport powertrace_charges(const PhasePoint& pt, int count);

// ---------------------------------------------------------------------------
// Flows and Lax time components
// ---------------------------------------------------------------------------

/// Hamiltonian flow of the generator charge: dst uses I_k (k = 1,2,3),
/// toda-quadratic uses I_2 (whose flow gives qdot_j = p_j).
PhaseVelocity eom_rhs(const Model& m, int generator_index, const PhasePoint& pt);

/// Printed closed-form time components of the Lax pairs, periodic wrap:
/// dst j = 1,2,3; toda-quadratic j = 2.
CMatrix lax_time_component(const Model& m, int generator_index, int site, cplx mu,
                           const PhasePoint& pt);

/// Numerically evaluate A_n(lambda, mu) = t^{-1}(lambda)/(lambda - mu) *
/// T(n-1,1;lambda) T(N,n;lambda) on a circle of `radius` in lambda and fit
/// descending powers 1/lambda^j, j = 1..order.  Coefficient j reproduces
/// lax_time_component(m, j, site, mu, pt).
std::vector<CMatrix> generic_A_fit(const Model& m, int site, cplx mu,
                                   const PhasePoint& pt, int order,
                                   int nsamples = 32, double radius = 6.0);

// ---------------------------------------------------------------------------
// Residuals
// ---------------------------------------------------------------------------

/// max over sites of || Ldot_n - (A_{n+1} L_n - L_n A_n) || at spectral mu.
double zero_curvature_residual(const Model& m, int generator_index, cplx mu,
                               const PhasePoint& pt);

/// Site-level Sklyanin relation with the rational r:
/// {L_n(l) (x) L_n(mu)} - [r(l - mu), L_n(l) (x) L_n(mu)].
double sklyanin_residual(const Model& m, const PhasePoint& pt, cplx lambda, cplx mu);

/// Same relation for the full monodromy matrix.
double sklyanin_monodromy_residual(const Model& m, const PhasePoint& pt,
                                   cplx lambda, cplx mu);

/// Linear (toda-linear) bracket: {L1(l), L2(mu)} - [r, L1 + L2] with the
/// exchange-type r of rmatrix.hpp, u_i = e^{2 lambda_i}.
double linear_bracket_residual(const PhasePoint& pt, cplx lambda, cplx mu);

/// |{f, g}| for two transfer-like observables; overloads cover the charge,
/// transfer and power-trace cases.
double involution_residual(const Observable& f, const Observable& g);

/// A(lambda, mu) = n tr_a(L_a^{n-1}(lambda) r_ab(lambda - mu)), n <= 2.
CMatrix linear_A(const PhasePoint& pt, int n, cplx lambda, cplx mu);

/// || {tr L^n(lambda), L(mu)} - [A, L(mu)] ||.
double linear_A_commutator_residual(const PhasePoint& pt, int n, cplx lambda, cplx mu);

// ---------------------------------------------------------------------------
// Time integration
// ---------------------------------------------------------------------------

enum class Scheme { Leapfrog, Rk4 };

struct DriftReport {
    std::vector<double> rel_drift;  // per charge: max_t |I(t)-I(0)| / (|I(0)|+1)
    bool nan_detected = false;
    int nan_step = -1;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<PhasePoint> samples;
    DriftReport drift;
};

/// Integrate the generator flow.  Leapfrog requires toda-quadratic with real
/// data (separable Hamiltonian); rk4 is general.  Charge drift is monitored
/// every step for the first `charge_count` charges.
Trajectory integrate(const Model& m, int generator_index, const PhasePoint& p0,
                     double dt, int steps, Scheme scheme, int charge_count,
                     int sample_every = 0);

}  // namespace laxkit::discrete
