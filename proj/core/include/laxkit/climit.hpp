#pragma once

#include "laxkit/discrete.hpp"
#include "laxkit/fields.hpp"

#include <functional>

namespace laxkit::climit {

/// Smooth periodic profile for the lattice fields on [-L, L].
struct Profile {
    std::function<cplx(double)> x_of;  // maps to psibar under the continuum match
    std::function<cplx(double)> X_of;  // maps to -psi
};

struct LimitSchedule {
    std::vector<double> deltas;  // strictly decreasing; 2L/delta integer
    double half_length = 1.0;
    Profile profile;
};

LimitSchedule default_schedule(Profile profile, double half_length = 1.0);

/// Rescaled lattice data x_j = delta * x(-L + j delta) (same for X); the
/// spacing enters the spectral parameter as lambda -> delta lambda.
PhasePoint discretize(const Profile& profile, double delta, double half_length);

struct ChargeLimitReport {
    std::vector<double> deltas;
    std::vector<cplx> scaled;      // (I_k - I_k^vac) * (-1/delta^k), combined
    cplx continuum = 0.0;          // quadrature target
    std::vector<double> errors;
    double fitted_order = 0.0;     // Richardson estimate
};

/// k = 1: target integral x X;  k = 2: integral x' X;
/// k = 3: combination sum_m combo[m-1] * scaled_m with default (0,0,1),
/// target integral (x'' X + (x X)^2).  Requires >= 3 deltas for the fit.
ChargeLimitReport charge_limit(const LimitSchedule& schedule, int k,
                               const std::vector<cplx>& combo = {});

struct LaxLimitReport {
    std::vector<double> deltas;
    std::vector<double> expansion_ratio;  // max_j |e^{-d l/2} L_j - 1 - d U(x_j)| / d^2
    std::vector<double> monodromy_error;  // normalized lattice product vs path-ordered exp
    std::vector<double> time_component_error;  // rescaled discrete A vs continuum V
};

LaxLimitReport lax_limit_check(const LimitSchedule& schedule, cplx lambda);

}  // namespace laxkit::climit
