#pragma once

#include "laxkit/fields.hpp"

namespace laxkit::fields {

/// Result of checking the factorization T = (1 + W) e^Z (1 + W)^{-1} order by
/// order: the tabulated closed-form W matrices are substituted into the recursion and the
/// diagonal Z-densities are integrated into charges.
struct WzReport {
    std::vector<double> recursion_residuals;  // one per checked order
    std::vector<cplx> charges_from_z;         // integrated densities
    std::vector<cplx> charges_direct;         // matching quadrature values
    std::vector<cplx> ratios;                 // measured proportionality constants

    double max_recursion_residual() const;
    double max_charge_mismatch() const;
};

/// Supported: nls (order <= 3), sg (order <= 2), atft-A2 (order <= 2).
/// For sg, charges_from_z = {I(+1), I(-1)} and ratios = {(I+ + I-)/H, (I+ - I-)/P};
/// for atft-A2, charges_from_z = {H1, P1} assembled from the two Z33 branches.
WzReport wz_check(FieldKind k, const FieldState& s, const ModelParams& p, int order);

}  // namespace laxkit::fields
