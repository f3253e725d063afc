#pragma once

#include "laxkit/tensor.hpp"

#include <vector>

namespace laxkit {

/// Root data and defining-representation generators for the affine A_n^(1)
/// family, n <= 2.  Simple roots are unit-normalized, fundamental weights
/// obey alpha_j . mu_k = delta_jk / 2, and the affine root closes the sum
/// sum_{i=1}^{n+1} alpha_i = 0.
struct CartanData {
    int rank = 1;                                   // n
    Eigen::MatrixXd cartan_matrix;                  // (n+1) x (n+1) affine matrix
    std::vector<Eigen::VectorXd> simple_roots;      // n+1 vectors of dim n
    std::vector<Eigen::VectorXd> fundamental_weights;  // n vectors of dim n
    std::vector<CMatrix> H;                         // n diagonal generators
    std::vector<CMatrix> E_plus;                    // n+1 raising generators
    std::vector<CMatrix> E_minus;                   // n+1 lowering generators

    int dim() const { return rank + 1; }
    /// sum_i E_{alpha_i} over all n+1 roots.
    CMatrix big_E_plus() const;
    CMatrix big_E_minus() const;
    /// v . H for an n-component coefficient vector.
    CMatrix dot_H(const Eigen::VectorXcd& v) const;
};

CartanData cartan_data(int n);

/// Residual diagnostics used by tests and the CLI `verify cartan` check.
struct CartanResiduals {
    double root_norms;       // | alpha_i . alpha_i - 1 |
    double weight_duality;   // | alpha_j . mu_k - delta_jk/2 |
    double root_sum;         // | sum alpha_i |
    double cartan_weyl;      // [H, E_a] = +/- alpha_a E_a and [E_a, E_-a] = 2 alpha_a . H
    double chevalley;        // [h_i, e_j] = a_ij e_j etc. with h_i = 2 alpha_i . H
    double serre;            // quantized Serre relations at q = 1, n <= 2

    double max() const;
};

CartanResiduals cartan_residuals(const CartanData& cd);

}  // namespace laxkit
