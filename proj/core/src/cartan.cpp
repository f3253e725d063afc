#include "laxkit/cartan.hpp"

#include <cmath>
#include <stdexcept>

namespace laxkit {

CMatrix CartanData::big_E_plus() const {
    CMatrix e = CMatrix::Zero(dim(), dim());
    for (const auto& g : E_plus) e += g;
    return e;
}

CMatrix CartanData::big_E_minus() const {
    CMatrix e = CMatrix::Zero(dim(), dim());
    for (const auto& g : E_minus) e += g;
    return e;
}

CMatrix CartanData::dot_H(const Eigen::VectorXcd& v) const {
    CMatrix m = CMatrix::Zero(dim(), dim());
    for (int i = 0; i < rank; ++i) m += v[i] * H[size_t(i)];
    return m;
}

CartanData cartan_data(int n) {
    if (n < 1 || n > 2) throw std::invalid_argument("cartan_data: rank must be 1 or 2");
    CartanData cd;
    cd.rank = n;
    const int d = n + 1;

    // Simple roots: component i-1 is -sqrt((i-1)/(2i)), component i is
    // sqrt((i+1)/(2i)), unit norm; affine root closes the sum to zero.
    cd.simple_roots.resize(size_t(d));
    for (int i = 1; i <= n; ++i) {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
        if (i >= 2) a[i - 2] = -std::sqrt(double(i - 1) / double(2 * i));
        a[i - 1] = std::sqrt(double(i + 1) / double(2 * i));
        cd.simple_roots[size_t(i - 1)] = a;
    }
    Eigen::VectorXd affine = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) affine -= cd.simple_roots[size_t(i)];
    cd.simple_roots[size_t(n)] = affine;

    // Fundamental weights from alpha_j . mu_k = delta_jk / 2.
    Eigen::MatrixXd A(n, n);
    for (int j = 0; j < n; ++j) A.row(j) = cd.simple_roots[size_t(j)].transpose();
    Eigen::MatrixXd rhs = 0.5 * Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd mu = A.fullPivLu().solve(rhs);  // column k = mu_k
    cd.fundamental_weights.resize(size_t(n));
    for (int k = 0; k < n; ++k) cd.fundamental_weights[size_t(k)] = mu.col(k);

    // Affine Cartan matrix.
    cd.cartan_matrix = Eigen::MatrixXd::Zero(d, d);
    for (int i = 1; i <= d; ++i)
        for (int j = 1; j <= d; ++j) {
            double a = 2.0 * (i == j);
            if (d == 2) {
                if (i != j) a -= 2.0;  // sl2-hat: off-diagonals are -2
            } else {
                if (i == j + 1 || i == j - 1) a -= 1.0;
                if (i == 1 && j == d) a -= 1.0;
                if (i == d && j == 1) a -= 1.0;
            }
            cd.cartan_matrix(i - 1, j - 1) = a;
        }

    // Defining representation: H_i = sum_j mu_j^i (e_jj - e_{j+1,j+1}),
    // E_{alpha_i} = e_{i,i+1}, E_{alpha_{n+1}} = -e_{n+1,1}.
    cd.H.resize(size_t(n));
    for (int i = 0; i < n; ++i) {
        CMatrix h = CMatrix::Zero(d, d);
        for (int j = 0; j < n; ++j) {
            const double w = cd.fundamental_weights[size_t(j)][i];
            h(j, j) += w;
            h(j + 1, j + 1) -= w;
        }
        cd.H[size_t(i)] = h;
    }
    cd.E_plus.resize(size_t(d));
    cd.E_minus.resize(size_t(d));
    for (int i = 0; i < n; ++i) {
        cd.E_plus[size_t(i)] = unit_matrix(d, i + 1, i + 2);
        cd.E_minus[size_t(i)] = unit_matrix(d, i + 2, i + 1);
    }
    cd.E_plus[size_t(n)] = -unit_matrix(d, d, 1);
    cd.E_minus[size_t(n)] = -unit_matrix(d, 1, d);
    return cd;
}

namespace {

CMatrix comm(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

double binom(int m, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(m - k + i) / double(i);
    return r;
}

}  // namespace

double CartanResiduals::max() const {
    double m = root_norms;
    for (double x : {weight_duality, root_sum, cartan_weyl, chevalley, serre})
        m = std::max(m, x);
    return m;
}

CartanResiduals cartan_residuals(const CartanData& cd) {
    CartanResiduals res{0, 0, 0, 0, 0, 0};
    const int n = cd.rank, d = cd.dim();

    for (int i = 0; i < d; ++i)
        res.root_norms = std::max(res.root_norms,
            std::abs(cd.simple_roots[size_t(i)].squaredNorm() - 1.0));

    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const double want = (j == k) ? 0.5 : 0.0;
            res.weight_duality = std::max(res.weight_duality,
                std::abs(cd.simple_roots[size_t(j)].dot(cd.fundamental_weights[size_t(k)]) - want));
        }

    Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < d; ++i) s += cd.simple_roots[size_t(i)];
    res.root_sum = s.norm();

    // [H_k, E_{+-a}] = +- alpha_a^k E_{+-a};  [E_a, E_-a] = 2 alpha_a . H.
    for (int a = 0; a < d; ++a) {
        for (int k = 0; k < n; ++k) {
            const double ak = cd.simple_roots[size_t(a)][k];
            res.cartan_weyl = std::max(res.cartan_weyl,
                max_abs(CMatrix(comm(cd.H[size_t(k)], cd.E_plus[size_t(a)]) - ak * cd.E_plus[size_t(a)])));
            res.cartan_weyl = std::max(res.cartan_weyl,
                max_abs(CMatrix(comm(cd.H[size_t(k)], cd.E_minus[size_t(a)]) + ak * cd.E_minus[size_t(a)])));
        }
        Eigen::VectorXcd alpha = cd.simple_roots[size_t(a)].cast<cplx>();
        res.cartan_weyl = std::max(res.cartan_weyl,
            max_abs(CMatrix(comm(cd.E_plus[size_t(a)], cd.E_minus[size_t(a)]) - 2.0 * cd.dot_H(alpha))));
    }

    // Chevalley relations with h_i = 2 alpha_i . H.
    std::vector<CMatrix> h;
    h.resize(size_t(d));
    for (int i = 0; i < d; ++i)
        h[size_t(i)] = 2.0 * cd.dot_H(cd.simple_roots[size_t(i)].cast<cplx>());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const double aij = cd.cartan_matrix(i, j);
            res.chevalley = std::max(res.chevalley,
                max_abs(CMatrix(comm(h[size_t(i)], h[size_t(j)]))));
            res.chevalley = std::max(res.chevalley,
                max_abs(CMatrix(comm(h[size_t(i)], cd.E_plus[size_t(j)]) - aij * cd.E_plus[size_t(j)])));
            res.chevalley = std::max(res.chevalley,
                max_abs(CMatrix(comm(h[size_t(i)], cd.E_minus[size_t(j)]) + aij * cd.E_minus[size_t(j)])));
            if (i != j)
                res.chevalley = std::max(res.chevalley,
                    max_abs(CMatrix(comm(cd.E_plus[size_t(i)], cd.E_minus[size_t(j)]))));
        }

    // Serre relations at q = 1 for the non-affine pairs (valid in the
    // defining representation for n <= 2):
    // sum_{k=0}^{1-a_ij} (-1)^k C(1-a_ij, k) x_i^{1-a_ij-k} x_j x_i^k = 0.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const int m = 1 - int(std::lround(cd.cartan_matrix(i, j)));
            for (const auto& fam : {cd.E_plus, cd.E_minus}) {
                CMatrix acc = CMatrix::Zero(d, d);
                for (int k = 0; k <= m; ++k) {
                    CMatrix left = CMatrix::Identity(d, d);
                    for (int t = 0; t < m - k; ++t) left *= fam[size_t(i)];
                    CMatrix right = CMatrix::Identity(d, d);
                    for (int t = 0; t < k; ++t) right *= fam[size_t(i)];
                    acc += ((k % 2) ? -1.0 : 1.0) * binom(m, k) * left * fam[size_t(j)] * right;
                }
                res.serre = std::max(res.serre, max_abs(acc));
            }
        }
    return res;
}

}  // namespace laxkit
