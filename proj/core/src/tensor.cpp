#include "laxkit/tensor.hpp"

#include <stdexcept>
#include <vector>

namespace laxkit {

CMatrix unit_matrix(int dim, int i, int j) {
    if (i < 1 || j < 1 || i > dim || j > dim)
        throw std::out_of_range("unit_matrix: index out of range");
    CMatrix m = CMatrix::Zero(dim, dim);
    m(i - 1, j - 1) = 1.0;
    return m;
}

CMatrix tensor_product(const CMatrix& A, const CMatrix& B) {
    const Eigen::Index ra = A.rows(), ca = A.cols();
    const Eigen::Index rb = B.rows(), cb = B.cols();
    CMatrix out(ra * rb, ca * cb);
    for (Eigen::Index i = 0; i < ra; ++i)
        for (Eigen::Index j = 0; j < ca; ++j)
            out.block(i * rb, j * cb, rb, cb) = A(i, j) * B;
    return out;
}

CMatrix permutation_operator(int n) {
    if (n < 2) throw std::invalid_argument("permutation_operator: n >= 2 required");
    CMatrix p = CMatrix::Zero(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            p(i * n + k, k * n + i) = 1.0;
    return p;
}

CMatrix embed_two_leg(const CMatrix& op, int leg_a, int leg_b, int nlegs, int d) {
    if (leg_a == leg_b || leg_a < 0 || leg_b < 0 || leg_a >= nlegs || leg_b >= nlegs)
        throw std::invalid_argument("embed_two_leg: bad leg indices");
    if (op.rows() != d * d || op.cols() != d * d)
        throw std::invalid_argument("embed_two_leg: op must be d^2 x d^2");

    Eigen::Index total = 1;
    for (int k = 0; k < nlegs; ++k) total *= d;
    CMatrix out = CMatrix::Zero(total, total);

    std::vector<int> row(nlegs), col(nlegs);
    for (Eigen::Index r = 0; r < total; ++r) {
        Eigen::Index tmp = r;
        for (int k = nlegs - 1; k >= 0; --k) { row[k] = int(tmp % d); tmp /= d; }
        for (Eigen::Index c = 0; c < total; ++c) {
            tmp = c;
            for (int k = nlegs - 1; k >= 0; --k) { col[k] = int(tmp % d); tmp /= d; }
            bool spectator_ok = true;
            for (int k = 0; k < nlegs; ++k) {
                if (k == leg_a || k == leg_b) continue;
                if (row[k] != col[k]) { spectator_ok = false; break; }
            }
            if (!spectator_ok) continue;
            out(r, c) = op(row[leg_a] * d + row[leg_b], col[leg_a] * d + col[leg_b]);
        }
    }
    return out;
}

double max_abs(const CMatrix& m) {
    return m.cwiseAbs().maxCoeff();
}

}  // namespace laxkit
