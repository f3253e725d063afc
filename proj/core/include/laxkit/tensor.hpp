#pragma once

#include <Eigen/Dense>
#include <complex>

namespace laxkit {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr cplx kI{0.0, 1.0};

/// Unit matrix e_ij (1-based indices): (e_ij)_kl = delta_ik delta_jl.
CMatrix unit_matrix(int dim, int i, int j);

/// Kronecker product, row-major convention:
/// (A (x) B)[(i-1)*dimB + k, (j-1)*dimB + l] = A(i,j) * B(k,l).
/// All tensor-leg index formulas in this library derive from this layout.
CMatrix tensor_product(const CMatrix& A, const CMatrix& B);

/// Permutation operator P on C^n (x) C^n: P (a (x) b) = b (x) a, P^2 = 1.
CMatrix permutation_operator(int n);

/// Embed an operator acting on legs (a, b) of a `nlegs`-fold tensor product
/// of C^d.  `op` must be d^2 x d^2 in the two-leg convention above; legs are
/// 0-based and a != b.
CMatrix embed_two_leg(const CMatrix& op, int leg_a, int leg_b, int nlegs, int d);

/// Entrywise max modulus.
double max_abs(const CMatrix& m);

}  // namespace laxkit
