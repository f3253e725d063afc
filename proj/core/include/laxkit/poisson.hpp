#pragma once

#include "laxkit/tensor.hpp"

#include <string>
#include <vector>

namespace laxkit {

/// Ordered canonical pairs (u_i, v_i) with {u_i, v_j} = delta_ij.
/// The orientation tag names the pair, e.g. "(p,q)" or "(x,X)" or "(q,p)";
/// it is bookkeeping only -- the first slot is always differentiated first.
struct PhasePoint {
    CVector u, v;
    std::string orientation;

    int pairs() const { return int(u.size()); }
};

/// Value of a function on phase space together with its analytic partials.
struct Observable {
    cplx value{};
    CVector grad_u, grad_v;
};

/// {f, g} = sum_i (df/du_i dg/dv_i - df/dv_i dg/du_i).
/// No conjugation: complex coordinates are independent.
cplx bracket(const Observable& f, const Observable& g);

/// Second-order jet over the 2n coordinates [u_0..u_{n-1}, v_0..v_{n-1}].
/// Supports the polynomial-and-exponential observable algebra needed for
/// nested brackets.
class Jet2 {
public:
    Jet2() = default;
    Jet2(int n, cplx value);

    static Jet2 coordinate_u(int n, int i, const PhasePoint& pt);
    static Jet2 coordinate_v(int n, int i, const PhasePoint& pt);

    int pairs() const { return n_; }
    cplx value() const { return value_; }
    const CVector& grad() const { return grad_; }
    const CMatrix& hess() const { return hess_; }

    Jet2 operator+(const Jet2& o) const;
    Jet2 operator-(const Jet2& o) const;
    Jet2 operator*(const Jet2& o) const;
    Jet2 scaled(cplx s) const;
    Jet2 exp() const;
    Jet2 pow(int k) const;

    Observable observable() const;

private:
    int n_ = 0;
    cplx value_{};
    CVector grad_;
    CMatrix hess_;
};

/// {f, g} carrying first derivatives, so it can enter another bracket.
Observable bracket_jet(const Jet2& f, const Jet2& g);

/// |{f,{g,h}} + {g,{h,f}} + {h,{f,g}}|.
double jacobi_residual(const Jet2& f, const Jet2& g, const Jet2& h);

/// Matrix of observables sharing one phase space: value matrix plus one
/// gradient matrix per coordinate.
struct MatrixObservable {
    CMatrix value;
    std::vector<CMatrix> grad_u, grad_v;  // one entry per canonical pair

    int dim() const { return int(value.rows()); }
    int pairs() const { return int(grad_u.size()); }
};

/// Entry ((i,j),(k,l)) = bracket(M1_ij, M2_kl), laid out with the row-major
/// Kronecker convention (row = i*d2 + k, col = j*d2 + l).
CMatrix matrix_bracket(const MatrixObservable& m1, const MatrixObservable& m2);

struct PhaseVelocity {
    CVector du, dv;
};

/// Hamiltonian flow of H under the bracket above:
/// du_i/dt = {H, u_i} = -dH/dv_i,  dv_i/dt = {H, v_i} = +dH/du_i.
PhaseVelocity flow_rhs(const Observable& H);

}  // namespace laxkit
