#include "laxkit/poisson.hpp"

#include <cmath>
#include <stdexcept>

namespace laxkit {

cplx bracket(const Observable& f, const Observable& g) {
    if (f.grad_u.size() != g.grad_u.size())
        throw std::invalid_argument("bracket: mismatched phase spaces");
    cplx acc = 0.0;
    for (Eigen::Index i = 0; i < f.grad_u.size(); ++i)
        acc += f.grad_u[i] * g.grad_v[i] - f.grad_v[i] * g.grad_u[i];
    return acc;
}

Jet2::Jet2(int n, cplx value)
    : n_(n), value_(value), grad_(CVector::Zero(2 * n)), hess_(CMatrix::Zero(2 * n, 2 * n)) {}

Jet2 Jet2::coordinate_u(int n, int i, const PhasePoint& pt) {
    Jet2 j(n, pt.u[i]);
    j.grad_[i] = 1.0;
    return j;
}

Jet2 Jet2::coordinate_v(int n, int i, const PhasePoint& pt) {
    Jet2 j(n, pt.v[i]);
    j.grad_[n + i] = 1.0;
    return j;
}

Jet2 Jet2::operator+(const Jet2& o) const {
    Jet2 r(n_, value_ + o.value_);
    r.grad_ = grad_ + o.grad_;
    r.hess_ = hess_ + o.hess_;
    return r;
}

Jet2 Jet2::operator-(const Jet2& o) const {
    Jet2 r(n_, value_ - o.value_);
    r.grad_ = grad_ - o.grad_;
    r.hess_ = hess_ - o.hess_;
    return r;
}

Jet2 Jet2::operator*(const Jet2& o) const {
    Jet2 r(n_, value_ * o.value_);
    r.grad_ = o.value_ * grad_ + value_ * o.grad_;
    r.hess_ = o.value_ * hess_ + value_ * o.hess_
            + grad_ * o.grad_.transpose() + o.grad_ * grad_.transpose();
    return r;
}

Jet2 Jet2::scaled(cplx s) const {
    Jet2 r(n_, s * value_);
    r.grad_ = s * grad_;
    r.hess_ = s * hess_;
    return r;
}

Jet2 Jet2::exp() const {
    const cplx e = std::exp(value_);
    Jet2 r(n_, e);
    r.grad_ = e * grad_;
    r.hess_ = e * (hess_ + grad_ * grad_.transpose());
    return r;
}

Jet2 Jet2::pow(int k) const {
    if (k < 0) throw std::invalid_argument("Jet2::pow: negative power");
    Jet2 r(n_, 1.0);
    for (int m = 0; m < k; ++m) r = r * (*this);
    return r;
}

Observable Jet2::observable() const {
    Observable o;
    o.value = value_;
    o.grad_u = grad_.head(n_);
    o.grad_v = grad_.tail(n_);
    return o;
}

Observable bracket_jet(const Jet2& f, const Jet2& g) {
    const int n = f.pairs();
    if (n != g.pairs()) throw std::invalid_argument("bracket_jet: mismatched phase spaces");
    Observable out;
    out.grad_u = CVector::Zero(n);
    out.grad_v = CVector::Zero(n);
    cplx val = 0.0;
    CVector grad = CVector::Zero(2 * n);
    for (int i = 0; i < n; ++i) {
        const int ui = i, vi = n + i;
        val += f.grad()[ui] * g.grad()[vi] - f.grad()[vi] * g.grad()[ui];
        for (int k = 0; k < 2 * n; ++k) {
            grad[k] += f.hess()(ui, k) * g.grad()[vi] + f.grad()[ui] * g.hess()(vi, k)
                     - f.hess()(vi, k) * g.grad()[ui] - f.grad()[vi] * g.hess()(ui, k);
        }
    }
    out.value = val;
    out.grad_u = grad.head(n);
    out.grad_v = grad.tail(n);
    return out;
}

double jacobi_residual(const Jet2& f, const Jet2& g, const Jet2& h) {
    const Observable gh = bracket_jet(g, h);
    const Observable hf = bracket_jet(h, f);
    const Observable fg = bracket_jet(f, g);
    const cplx total = bracket(f.observable(), gh)
                     + bracket(g.observable(), hf)
                     + bracket(h.observable(), fg);
    return std::abs(total);
}

CMatrix matrix_bracket(const MatrixObservable& m1, const MatrixObservable& m2) {
    if (m1.pairs() != m2.pairs())
        throw std::invalid_argument("matrix_bracket: mismatched phase spaces");
    const int d1 = m1.dim(), d2 = m2.dim();
    CMatrix out = CMatrix::Zero(d1 * d2, d1 * d2);
    for (int m = 0; m < m1.pairs(); ++m) {
        const CMatrix& a_u = m1.grad_u[size_t(m)];
        const CMatrix& a_v = m1.grad_v[size_t(m)];
        const CMatrix& b_u = m2.grad_u[size_t(m)];
        const CMatrix& b_v = m2.grad_v[size_t(m)];
        out += tensor_product(a_u, b_v) - tensor_product(a_v, b_u);
    }
    return out;
}

PhaseVelocity flow_rhs(const Observable& H) {
    PhaseVelocity vel;
    vel.du = -H.grad_v;
    vel.dv = H.grad_u;
    return vel;
}

}  // namespace laxkit
