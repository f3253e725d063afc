#include "laxkit/laurent.hpp"

#include <cmath>
#include <stdexcept>

namespace laxkit {

LaurentPoly LaurentPoly::constant(cplx c) { return monomial(c, 0); }

LaurentPoly LaurentPoly::monomial(cplx c, int power) {
    LaurentPoly p;
    if (c != 0.0) {
        p.min_power_ = power;
        p.coeff_ = {c};
    }
    return p;
}

cplx LaurentPoly::coeff(int power) const {
    int k = power - min_power_;
    if (k < 0 || k >= int(coeff_.size())) return 0.0;
    return coeff_[k];
}

void LaurentPoly::set_coeff(int power, cplx c) {
    if (coeff_.empty()) {
        if (c == 0.0) return;
        min_power_ = power;
        coeff_ = {c};
        return;
    }
    if (power < min_power_) {
        coeff_.insert(coeff_.begin(), size_t(min_power_ - power), cplx(0.0));
        min_power_ = power;
    } else if (power > max_power()) {
        coeff_.resize(size_t(power - min_power_ + 1), cplx(0.0));
    }
    coeff_[size_t(power - min_power_)] = c;
    trim();
}

void LaurentPoly::trim(double eps) {
    auto small = [eps](cplx c) { return std::abs(c) <= eps; };
    size_t lo = 0, hi = coeff_.size();
    while (hi > lo && small(coeff_[hi - 1])) --hi;
    while (lo < hi && small(coeff_[lo])) ++lo;
    if (lo == hi) {
        coeff_.clear();
        min_power_ = 0;
        return;
    }
    if (lo > 0 || hi < coeff_.size()) {
        coeff_ = std::vector<cplx>(coeff_.begin() + long(lo), coeff_.begin() + long(hi));
        min_power_ += int(lo);
    }
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) { *this = o; return *this; }
    int lo = std::min(min_power_, o.min_power_);
    int hi = std::max(max_power(), o.max_power());
    std::vector<cplx> out(size_t(hi - lo + 1), cplx(0.0));
    for (int p = min_power_; p <= max_power(); ++p) out[size_t(p - lo)] += coeff(p);
    for (int p = o.min_power_; p <= o.max_power(); ++p) out[size_t(p - lo)] += o.coeff(p);
    min_power_ = lo;
    coeff_ = std::move(out);
    trim();
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
    return *this += cplx(-1.0) * o;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.is_zero() || b.is_zero()) return LaurentPoly{};
    LaurentPoly out;
    out.min_power_ = a.min_power_ + b.min_power_;
    out.coeff_.assign(a.coeff_.size() + b.coeff_.size() - 1, cplx(0.0));
    for (size_t i = 0; i < a.coeff_.size(); ++i)
        for (size_t j = 0; j < b.coeff_.size(); ++j)
            out.coeff_[i + j] += a.coeff_[i] * b.coeff_[j];
    out.trim();
    return out;
}

LaurentPoly operator*(cplx s, LaurentPoly p) {
    for (auto& c : p.coeff_) c *= s;
    p.trim();
    return p;
}

cplx LaurentPoly::eval(cplx z) const {
    if (is_zero()) return 0.0;
    if (z == 0.0 && min_power_ < 0)
        throw std::domain_error("LaurentPoly::eval: z = 0 with negative powers");
    // Horner over the window, then shift by z^min_power.
    cplx acc = 0.0;
    for (size_t k = coeff_.size(); k-- > 0;) acc = acc * z + coeff_[k];
    return acc * std::pow(z, min_power_);
}

cplx LaurentSeries::coeff_of_power(int power) const {
    int k = leading_power_ - power;
    if (k < 0 || k >= int(coeff_.size())) return 0.0;
    return coeff_[size_t(k)];
}

LaurentSeries log_series(const LaurentPoly& p, int truncation_order) {
    if (p.is_zero()) throw std::domain_error("log_series: zero polynomial");
    if (truncation_order < 1) throw std::invalid_argument("log_series: order >= 1");
    const int n = p.max_power();
    const cplx cn = p.coeff(n);
    if (std::abs(cn) == 0.0)
        throw std::domain_error("log_series: ambiguous dominant term");
    // b_m = coeff(n-m)/c_n so that p/(c_n z^n) = 1 + sum b_m z^-m.
    const int K = truncation_order;
    std::vector<cplx> b(size_t(K + 1), cplx(0.0));
    for (int m = 1; m <= K; ++m) b[size_t(m)] = p.coeff(n - m) / cn;
    // k c_k = k b_k - sum_{m=1}^{k-1} m c_m b_{k-m}
    std::vector<cplx> c(size_t(K + 1), cplx(0.0));
    for (int k = 1; k <= K; ++k) {
        cplx acc = double(k) * b[size_t(k)];
        for (int m = 1; m < k; ++m) acc -= double(m) * c[size_t(m)] * b[size_t(k - m)];
        c[size_t(k)] = acc / double(k);
    }
    return LaurentSeries(-1, std::vector<cplx>(c.begin() + 1, c.end()));
}

LaurentSeries exp_series(const LaurentSeries& s, int truncation_order) {
    if (s.leading_power() > -1)
        throw std::invalid_argument("exp_series: series must start at power -1 or lower");
    const int K = truncation_order;
    std::vector<cplx> a(size_t(K + 1), cplx(0.0));
    for (int m = 1; m <= K; ++m) a[size_t(m)] = s.coeff_of_power(-m);
    std::vector<cplx> e(size_t(K + 1), cplx(0.0));
    e[0] = 1.0;
    for (int k = 1; k <= K; ++k) {
        cplx acc = 0.0;
        for (int m = 1; m <= k; ++m) acc += double(m) * a[size_t(m)] * e[size_t(k - m)];
        e[size_t(k)] = acc / double(k);
    }
    return LaurentSeries(0, std::move(e));
}

LaurentMatrix LaurentMatrix::identity(int dim) {
    LaurentMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = LaurentPoly::constant(1.0);
    return m;
}

LaurentMatrix operator*(const LaurentMatrix& a, const LaurentMatrix& b) {
    if (a.dim_ != b.dim_) throw std::invalid_argument("LaurentMatrix: dim mismatch");
    LaurentMatrix out(a.dim_);
    for (int i = 0; i < a.dim_; ++i)
        for (int j = 0; j < a.dim_; ++j) {
            LaurentPoly acc;
            for (int k = 0; k < a.dim_; ++k) acc += a(i, k) * b(k, j);
            out(i, j) = acc;
        }
    return out;
}

LaurentMatrix operator+(const LaurentMatrix& a, const LaurentMatrix& b) {
    if (a.dim_ != b.dim_) throw std::invalid_argument("LaurentMatrix: dim mismatch");
    LaurentMatrix out = a;
    for (int i = 0; i < a.dim_ * a.dim_; ++i) out.entries_[size_t(i)] += b.entries_[size_t(i)];
    return out;
}

LaurentMatrix operator-(const LaurentMatrix& a, const LaurentMatrix& b) {
    if (a.dim_ != b.dim_) throw std::invalid_argument("LaurentMatrix: dim mismatch");
    LaurentMatrix out = a;
    for (int i = 0; i < a.dim_ * a.dim_; ++i) out.entries_[size_t(i)] -= b.entries_[size_t(i)];
    return out;
}

LaurentPoly LaurentMatrix::trace() const {
    LaurentPoly t;
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

CMatrix LaurentMatrix::eval(cplx z) const {
    CMatrix m(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j).eval(z);
    return m;
}

}  // namespace laxkit
