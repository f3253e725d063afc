#pragma once

#include "laxkit/tensor.hpp"

#include <vector>

namespace laxkit {

/// Finite Laurent polynomial in one spectral variable, dense over a
/// contiguous power window.  The zero polynomial has an empty window.
class LaurentPoly {
public:
    LaurentPoly() = default;
    static LaurentPoly constant(cplx c);
    static LaurentPoly monomial(cplx c, int power);

    bool is_zero() const { return coeff_.empty(); }
    int min_power() const { return min_power_; }
    int max_power() const { return min_power_ + int(coeff_.size()) - 1; }
    cplx coeff(int power) const;
    void set_coeff(int power, cplx c);

    LaurentPoly& operator+=(const LaurentPoly& o);
    LaurentPoly& operator-=(const LaurentPoly& o);
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    friend LaurentPoly operator*(cplx s, LaurentPoly p);

    /// Evaluate at z; throws if z == 0 and negative powers are present.
    cplx eval(cplx z) const;

    void trim(double eps = 0.0);

private:
    int min_power_ = 0;
    std::vector<cplx> coeff_;  // coeff_[k] multiplies z^(min_power_+k)
};

/// Truncated expansion in descending powers of the spectral variable:
/// coefficients()[k] multiplies z^(leading_power() - k).
class LaurentSeries {
public:
    LaurentSeries() = default;
    LaurentSeries(int leading_power, std::vector<cplx> coeffs)
        : leading_power_(leading_power), coeff_(std::move(coeffs)) {}

    int leading_power() const { return leading_power_; }
    int truncation_order() const { return int(coeff_.size()); }
    const std::vector<cplx>& coefficients() const { return coeff_; }

    /// Coefficient of z^power (0 if outside the retained window).
    cplx coeff_of_power(int power) const;

private:
    int leading_power_ = 0;
    std::vector<cplx> coeff_;
};

/// Expansion of ln(p(z) / (c_N z^N)) in powers of 1/z, truncated after
/// `truncation_order` coefficients (orders z^-1 .. z^-truncation_order).
/// c_N z^N is the dominant term of p.  Throws on the zero polynomial.
LaurentSeries log_series(const LaurentPoly& p, int truncation_order);

/// exp of a series with leading power <= -1; returns coefficients of
/// z^0 .. z^-truncation (the z^0 coefficient is 1).
LaurentSeries exp_series(const LaurentSeries& s, int truncation_order);

/// Square matrix with Laurent-polynomial entries.
class LaurentMatrix {
public:
    LaurentMatrix() = default;
    explicit LaurentMatrix(int dim) : dim_(dim), entries_(dim * dim) {}
    static LaurentMatrix identity(int dim);

    int dim() const { return dim_; }
    LaurentPoly& operator()(int i, int j) { return entries_[i * dim_ + j]; }
    const LaurentPoly& operator()(int i, int j) const { return entries_[i * dim_ + j]; }

    friend LaurentMatrix operator*(const LaurentMatrix& a, const LaurentMatrix& b);
    friend LaurentMatrix operator+(const LaurentMatrix& a, const LaurentMatrix& b);
    friend LaurentMatrix operator-(const LaurentMatrix& a, const LaurentMatrix& b);

    LaurentPoly trace() const;
    CMatrix eval(cplx z) const;

private:
    int dim_ = 0;
    std::vector<LaurentPoly> entries_;
};

}  // namespace laxkit
