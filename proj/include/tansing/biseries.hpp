// Truncated bivariate power series, truncated by total degree.
//
// A BiSeries<F> of order N stores g_{i,j} for i + j <= N and represents
// sum g_{i,j} x^i y^j + O(total degree N+1). Total-degree truncation
// bounds all mixed partials uniformly, which is what the coefficient
// recursion consumes.
#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "tansing/errors.hpp"
#include "tansing/numbers.hpp"
#include "tansing/series.hpp"

namespace tansing {

template <class F>
class BiSeries {
public:
    BiSeries() : order_(0), coeff_(1, F(0)) {}

    explicit BiSeries(int order) : order_(order) {
        if (order < 0) throw InternalError("BiSeries: negative truncation order");
        coeff_.assign(tri_size(order), F(0));
    }

    static BiSeries zero(int order) { return BiSeries(order); }

    static BiSeries constant(const F& v, int order) {
        BiSeries s(order);
        s.coeff_[0] = v;
        return s;
    }

    int order() const { return order_; }

    const F& coeff(int i, int j) const {
        check_index(i, j);
        if (i + j > order_)
            throw OrderBudgetExceeded("bivariate coefficient (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") beyond total degree " +
                                      std::to_string(order_));
        return coeff_[offset(i, j)];
    }

    F& coeff_mut(int i, int j) {
        check_index(i, j);
        if (i + j > order_) throw InternalError("BiSeries::coeff_mut out of window");
        return coeff_[offset(i, j)];
    }

    bool is_zero() const {
        for (const F& c : coeff_)
            if (!field_is_zero(c)) return false;
        return true;
    }

    friend BiSeries operator+(const BiSeries& a, const BiSeries& b) {
        const int n = std::min(a.order_, b.order_);
        BiSeries r(n);
        for (int d = 0; d <= n; ++d)
            for (int i = 0; i <= d; ++i)
                r.coeff_mut(i, d - i) = a.coeff(i, d - i) + b.coeff(i, d - i);
        return r;
    }

    friend BiSeries operator-(const BiSeries& a, const BiSeries& b) {
        const int n = std::min(a.order_, b.order_);
        BiSeries r(n);
        for (int d = 0; d <= n; ++d)
            for (int i = 0; i <= d; ++i)
                r.coeff_mut(i, d - i) = a.coeff(i, d - i) - b.coeff(i, d - i);
        return r;
    }

    friend BiSeries operator*(const BiSeries& a, const BiSeries& b) {
        const int n = std::min(a.order_, b.order_);
        BiSeries r(n);
        for (int da = 0; da <= n; ++da)
            for (int ia = 0; ia <= da; ++ia) {
                const F& ca = a.coeff(ia, da - ia);
                if (field_is_zero(ca)) continue;
                for (int db = 0; da + db <= n; ++db)
                    for (int ib = 0; ib <= db; ++ib) {
                        const F& cb = b.coeff(ib, db - ib);
                        if (field_is_zero(cb)) continue;
                        r.coeff_mut(ia + ib, da + db - ia - ib) =
                            r.coeff(ia + ib, da + db - ia - ib) + ca * cb;
                    }
            }
        return r;
    }

    BiSeries scaled(const F& s) const {
        BiSeries r(order_);
        for (std::size_t t = 0; t < coeff_.size(); ++t) r.coeff_[t] = coeff_[t] * s;
        return r;
    }

    BiSeries truncated(int new_order) const {
        if (new_order > order_)
            throw OrderBudgetExceeded("cannot extend bivariate validity from order " +
                                      std::to_string(order_) + " to " + std::to_string(new_order));
        BiSeries r(new_order);
        for (int d = 0; d <= new_order; ++d)
            for (int i = 0; i <= d; ++i) r.coeff_mut(i, d - i) = coeff(i, d - i);
        return r;
    }

    // multiply by the exact monomial x^a y^b; validity grows by a+b
    BiSeries mul_monomial(int a, int b) const {
        if (a < 0 || b < 0) throw InternalError("BiSeries::mul_monomial: negative power");
        BiSeries r(order_ + a + b);
        for (int d = 0; d <= order_; ++d)
            for (int i = 0; i <= d; ++i) r.coeff_mut(i + a, d - i + b) = coeff(i, d - i);
        return r;
    }

    // divide by y^m exactly; all coefficients with j < m must vanish
    BiSeries div_ypow(int m) const {
        if (m < 0) throw InternalError("BiSeries::div_ypow: negative power");
        if (m > order_) throw OrderBudgetExceeded("div_ypow beyond total degree");
        for (int d = 0; d <= order_; ++d)
            for (int i = 0; i <= d; ++i)
                if (d - i < m && !field_is_zero(coeff(i, d - i)))
                    throw DivisionNotExact("bivariate coefficient x^" + std::to_string(i) + " y^" +
                                           std::to_string(d - i) + " is nonzero; cannot cancel y^" +
                                           std::to_string(m));
        BiSeries r(order_ - m);
        for (int d = 0; d <= order_ - m; ++d)
            for (int i = 0; i <= d; ++i) r.coeff_mut(i, d - i) = coeff(i, d - i + m);
        return r;
    }

    // division by a unit (nonzero constant term), grade by grade
    friend BiSeries series_div_unit(const BiSeries& num, const BiSeries& den) {
        if (field_is_zero(den.coeff(0, 0)))
            throw DivisionNotExact("bivariate division by a series with zero constant term");
        const int n = std::min(num.order_, den.order_);
        BiSeries q(n);
        const F& d00 = den.coeff(0, 0);
        for (int d = 0; d <= n; ++d)
            for (int i = 0; i <= d; ++i) {
                const int j = d - i;
                F acc = num.coeff(i, j);
                // subtract contributions q_{p,r} * den_{i-p, j-r}, (p,r) != (i,j)
                for (int p = 0; p <= i; ++p)
                    for (int r = 0; r <= j; ++r) {
                        if (p == i && r == j) continue;
                        acc = acc - q.coeff(p, r) * den.coeff(i - p, j - r);
                    }
                q.coeff_mut(i, j) = acc / d00;
            }
        return q;
    }

    // mixed partial d^a/dx^a d^b/dy^b; validity shrinks by a+b
    BiSeries partial(int a, int b) const {
        if (a < 0 || b < 0) throw InternalError("BiSeries::partial: negative order");
        const int n = order_ - a - b;
        if (n < 0) throw OrderBudgetExceeded("partial derivative exhausts bivariate order");
        BiSeries r(n);
        for (int d = 0; d <= n; ++d)
            for (int i = 0; i <= d; ++i) {
                const int j = d - i;
                Rational fac = factorial(i + a) / factorial(i) * (factorial(j + b) / factorial(j));
                r.coeff_mut(i, j) = coeff(i + a, j + b) * from_rational<F>(fac);
            }
        return r;
    }

    // restriction to y = 0 as a univariate series
    UniSeries<F> at_y0() const {
        UniSeries<F> r(order_);
        for (int i = 0; i <= order_; ++i) r.coeff_mut(i) = coeff(i, 0);
        return r;
    }

    template <class T>
    T evaluate(const T& x, const T& y) const {
        T acc(0);
        for (int d = 0; d <= order_; ++d)
            for (int i = 0; i <= d; ++i) {
                const F& c = coeff(i, d - i);
                if (field_is_zero(c)) continue;
                T term(FieldTraits<F>::to_double(c));
                for (int t = 0; t < i; ++t) term = term * x;
                for (int t = 0; t < d - i; ++t) term = term * y;
                acc = acc + term;
            }
        return acc;
    }

private:
    static std::size_t tri_size(int order) {
        return static_cast<std::size_t>(order + 1) * static_cast<std::size_t>(order + 2) / 2;
    }
    std::size_t offset(int i, int j) const {
        const int d = i + j;
        return static_cast<std::size_t>(d) * static_cast<std::size_t>(d + 1) / 2 +
               static_cast<std::size_t>(i);
    }
    static void check_index(int i, int j) {
        if (i < 0 || j < 0) throw InternalError("BiSeries: negative index");
    }

    int order_;
    std::vector<F> coeff_;
};

template <class F>
bool series_equal(const BiSeries<F>& a, const BiSeries<F>& b) {
    const int n = std::min(a.order(), b.order());
    for (int d = 0; d <= n; ++d)
        for (int i = 0; i <= d; ++i)
            if (!field_is_zero(a.coeff(i, d - i) - b.coeff(i, d - i))) return false;
    return true;
}

} // namespace tansing
