// Truncated univariate power series over an exact or big-float field.
//
// A UniSeries<F> of order N represents sum_{i=0..N} c_i x^i + O(x^{N+1}).
// The order is the validity window, and every operation propagates it
// pessimistically: results are never claimed valid beyond what the
// inputs support. Reading a coefficient outside the window throws
// OrderBudgetExceeded instead of inventing a zero.
#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "tansing/errors.hpp"
#include "tansing/numbers.hpp"

namespace tansing {

template <class F>
class UniSeries {
public:
    UniSeries() : coeff_(1, F(0)), order_(0) {}

    explicit UniSeries(int order) : coeff_(static_cast<std::size_t>(order) + 1, F(0)), order_(order) {
        check_order(order);
    }

    UniSeries(std::vector<F> coeffs, int order) : coeff_(std::move(coeffs)), order_(order) {
        check_order(order);
        coeff_.resize(static_cast<std::size_t>(order) + 1, F(0));
    }

    static UniSeries zero(int order) { return UniSeries(order); }

    static UniSeries constant(const F& value, int order) {
        UniSeries s(order);
        s.coeff_[0] = value;
        return s;
    }

    // c * x^m, valid through the requested order
    static UniSeries monomial(const F& c, int m, int order) {
        if (m < 0) throw InternalError("UniSeries::monomial: negative power");
        UniSeries s(order);
        if (m <= order) s.coeff_[static_cast<std::size_t>(m)] = c;
        // m > order: the monomial is O(x^{order+1}), representable as 0
        return s;
    }

    static UniSeries identity(int order) { return monomial(F(1), 1, order); }

    int order() const { return order_; }

    const F& coeff(int i) const {
        if (i < 0) throw InternalError("UniSeries::coeff: negative index");
        if (i > order_)
            throw OrderBudgetExceeded("coefficient x^" + std::to_string(i) +
                                      " requested from series of order " + std::to_string(order_));
        return coeff_[static_cast<std::size_t>(i)];
    }

    F& coeff_mut(int i) {
        if (i < 0 || i > order_) throw InternalError("UniSeries::coeff_mut: index out of window");
        return coeff_[static_cast<std::size_t>(i)];
    }

    bool is_zero() const {
        for (const F& c : coeff_)
            if (!field_is_zero(c)) return false;
        return true;
    }

    // smallest i with c_i != 0, or order()+1 when zero through the window
    int valuation() const {
        for (int i = 0; i <= order_; ++i)
            if (!field_is_zero(coeff_[static_cast<std::size_t>(i)])) return i;
        return order_ + 1;
    }

    UniSeries truncated(int new_order) const {
        if (new_order > order_)
            throw OrderBudgetExceeded("cannot extend series validity from order " +
                                      std::to_string(order_) + " to " + std::to_string(new_order));
        UniSeries r(new_order);
        for (int i = 0; i <= new_order; ++i) r.coeff_[static_cast<std::size_t>(i)] = coeff(i);
        return r;
    }

    friend UniSeries operator+(const UniSeries& a, const UniSeries& b) {
        const int n = std::min(a.order_, b.order_);
        UniSeries r(n);
        for (int i = 0; i <= n; ++i) r.coeff_[static_cast<std::size_t>(i)] = a.coeff(i) + b.coeff(i);
        return r;
    }

    friend UniSeries operator-(const UniSeries& a, const UniSeries& b) {
        const int n = std::min(a.order_, b.order_);
        UniSeries r(n);
        for (int i = 0; i <= n; ++i) r.coeff_[static_cast<std::size_t>(i)] = a.coeff(i) - b.coeff(i);
        return r;
    }

    UniSeries operator-() const {
        UniSeries r(order_);
        for (int i = 0; i <= order_; ++i) r.coeff_[static_cast<std::size_t>(i)] = -coeff(i);
        return r;
    }

    friend UniSeries operator*(const UniSeries& a, const UniSeries& b) {
        const int n = std::min(a.order_, b.order_);
        UniSeries r(n);
        for (int i = 0; i <= n; ++i) {
            F acc(0);
            for (int j = 0; j <= i; ++j) acc = acc + a.coeff(j) * b.coeff(i - j);
            r.coeff_[static_cast<std::size_t>(i)] = acc;
        }
        return r;
    }

    UniSeries scaled(const F& s) const {
        UniSeries r(order_);
        for (int i = 0; i <= order_; ++i) r.coeff_[static_cast<std::size_t>(i)] = coeff(i) * s;
        return r;
    }

    // multiply by the exact monomial x^m; validity grows by m
    UniSeries mul_xpow(int m) const {
        if (m < 0) throw InternalError("UniSeries::mul_xpow: negative power");
        UniSeries r(order_ + m);
        for (int i = 0; i <= order_; ++i) r.coeff_[static_cast<std::size_t>(i + m)] = coeff(i);
        return r;
    }

    // divide by x^m exactly; the m lowest coefficients must vanish
    UniSeries div_xpow(int m) const {
        if (m < 0) throw InternalError("UniSeries::div_xpow: negative power");
        if (m > order_)
            throw OrderBudgetExceeded("div_xpow beyond series order");
        for (int i = 0; i < m; ++i)
            if (!field_is_zero(coeff(i)))
                throw DivisionNotExact("coefficient of x^" + std::to_string(i) +
                                       " is nonzero; cannot cancel x^" + std::to_string(m));
        UniSeries r(order_ - m);
        for (int i = m; i <= order_; ++i) r.coeff_[static_cast<std::size_t>(i - m)] = coeff(i);
        return r;
    }

    UniSeries derivative(int m = 1) const {
        if (m < 0) throw InternalError("UniSeries::derivative: negative count");
        UniSeries cur = *this;
        for (int d = 0; d < m; ++d) {
            const int n = std::max(0, cur.order_ - 1);
            UniSeries next(n);
            for (int i = 0; i + 1 <= cur.order_ && i <= n; ++i)
                next.coeff_[static_cast<std::size_t>(i)] = cur.coeff(i + 1) * F(i + 1);
            cur = next;
        }
        return cur;
    }

    template <class T>
    T evaluate(const T& x) const {
        T acc(0);
        for (int i = order_; i >= 0; --i) acc = acc * x + T(FieldTraits<F>::to_double(coeff(i)));
        return acc;
    }

    F evaluate_exact(const F& x) const {
        F acc(0);
        for (int i = order_; i >= 0; --i) acc = acc * x + coeff(i);
        return acc;
    }

    std::string str(const std::string& var = "x") const {
        std::string out;
        bool any = false;
        for (int i = 0; i <= order_; ++i) {
            if (field_is_zero(coeff(i))) continue;
            if (any) out += " + ";
            out += "(" + FieldTraits<F>::str(coeff(i)) + ")";
            if (i > 0) out += "*" + var + "^" + std::to_string(i);
            any = true;
        }
        if (!any) out = "0";
        out += " + O(" + var + "^" + std::to_string(order_ + 1) + ")";
        return out;
    }

private:
    static void check_order(int order) {
        if (order < 0) throw InternalError("UniSeries: negative truncation order");
    }

    std::vector<F> coeff_;
    int order_;
};

// num / den with exact cancellation of the shared monomial factor x^m,
// where m is the valuation of den. Requires num to vanish through x^{m-1}
// (DivisionNotExact otherwise); the cofactor of den must be a unit.
template <class F>
UniSeries<F> series_div(const UniSeries<F>& num, const UniSeries<F>& den) {
    const int m = den.valuation();
    if (m > den.order())
        throw DivisionNotExact("division by a series that is zero through its order");
    const UniSeries<F> u = den.div_xpow(m);
    const UniSeries<F> v = num.div_xpow(m); // DivisionNotExact if low terms survive
    const int n = std::min(u.order(), v.order());
    UniSeries<F> q(n);
    const F& u0 = u.coeff(0);
    for (int i = 0; i <= n; ++i) {
        F acc = v.coeff(i);
        for (int j = 0; j < i; ++j) acc = acc - q.coeff(j) * u.coeff(i - j);
        q.coeff_mut(i) = acc / u0;
    }
    return q;
}

// outer(inner), requiring inner(0) = 0; result valid through
// min(outer.order, inner.order).
template <class F>
UniSeries<F> series_compose(const UniSeries<F>& outer, const UniSeries<F>& inner) {
    if (!field_is_zero(inner.coeff(0)))
        throw NonzeroConstantTerm("series_compose: inner constant term must vanish");
    const int n = std::min(outer.order(), inner.order());
    const UniSeries<F> g = inner.truncated(n);
    UniSeries<F> acc = UniSeries<F>::constant(outer.coeff(std::min(outer.order(), n)), n);
    for (int i = std::min(outer.order(), n) - 1; i >= 0; --i)
        acc = acc * g + UniSeries<F>::constant(outer.coeff(i), n);
    return acc;
}

template <class F>
bool series_equal(const UniSeries<F>& a, const UniSeries<F>& b) {
    const int n = std::min(a.order(), b.order());
    for (int i = 0; i <= n; ++i)
        if (!field_is_zero(a.coeff(i) - b.coeff(i))) return false;
    return true;
}

} // namespace tansing
