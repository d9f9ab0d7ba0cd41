// Bivariate polynomials with exact coefficients, and the piecewise
// vector field built from a pair of them per half-plane.
#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tansing/biseries.hpp"
#include "tansing/errors.hpp"
#include "tansing/numbers.hpp"
#include "tansing/series.hpp"

namespace tansing {

template <class F>
class Poly2 {
public:
    struct Term {
        int i;
        int j;
        F c;
    };

    Poly2() = default;

    static Poly2 zero() { return Poly2(); }

    static Poly2 constant(const F& c) {
        Poly2 p;
        p.add_term(0, 0, c);
        return p;
    }

    static Poly2 monomial(const F& c, int i, int j) {
        Poly2 p;
        p.add_term(i, j, c);
        return p;
    }

    void add_term(int i, int j, const F& c) {
        if (i < 0 || j < 0) throw UsageError("polynomial exponents must be nonnegative");
        auto key = std::make_pair(i, j);
        auto it = terms_.find(key);
        if (it == terms_.end())
            terms_.emplace(key, c);
        else
            it->second = it->second + c;
    }

    const std::map<std::pair<int, int>, F>& terms() const { return terms_; }

    bool is_zero() const {
        for (const auto& [k, c] : terms_)
            if (!field_is_zero(c)) return false;
        return true;
    }

    F coeff(int i, int j) const {
        auto it = terms_.find(std::make_pair(i, j));
        return it == terms_.end() ? F(0) : it->second;
    }

    int deg_x() const {
        int d = 0;
        for (const auto& [k, c] : terms_)
            if (!field_is_zero(c)) d = std::max(d, k.first);
        return d;
    }

    int total_degree() const {
        int d = 0;
        for (const auto& [k, c] : terms_)
            if (!field_is_zero(c)) d = std::max(d, k.first + k.second);
        return d;
    }

    friend Poly2 operator+(const Poly2& a, const Poly2& b) {
        Poly2 r = a;
        for (const auto& [k, c] : b.terms_) r.add_term(k.first, k.second, c);
        return r;
    }

    friend Poly2 operator-(const Poly2& a, const Poly2& b) {
        Poly2 r = a;
        for (const auto& [k, c] : b.terms_) r.add_term(k.first, k.second, -c);
        return r;
    }

    friend Poly2 operator*(const Poly2& a, const Poly2& b) {
        Poly2 r;
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_)
                r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
        return r;
    }

    Poly2 scaled(const F& s) const {
        Poly2 r;
        for (const auto& [k, c] : terms_) r.add_term(k.first, k.second, c * s);
        return r;
    }

    F eval(const F& x, const F& y) const {
        F acc(0);
        for (const auto& [k, c] : terms_)
            acc = acc + c * field_pow(x, k.first) * field_pow(y, k.second);
        return acc;
    }

    F at_origin() const { return coeff(0, 0); }

    // restriction to y = 0, as exact dense coefficients in x
    std::vector<F> restrict_y0() const {
        int top = 0;
        for (const auto& [k, c] : terms_)
            if (k.second == 0) top = std::max(top, k.first);
        std::vector<F> out(static_cast<std::size_t>(top) + 1, F(0));
        for (const auto& [k, c] : terms_)
            if (k.second == 0) out[static_cast<std::size_t>(k.first)] = out[static_cast<std::size_t>(k.first)] + c;
        return out;
    }

    UniSeries<F> restrict_y0_series(int order) const {
        UniSeries<F> r(order);
        for (const auto& [k, c] : terms_)
            if (k.second == 0 && k.first <= order) r.coeff_mut(k.first) = r.coeff(k.first) + c;
        return r;
    }

    BiSeries<F> to_biseries(int order) const {
        BiSeries<F> s(order);
        for (const auto& [k, c] : terms_)
            if (k.first + k.second <= order)
                s.coeff_mut(k.first, k.second) = s.coeff(k.first, k.second) + c;
        return s;
    }

    Poly2 deriv_x() const {
        Poly2 r;
        for (const auto& [k, c] : terms_)
            if (k.first > 0) r.add_term(k.first - 1, k.second, c * F(k.first));
        return r;
    }

    Poly2 deriv_y() const {
        Poly2 r;
        for (const auto& [k, c] : terms_)
            if (k.second > 0) r.add_term(k.first, k.second - 1, c * F(k.second));
        return r;
    }

    template <class G>
    Poly2<G> convert() const {
        Poly2<G> r;
        for (const auto& [k, c] : terms_) r.add_term(k.first, k.second, G(c));
        return r;
    }

private:
    std::map<std::pair<int, int>, F> terms_;
};

// one analytic half: Z = (X(x,y), Y(x,y))
template <class F>
struct PolyVF {
    Poly2<F> X;
    Poly2<F> Y;
};

enum class Side { upper, lower };

inline const char* side_name(Side s) { return s == Side::upper ? "upper" : "lower"; }

// the Filippov pair: upper acts on y > 0, lower on y < 0;
// the discontinuity manifold is fixed to {y = 0}
template <class F>
struct PiecewiseField {
    using value_type = F;

    PolyVF<F> upper;
    PolyVF<F> lower;

    const PolyVF<F>& side(Side s) const { return s == Side::upper ? upper : lower; }
};

} // namespace tansing
