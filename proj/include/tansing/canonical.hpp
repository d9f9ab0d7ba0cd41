// Reduction of a classified monodromic field to canonical data
// (delta, k±, a±, f±, g±): after dividing out the horizontal speed, the
// vertical component on each side is
//
//     eta(x, y) = a x^{2k-1} + x^{2k} f(x) + y g(x, y),
//
// and (delta, eta+) / (-delta, eta-) is the canonical system. f and g
// are produced by exact series division with monomial cancellation; the
// univariate reconstruction identity is asserted after the fact.
#pragma once

#include <string>
#include <utility>

#include "tansing/biseries.hpp"
#include "tansing/classify.hpp"
#include "tansing/errors.hpp"
#include "tansing/numbers.hpp"
#include "tansing/poly.hpp"
#include "tansing/series.hpp"

namespace tansing {

template <class F>
struct CanonicalForm {
    int delta = 0;
    int k_plus = 0;
    int k_minus = 0;
    F a_plus{};
    F a_minus{};
    UniSeries<F> f_plus;
    UniSeries<F> f_minus;
    BiSeries<F> g_plus;
    BiSeries<F> g_minus;
    int order = 0; // common validity order of f± (univariate) and g± (total degree)

    int k(Side s) const { return s == Side::upper ? k_plus : k_minus; }
    const F& a(Side s) const { return s == Side::upper ? a_plus : a_minus; }
    const UniSeries<F>& f(Side s) const { return s == Side::upper ? f_plus : f_minus; }
    const BiSeries<F>& g(Side s) const { return s == Side::upper ? g_plus : g_minus; }
    // horizontal speed of the side in canonical time: +delta upper, -delta lower
    int side_delta(Side s) const { return s == Side::upper ? delta : -delta; }
};

// a = d^{2k-1}Y/dx^{2k-1}(0,0) / ((2k-1)! |X(0,0)|), evaluated exactly.
template <class F>
std::pair<F, F> compute_a(const PiecewiseField<F>& field, const TangencyClassification& cls) {
    if (!cls.monodromic) throw NotMonodromic("compute_a requires a monodromic classification");
    auto one_side = [&](const PolyVF<F>& vf, int k) {
        return vf.Y.coeff(2 * k - 1, 0) / abs(vf.X.at_origin());
    };
    F a_plus = one_side(field.upper, cls.k_plus);
    F a_minus = one_side(field.lower, cls.k_minus);
    // cross-check the independently computed Lie-derivative signs
    if (cls.lie_sign_plus != cls.delta * field_sign(a_plus) ||
        cls.lie_sign_minus != -cls.delta * field_sign(a_minus))
        throw InternalError("sign of a± disagrees with the classification's Lie-derivative signs");
    return {a_plus, a_minus};
}

namespace detail {

template <class F>
UniSeries<F> compute_f_side(const PolyVF<F>& vf, int sdelta, int k, const F& a, int order) {
    const int work = order + 2 * k;
    const UniSeries<F> y0 = vf.Y.restrict_y0_series(work);
    const UniSeries<F> x0 = vf.X.restrict_y0_series(work);
    // numerator: s*delta*Y(x,0) - a x^{2k-1} X(x,0); denominator: x^{2k} X(x,0)
    UniSeries<F> num = y0.scaled(F(sdelta)) - x0.scaled(a).mul_xpow(2 * k - 1).truncated(work);
    UniSeries<F> den = x0.mul_xpow(2 * k).truncated(work);
    return series_div(num, den);
}

template <class F>
BiSeries<F> compute_g_side(const PolyVF<F>& vf, int sdelta, int order) {
    // g = s*delta * (Y(x,y) X(x,0) - Y(x,0) X(x,y)) / (y X(x,y) X(x,0))
    Poly2<F> x_at0;
    for (const auto& [key, c] : vf.X.terms())
        if (key.second == 0) x_at0.add_term(key.first, 0, c);
    Poly2<F> y_at0;
    for (const auto& [key, c] : vf.Y.terms())
        if (key.second == 0) y_at0.add_term(key.first, 0, c);
    const Poly2<F> num_poly = (vf.Y * x_at0 - y_at0 * vf.X).scaled(F(sdelta));
    BiSeries<F> num = num_poly.to_biseries(order + 1).div_ypow(1);
    BiSeries<F> den = (vf.X * x_at0).to_biseries(order);
    return series_div_unit(num, den);
}

} // namespace detail

// f± to univariate order `order`, g± to total degree `order`.
template <class F>
CanonicalForm<F> canonical_form(const PiecewiseField<F>& field, const TangencyClassification& cls,
                                int order) {
    if (!cls.monodromic) throw NotMonodromic("canonical_form requires a monodromic classification");
    auto [a_plus, a_minus] = compute_a(field, cls);

    CanonicalForm<F> cf;
    cf.delta = cls.delta;
    cf.k_plus = cls.k_plus;
    cf.k_minus = cls.k_minus;
    cf.a_plus = a_plus;
    cf.a_minus = a_minus;
    cf.order = order;
    cf.f_plus = detail::compute_f_side(field.upper, cls.delta, cls.k_plus, a_plus, order);
    cf.f_minus = detail::compute_f_side(field.lower, -cls.delta, cls.k_minus, a_minus, order);
    cf.g_plus = detail::compute_g_side(field.upper, cls.delta, order);
    cf.g_minus = detail::compute_g_side(field.lower, -cls.delta, order);

    // reconstruction on the section: s*delta*Y(x,0) == X(x,0)(a x^{2k-1} + x^{2k} f)
    auto check = [&](const PolyVF<F>& vf, int sdelta, int k, const F& a, const UniSeries<F>& f) {
        const int n = order + 2 * k;
        const UniSeries<F> lhs = vf.Y.restrict_y0_series(n).scaled(F(sdelta));
        const UniSeries<F> eta =
            UniSeries<F>::monomial(a, 2 * k - 1, n) + f.mul_xpow(2 * k);
        const UniSeries<F> rhs = vf.X.restrict_y0_series(n) * eta;
        if (!series_equal(lhs, rhs))
            throw InternalError("canonical reconstruction failed on the section");
    };
    check(field.upper, cls.delta, cls.k_plus, a_plus, cf.f_plus);
    check(field.lower, -cls.delta, cls.k_minus, a_minus, cf.f_minus);
    return cf;
}

} // namespace tansing
