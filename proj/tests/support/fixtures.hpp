// Test fixtures: the worked examples used across the suite, and a
// seeded generator of random monodromic fields built directly from
// canonical data (a, f, g) times a positive rescaling unit, so the
// expected classification and canonical form are known by construction.
#pragma once

#include <random>
#include <vector>

#include "tansing/classify.hpp"
#include "tansing/lyapunov.hpp"
#include "tansing/numbers.hpp"
#include "tansing/poly.hpp"

namespace tansing::testing {

// Z+ = (-1, -x^{2kp-1}(lambda x + 1)), Z- = (1, x^{2km-1}(x - 1))
template <class F>
PiecewiseField<F> example1(int kp, int km, const F& lambda) {
    PiecewiseField<F> f;
    f.upper.X = Poly2<F>::constant(F(-1));
    f.upper.Y.add_term(2 * kp, 0, -lambda);
    f.upper.Y.add_term(2 * kp - 1, 0, F(-1));
    f.lower.X = Poly2<F>::constant(F(1));
    f.lower.Y.add_term(2 * km, 0, F(1));
    f.lower.Y.add_term(2 * km - 1, 0, F(-1));
    return f;
}

// Z+ = (-1, x^{2k-1}(lambda x - 1) + y), Z- = (1, x^{2k-1}(x - 1))
template <class F>
PiecewiseField<F> example2(int k, const F& lambda) {
    PiecewiseField<F> f;
    f.upper.X = Poly2<F>::constant(F(-1));
    f.upper.Y.add_term(2 * k, 0, lambda);
    f.upper.Y.add_term(2 * k - 1, 0, F(-1));
    f.upper.Y.add_term(0, 1, F(1));
    f.lower.X = Poly2<F>::constant(F(1));
    f.lower.Y.add_term(2 * k, 0, F(1));
    f.lower.Y.add_term(2 * k - 1, 0, F(-1));
    return f;
}

// Z+ = (-1, -x + l1 x^2 + l2 xy + l3 y^2), Z- = (1, -x + x^2 + l4 xy + l5 y^2)
template <class F>
PiecewiseField<F> example3(const F& l1, const F& l2, const F& l3, const F& l4, const F& l5) {
    PiecewiseField<F> f;
    f.upper.X = Poly2<F>::constant(F(-1));
    f.upper.Y.add_term(1, 0, F(-1));
    f.upper.Y.add_term(2, 0, l1);
    f.upper.Y.add_term(1, 1, l2);
    f.upper.Y.add_term(0, 2, l3);
    f.lower.X = Poly2<F>::constant(F(1));
    f.lower.Y.add_term(1, 0, F(-1));
    f.lower.Y.add_term(2, 0, F(1));
    f.lower.Y.add_term(1, 1, l4);
    f.lower.Y.add_term(0, 2, l5);
    return f;
}

// the pure canonical fold-fold: Z+ = (delta, a+ x^{2kp-1}), Z- = (-delta, a- x^{2km-1})
template <class F>
PiecewiseField<F> pure_canonical(int delta, int kp, int km, const F& a_plus, const F& a_minus) {
    PiecewiseField<F> out;
    out.upper.X = Poly2<F>::constant(F(delta));
    out.upper.Y = Poly2<F>::monomial(a_plus, 2 * kp - 1, 0);
    out.lower.X = Poly2<F>::constant(F(-delta));
    out.lower.Y = Poly2<F>::monomial(a_minus, 2 * km - 1, 0);
    return out;
}

struct SideData {
    int k = 1;
    Rational a;
    Poly2<Rational> f; // univariate in x
    Poly2<Rational> g;
    Poly2<Rational> unit; // positive rescaling factor
};

struct RandomFixture {
    PiecewiseField<Rational> field;
    int delta = 1;
    bool reversed = false;
    SideData plus, minus;
};

// Z = (side_delta * u, eta * u) with eta = a x^{2k-1} + x^{2k} f + y g
inline PolyVF<Rational> realize_side(const SideData& d, int side_delta) {
    Poly2<Rational> eta = Poly2<Rational>::monomial(d.a, 2 * d.k - 1, 0);
    for (const auto& [key, c] : d.f.terms()) eta.add_term(key.first + 2 * d.k, 0, c);
    for (const auto& [key, c] : d.g.terms()) eta.add_term(key.first, key.second + 1, c);
    PolyVF<Rational> vf;
    vf.X = d.unit.scaled(Rational(side_delta));
    vf.Y = eta * d.unit;
    return vf;
}

// re-realize a fixture after its side data was edited
inline PiecewiseField<Rational> rebuild(const RandomFixture& fx) {
    PiecewiseField<Rational> f;
    f.upper = realize_side(fx.plus, fx.delta);
    f.lower = realize_side(fx.minus, -fx.delta);
    return f;
}

// retarget f0+ so that alpha_2+ = alpha_2-, forcing V_2 = 0 exactly
inline void tune_V2_zero(RandomFixture& fx) {
    // alpha_2 = (-2 f0 + 2 s delta a g00) / (a (2k + 1)) per side
    const Rational g00m = fx.minus.g.coeff(0, 0);
    const Rational target = (Rational(-2) * fx.minus.f.coeff(0, 0) -
                             Rational(2 * fx.delta) * fx.minus.a * g00m) /
                            (fx.minus.a * Rational(2 * fx.minus.k + 1));
    const Rational g00p = fx.plus.g.coeff(0, 0);
    const Rational f0 = Rational(fx.delta) * fx.plus.a * g00p -
                        target * fx.plus.a * Rational(2 * fx.plus.k + 1) / 2;
    fx.plus.f.add_term(0, 0, f0 - fx.plus.f.coeff(0, 0));
    fx.field = rebuild(fx);
}

// with V_2 already zero, retarget f2+ to force V_4 = 0 as well (V_4 is
// affine in f2+); returns false when this coefficient cannot reach it
inline bool tune_V4_zero(RandomFixture& fx) {
    auto v4_at = [&](const Rational& f2) {
        RandomFixture probe = fx;
        probe.plus.f.add_term(2, 0, f2 - probe.plus.f.coeff(2, 0));
        auto field = rebuild(probe);
        auto cls = classify(field);
        auto cf = canonical_form(field, cls, canonical_order_for(4, cls.k_plus, cls.k_minus));
        return lyapunov_coefficients(cf, 4).V_at(4);
    };
    const Rational f2_orig = fx.plus.f.coeff(2, 0);
    const Rational v0 = v4_at(f2_orig);
    const Rational v1 = v4_at(f2_orig + 1);
    if (v1 == v0) return false;
    const Rational f2 = f2_orig - v0 / (v1 - v0);
    fx.plus.f.add_term(2, 0, f2 - fx.plus.f.coeff(2, 0));
    fx.field = rebuild(fx);
    return true;
}

class FixtureGen {
public:
    explicit FixtureGen(std::uint64_t seed) : rng_(seed) {}

    struct Options {
        int max_k = 3;
        int f_degree = 3;
        int g_degree = 2;
        bool allow_reversed = true;
        bool rescale_unit = true;
        bool small_coefficients = false; // keep the monodromy basin wide for numeric runs
    };

    RandomFixture monodromic() { return monodromic(Options{}); }

    RandomFixture monodromic(const Options& opt) {
        RandomFixture fx;
        fx.delta = flip() ? 1 : -1;
        fx.reversed = opt.allow_reversed && flip();
        fx.plus = side(fx.delta, +1, fx.reversed, opt);
        fx.minus = side(fx.delta, -1, fx.reversed, opt);
        fx.field = rebuild(fx);
        return fx;
    }

    Rational small_rational(int max_num = 6, int max_den = 4) {
        std::uniform_int_distribution<int> num(-max_num, max_num);
        std::uniform_int_distribution<int> den(1, max_den);
        return Rational(num(rng_), den(rng_));
    }

    std::uint64_t raw() { return rng_(); }

private:
    bool flip() { return (rng_() & 1u) != 0; }

    SideData side(int delta, int s, bool reversed, const Options& opt) {
        SideData d;
        std::uniform_int_distribution<int> kd(1, opt.max_k);
        d.k = kd(rng_);
        // invisible pattern: delta*a < 0; mirrored pattern: delta*a > 0
        const int want_sign = reversed ? delta : -delta;
        Rational mag = abs(small_rational(4, 2));
        if (mag.is_zero()) mag = Rational(1);
        d.a = Rational(want_sign) * (mag + Rational(1, 2));
        const int divisor = opt.small_coefficients ? 4 : 1;
        for (int i = 0; i <= opt.f_degree; ++i)
            d.f.add_term(i, 0, small_rational() / divisor);
        for (int deg = 0; deg <= opt.g_degree; ++deg)
            for (int i = 0; i <= deg; ++i) d.g.add_term(i, deg - i, small_rational() / divisor);
        d.unit = Poly2<Rational>::constant(Rational(1));
        if (opt.rescale_unit && !opt.small_coefficients) {
            d.unit.add_term(1, 0, small_rational(2, 4) / 2);
            d.unit.add_term(0, 1, small_rational(2, 4) / 2);
            d.unit.add_term(1, 1, small_rational(2, 4) / 4);
        }
        (void)s;
        return d;
    }

    std::mt19937_64 rng_;
};

} // namespace tansing::testing
