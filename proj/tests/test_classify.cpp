#include <catch_amalgamated.hpp>

#include "support/fixtures.hpp"
#include "tansing/classify.hpp"

using namespace tansing;
using tansing::testing::FixtureGen;

namespace {

// push-forward under (x,y) -> (x,-y) with the halves swapped
PiecewiseField<Rational> swap_reflect(const PiecewiseField<Rational>& f) {
    auto reflect = [](const PolyVF<Rational>& vf) {
        PolyVF<Rational> out;
        for (const auto& [k, c] : vf.X.terms())
            out.X.add_term(k.first, k.second, k.second % 2 == 0 ? c : -c);
        for (const auto& [k, c] : vf.Y.terms())
            out.Y.add_term(k.first, k.second, k.second % 2 == 0 ? -c : c);
        return out;
    };
    PiecewiseField<Rational> out;
    out.upper = reflect(f.lower);
    out.lower = reflect(f.upper);
    return out;
}

} // namespace

TEST_CASE("contact multiplicity") {
    // X = -1, Y = -x^3(lambda x + 1):  multiplicity 4 regardless of lambda
    PolyVF<Rational> vf;
    vf.X = Poly2<Rational>::constant(Rational(-1));
    vf.Y.add_term(3, 0, Rational(-1));
    vf.Y.add_term(4, 0, Rational(-2, 3));
    auto r = contact_multiplicity(vf);
    CHECK_FALSE(r.infinite);
    CHECK(r.multiplicity == 4);

    // identically tangent along the section
    PolyVF<Rational> tangent;
    tangent.X = Poly2<Rational>::constant(Rational(1));
    tangent.Y = Poly2<Rational>::monomial(Rational(1), 0, 1); // Y = y
    CHECK(contact_multiplicity(tangent).infinite);

    // simple fold
    PolyVF<Rational> fold;
    fold.X = Poly2<Rational>::constant(Rational(1));
    fold.Y = Poly2<Rational>::monomial(Rational(1), 1, 0);
    CHECK(contact_multiplicity(fold).multiplicity == 2);

    PolyVF<Rational> off;
    off.X = Poly2<Rational>::constant(Rational(1));
    off.Y = Poly2<Rational>::constant(Rational(1));
    CHECK_THROWS_AS(contact_multiplicity(off), NotTangential);

    PolyVF<Rational> stuck;
    stuck.X = Poly2<Rational>::monomial(Rational(1), 1, 0); // X(0,0) = 0
    stuck.Y = Poly2<Rational>::monomial(Rational(1), 1, 0);
    CHECK_THROWS_AS(contact_multiplicity(stuck), NotTangential);
}

TEST_CASE("classification of the worked examples") {
    auto ex2 = testing::example2<Rational>(1, Rational(0));
    auto cls = classify(ex2);
    CHECK(cls.k_plus == 1);
    CHECK(cls.k_minus == 1);
    CHECK(cls.delta == -1);
    CHECK(cls.monodromic);
    CHECK(cls.convention == SignConvention::reversed); // the mirrored sign pattern

    // visible fold pair: same-sign X components break the orientation
    PiecewiseField<Rational> bad;
    bad.upper.X = Poly2<Rational>::constant(Rational(1));
    bad.upper.Y = Poly2<Rational>::monomial(Rational(1), 1, 0);
    bad.lower.X = Poly2<Rational>::constant(Rational(1));
    bad.lower.Y = Poly2<Rational>::monomial(Rational(-1), 1, 0);
    auto bc = classify(bad);
    CHECK_FALSE(bc.orientation_ok);
    CHECK_FALSE(bc.monodromic);

    // canonical fold-fold in the textbook pattern
    auto pc = testing::pure_canonical<Rational>(1, 1, 1, Rational(-1), Rational(-1));
    auto pcls = classify(pc);
    CHECK(pcls.monodromic);
    CHECK(pcls.delta == 1);
    CHECK(pcls.convention == SignConvention::standard);
    CHECK(pcls.invisible_plus);
    CHECK(pcls.invisible_minus);

    // odd multiplicity is rejected
    PiecewiseField<Rational> odd;
    odd.upper.X = Poly2<Rational>::constant(Rational(1));
    odd.upper.Y = Poly2<Rational>::monomial(Rational(-1), 2, 0);
    odd.lower = pc.lower;
    CHECK_THROWS_AS(classify(odd), OddMultiplicity);

    // opposite Lie signs on the same side pattern: no first-return structure
    PiecewiseField<Rational> mixed;
    mixed.upper.X = Poly2<Rational>::constant(Rational(1));
    mixed.upper.Y = Poly2<Rational>::monomial(Rational(-1), 1, 0);
    mixed.lower.X = Poly2<Rational>::constant(Rational(-1));
    mixed.lower.Y = Poly2<Rational>::monomial(Rational(1), 1, 0);
    auto mcls = classify(mixed);
    CHECK_FALSE(mcls.monodromic);
}

TEST_CASE("classification invariances") {
    FixtureGen gen(42);
    for (int trial = 0; trial < 25; ++trial) {
        auto fx = gen.monodromic();
        auto cls = classify(fx.field);
        REQUIRE(cls.monodromic);
        CHECK(cls.k_plus == fx.plus.k);
        CHECK(cls.k_minus == fx.minus.k);
        CHECK(cls.delta == fx.delta);
        CHECK((cls.convention == SignConvention::reversed) == fx.reversed);

        // positive rescaling of each half leaves everything unchanged
        PiecewiseField<Rational> scaled = fx.field;
        scaled.upper.X = scaled.upper.X.scaled(Rational(3, 2));
        scaled.upper.Y = scaled.upper.Y.scaled(Rational(3, 2));
        scaled.lower.X = scaled.lower.X.scaled(Rational(7));
        scaled.lower.Y = scaled.lower.Y.scaled(Rational(7));
        auto scls = classify(scaled);
        CHECK(scls.k_plus == cls.k_plus);
        CHECK(scls.k_minus == cls.k_minus);
        CHECK(scls.delta == cls.delta);
        CHECK(scls.monodromic == cls.monodromic);
        CHECK(scls.invisible_plus == cls.invisible_plus);
        CHECK(scls.invisible_minus == cls.invisible_minus);

        // swap + y-reflection exchanges k+ and k- and negates delta
        auto rcls = classify(swap_reflect(fx.field));
        CHECK(rcls.monodromic);
        CHECK(rcls.k_plus == cls.k_minus);
        CHECK(rcls.k_minus == cls.k_plus);
        CHECK(rcls.delta == -cls.delta);
    }
}
