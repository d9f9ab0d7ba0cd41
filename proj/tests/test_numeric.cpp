#include <catch_amalgamated.hpp>

#include <cmath>

#include "support/fixtures.hpp"
#include "tansing/halfreturn.hpp"
#include "tansing/lyapunov.hpp"

using namespace tansing;
using tansing::testing::FixtureGen;

namespace {

struct Bound {
    PiecewiseField<Rational> field;
    TangencyClassification cls;
    NumericField<double> nf;
};

Bound prepare(const PiecewiseField<Rational>& field) {
    Bound b;
    b.field = field;
    b.cls = classify(field);
    REQUIRE(b.cls.monodromic);
    b.nf = NumericField<double>::from(field);
    return b;
}

} // namespace

TEST_CASE("half-return of the pure canonical flow is -x0") {
    IntegratorConfig cfg;
    for (int delta : {1, -1})
        for (int k : {1, 2}) {
            const Rational a = delta == 1 ? Rational(-1) : Rational(1);
            auto b = prepare(testing::pure_canonical<Rational>(delta, k, k, a, a));
            for (double x0 : {0.1, 0.05, 0.01}) {
                for (Side s : {Side::upper, Side::lower}) {
                    const double phi = half_return(b.nf, b.cls, s, x0, cfg);
                    CHECK(std::abs(phi + x0) < 10 * cfg.event_tol);
                    const double back = half_return(b.nf, b.cls, s, phi, cfg);
                    CHECK(std::abs(back - x0) < 20 * cfg.event_tol);
                }
                CHECK(std::abs(displacement(b.nf, b.cls, x0, cfg)) < 10 * cfg.event_tol);
            }
        }
}

TEST_CASE("half-return respects the involution on random fixtures") {
    FixtureGen gen(909);
    FixtureGen::Options opt;
    opt.small_coefficients = true;
    opt.rescale_unit = false;
    opt.max_k = 2;
    IntegratorConfig cfg;
    int done = 0;
    for (int trial = 0; trial < 8; ++trial) {
        auto fx = gen.monodromic(opt);
        auto b = prepare(fx.field);
        const double x0 = 0.05;
        for (Side s : {Side::upper, Side::lower}) {
            const double phi = half_return(b.nf, b.cls, s, x0, cfg);
            CHECK(phi < 0);
            const double back = half_return(b.nf, b.cls, s, phi, cfg);
            CHECK(std::abs(back - x0) < 20 * cfg.event_tol);
        }
        ++done;
    }
    CHECK(done == 8);
}

TEST_CASE("displacement sign tracks the first Lyapunov coefficient") {
    IntegratorConfig cfg;
    // example 2 at lambda = 2 is a stable focus: displacement < 0 near 0
    auto b = prepare(testing::example2<Rational>(1, Rational(2)));
    for (double x0 : {0.05, 0.1, 0.15}) {
        const double d = displacement(b.nf, b.cls, x0, cfg);
        CHECK(d < 0);
    }

    FixtureGen gen(4321);
    FixtureGen::Options opt;
    opt.small_coefficients = true;
    opt.rescale_unit = false;
    opt.max_k = 1;
    int checked = 0;
    for (int trial = 0; trial < 6; ++trial) {
        auto fx = gen.monodromic(opt);
        auto bb = prepare(fx.field);
        auto cf = canonical_form(fx.field, bb.cls, canonical_order_for(4, bb.cls.k_plus, bb.cls.k_minus));
        auto res = lyapunov_coefficients(cf, 4);
        if (!res.first_nonzero || res.first_nonzero->first != 2) continue;
        const double v2 = to_double(res.V_at(2));
        if (std::abs(v2) < 0.05) continue;
        const double x0 = 0.01;
        const double d = displacement(bb.nf, bb.cls, x0, cfg);
        CHECK(d * v2 > 0);
        CHECK(std::abs(d / (v2 * x0 * x0) - 1.0) < 0.2);
        ++checked;
    }
    CHECK(checked >= 3);
}

TEST_CASE("integrator self-consistency and cross-method agreement") {
    auto b = prepare(testing::example2<Rational>(1, Rational(3, 2)));
    const double x0 = 0.1;

    IntegratorConfig coarse;
    coarse.abs_tol = coarse.rel_tol = 1e-9;
    IntegratorConfig fine;
    fine.abs_tol = fine.rel_tol = 5e-10;
    const double pc = half_return(b.nf, b.cls, Side::upper, x0, coarse);
    const double pf = half_return(b.nf, b.cls, Side::upper, x0, fine);
    CHECK(std::abs(pc - pf) < 1e-9);

    IntegratorConfig rk;
    rk.method = IntegratorMethod::fixed_rk4;
    rk.rk4_steps = 40000;
    const double pr = half_return_dispatch(b.nf, b.cls, Side::upper, x0, rk);
    CHECK(std::abs(pr - pf) < 1e-8);
}

TEST_CASE("returning arc has a single vertical turning point") {
    // dense fixed-step sampling along the arc: the vertical speed changes
    // sign exactly once between departure and return
    auto b = prepare(testing::example2<Rational>(1, Rational(1)));
    const double x0 = 0.08;
    const auto& vf = b.nf.side(Side::upper);
    const int sigma = -b.cls.lie_sign(Side::upper) * (vf.Y.eval(x0, 0.0) > 0 ? 1 : -1);
    auto rhs = [&](const double&, const Vec2<double>& u, Vec2<double>& du) {
        du[0] = sigma * vf.X.eval(u[0], u[1]);
        du[1] = sigma * vf.Y.eval(u[0], u[1]);
    };
    Vec2<double> u{x0, 0.0};
    double t = 0;
    const double dt = 1e-4;
    int flips = 0;
    double prev_rate = sigma * vf.Y.eval(x0, 0.0);
    for (int n = 0; n < 100000; ++n) {
        u = rk4_integrate(rhs, u, t, t + dt, 1);
        t += dt;
        const double rate = sigma * vf.Y.eval(u[0], u[1]);
        if (rate * prev_rate < 0) ++flips;
        prev_rate = rate;
        if (n > 0 && u[1] == 0) break;
        if (n > 0 && ((u[1] > 0) != (sigma * vf.Y.eval(x0, 0.0) > 0))) break; // crossed back
    }
    CHECK(flips == 1);
}

TEST_CASE("cycle location for the example-2 family") {
    IntegratorConfig cfg;
    // lambda slightly under the critical value: one stable cycle near sqrt(eps/2)
    auto b = prepare(testing::example2<Rational>(1, Rational(198, 100)));
    auto found = find_cycles(b.nf, b.cls, 0.02, 0.3, 60, cfg);
    REQUIRE(found.cycles.size() == 1);
    CHECK(found.cycles[0].stable);
    CHECK(std::abs(found.cycles[0].x_star / 0.1 - 1.0) < 0.25);

    // past the critical value: no cycles
    auto b2 = prepare(testing::example2<Rational>(1, Rational(202, 100)));
    auto none = find_cycles(b2.nf, b2.cls, 0.02, 0.3, 40, cfg);
    CHECK(none.cycles.empty());
    CHECK_FALSE(none.possible_center);

    // symmetric pair: identically zero displacement, flagged as possible center
    auto bc = prepare(testing::pure_canonical<Rational>(1, 1, 1, Rational(-1), Rational(-1)));
    auto center = find_cycles(bc.nf, bc.cls, 0.02, 0.2, 20, cfg);
    CHECK(center.cycles.empty());
    CHECK(center.possible_center);
}

TEST_CASE("time-rescaled fields return to the same point") {
    // multiplying a half by a large positive constant changes the speed,
    // not the orbits; the crossing must not be skipped
    IntegratorConfig cfg;
    auto field = testing::pure_canonical<Rational>(1, 1, 1, Rational(-1), Rational(-1));
    field.upper.X = field.upper.X.scaled(Rational(40));
    field.upper.Y = field.upper.Y.scaled(Rational(40));
    auto b = prepare(field);
    const double phi = half_return(b.nf, b.cls, Side::upper, 0.05, cfg);
    CHECK(std::abs(phi + 0.05) < 10 * cfg.event_tol);
}

TEST_CASE("failure modes: bounding box, degenerate start") {
    auto b = prepare(testing::example2<Rational>(1, Rational(1)));
    IntegratorConfig tiny;
    tiny.bound = 0.05;
    CHECK_THROWS_AS(half_return(b.nf, b.cls, Side::upper, 0.2, tiny), NoReturn);
    IntegratorConfig cfg;
    CHECK_THROWS_AS(half_return(b.nf, b.cls, Side::upper, 0.0, cfg), DegenerateCrossing);
}

TEST_CASE("high-precision integration path") {
    PrecisionScope scope(30);
    auto field = testing::example2<Rational>(1, Rational(19, 10));
    auto cls = classify(field);
    auto nf = NumericField<Real>::from(field);
    IntegratorConfig cfg = IntegratorConfig::high_precision(30);
    const Real x0("0.03125");
    const Real phi = half_return(nf, cls, Side::upper, x0, cfg);
    const Real back = half_return(nf, cls, Side::upper, phi, cfg);
    CHECK(abs(back - x0) < Real("1e-20"));
}
