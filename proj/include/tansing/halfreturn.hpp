// Numerical oracle for the half-return maps.
//
// Trajectories of one side's polynomial field are integrated from a
// section point (x0, 0); the side's returning arc lives in the
// half-plane {lie_sign * y < 0}, so the initial time direction is chosen
// to enter it. The next section crossing is bracketed by sign changes
// of y over accepted steps and then landed exactly by an endgame
// integration in y (dx/dy = X/Y), which inherits the integrator's
// accuracy. Starting exactly on the event surface is harmless because
// the event is armed only after the first accepted step.
#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "tansing/classify.hpp"
#include "tansing/errors.hpp"
#include "tansing/integrate.hpp"
#include "tansing/numbers.hpp"
#include "tansing/poly.hpp"

namespace tansing {

template <class S>
S scalar_cast(const Rational& q) {
    if constexpr (std::is_same_v<S, double>)
        return to_double(q);
    else
        return S(q);
}
template <class S>
S scalar_cast(const Real& r) {
    if constexpr (std::is_same_v<S, double>)
        return to_double(r);
    else
        return S(r);
}

// dense bivariate polynomial for fast numeric evaluation (Horner in y,
// then in x per row)
template <class S>
class NumericPoly2 {
public:
    NumericPoly2() : nx_(1), ny_(1), c_(1, S(0)) {}

    template <class F>
    static NumericPoly2 from(const Poly2<F>& p) {
        NumericPoly2 out;
        int dx = 0, dy = 0;
        for (const auto& [k, c] : p.terms()) {
            dx = std::max(dx, k.first);
            dy = std::max(dy, k.second);
        }
        out.nx_ = dx + 1;
        out.ny_ = dy + 1;
        out.c_.assign(static_cast<std::size_t>(out.nx_) * static_cast<std::size_t>(out.ny_), S(0));
        for (const auto& [k, c] : p.terms())
            out.at(k.first, k.second) += scalar_cast<S>(c);
        return out;
    }

    S eval(const S& x, const S& y) const {
        S acc(0);
        for (int j = ny_ - 1; j >= 0; --j) {
            S row(0);
            for (int i = nx_ - 1; i >= 0; --i) row = row * x + c_[idx(i, j)];
            acc = acc * y + row;
        }
        return acc;
    }

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(i);
    }
    S& at(int i, int j) { return c_[idx(i, j)]; }

    int nx_, ny_;
    std::vector<S> c_;
};

template <class S>
struct NumericVF {
    NumericPoly2<S> X, Y;
};

template <class S>
struct NumericField {
    NumericVF<S> upper, lower;

    template <class F>
    static NumericField from(const PiecewiseField<F>& f) {
        return NumericField{{NumericPoly2<S>::from(f.upper.X), NumericPoly2<S>::from(f.upper.Y)},
                            {NumericPoly2<S>::from(f.lower.X), NumericPoly2<S>::from(f.lower.Y)}};
    }

    const NumericVF<S>& side(Side s) const { return s == Side::upper ? upper : lower; }
};

enum class IntegratorMethod { adaptive, fixed_rk4 };

struct IntegratorConfig {
    IntegratorMethod method = IntegratorMethod::adaptive;
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    double event_tol = 1e-10;
    int max_steps = 200000;
    double bound = 2.0;          // NoReturn once |x| or |y| exceeds this
    double polar_threshold = 0.0; // |x0| below this uses the polar chart (0 = never)
    int rk4_steps = 20000;        // fixed-step budget for the cross-check method

    static IntegratorConfig high_precision(unsigned digits) {
        IntegratorConfig cfg;
        cfg.abs_tol = cfg.rel_tol = std::pow(10.0, -static_cast<double>(digits) + 5.0);
        cfg.event_tol = std::pow(10.0, -static_cast<double>(digits) + 8.0);
        return cfg;
    }
};

namespace detail {

// endgame: from a state strictly approaching the section, integrate
// dx/dy = X/Y down to y = 0 and return the landing x
template <class S>
S land_on_section(const NumericVF<S>& vf, int sigma, const Vec2<S>& from, const IntegratorConfig& cfg) {
    auto rhs = [&](const S& y, const Vec2<S>& u, Vec2<S>& du) {
        // u = (x, t); derivative in y
        const S yv = S(sigma) * vf.Y.eval(u[0], y);
        du[0] = S(sigma) * vf.X.eval(u[0], y) / yv;
        du[1] = S(1) / yv;
    };
    Vec2<S> u{from[0], S(0)};
    const S y0 = from[1];
    Vec2<S> out = integrate_to(rhs, u, y0, S(0), S(cfg.abs_tol), S(cfg.rel_tol));
    return out[0];
}

template <class S>
bool outside_bound(const Vec2<S>& u, double bound) {
    using std::abs;
    return abs(u[0]) > S(bound) || abs(u[1]) > S(bound);
}

} // namespace detail

// x-coordinate of the next section crossing of the side's orbit through
// (x0, 0); an involution of x0 fixing 0
template <class S>
S half_return(const NumericField<S>& field, const TangencyClassification& cls, Side side, const S& x0,
              const IntegratorConfig& cfg) {
    using std::abs;
    if (!cls.monodromic) throw NotMonodromic("half_return requires a monodromic classification");
    const NumericVF<S>& vf = field.side(side);
    const S y_rate = vf.Y.eval(x0, S(0));
    if (abs(y_rate) <= S(cfg.event_tol) * S(cfg.event_tol))
        throw DegenerateCrossing("Y(x0,0) ~ 0: starting point is itself tangential");
    // enter the half-plane holding the returning arcs
    const int sigma = -cls.lie_sign(side) * (y_rate > 0 ? 1 : -1);

    auto rhs = [&](const S&, const Vec2<S>& u, Vec2<S>& du) {
        du[0] = S(sigma) * vf.X.eval(u[0], u[1]);
        du[1] = S(sigma) * vf.Y.eval(u[0], u[1]);
    };

    // the returning arc takes time ~ 2|x0|/|X|; cap steps well under it
    // so the crossing cannot be skipped while the event is still unarmed
    using std::max;
    const S speed = max(S(1), abs(vf.X.eval(x0, S(0))));
    const S hcap = (abs(x0) + S(cfg.event_tol)) / (4 * speed);
    Dopri5<S, decltype(rhs)> stepper(rhs, S(cfg.abs_tol), S(cfg.rel_tol));
    stepper.start(S(0), Vec2<S>{x0, S(0)}, hcap / 4);

    for (int n = 0; n < cfg.max_steps; ++n) {
        stepper.clamp_h(hcap);
        StepRecord<S> rec = stepper.step();
        if (detail::outside_bound(rec.u1, cfg.bound))
            throw NoReturn("trajectory left the bounding box before returning to the section");
        if (n == 0) continue; // event armed once the orbit has left the section
        if (rec.u0[1] * rec.u1[1] < 0 || rec.u1[1] == 0) {
            // shrink the bracket by re-integration until y approaches 0 monotonically
            S ta = rec.t0;
            Vec2<S> ua = rec.u0;
            S tb = rec.t1;
            for (int halving = 0; halving < 80; ++halving) {
                Vec2<S> fa;
                rhs(ta, ua, fa);
                if (ua[1] * fa[1] < 0) return detail::land_on_section(field.side(side), sigma, ua, cfg);
                const S tm = ta + (tb - ta) / 2;
                Vec2<S> um = integrate_to(rhs, ua, ta, tm, S(cfg.abs_tol), S(cfg.rel_tol));
                if (ua[1] * um[1] > 0) {
                    ta = tm;
                    ua = um;
                } else {
                    tb = tm;
                }
            }
            throw DegenerateCrossing("section crossing could not be isolated");
        }
    }
    throw NoReturn("no section crossing within the step budget");
}

// fixed-step RK4 variant of half_return (cross-check path)
template <class S>
S half_return_rk4(const NumericField<S>& field, const TangencyClassification& cls, Side side,
                  const S& x0, const IntegratorConfig& cfg) {
    using std::abs;
    const NumericVF<S>& vf = field.side(side);
    const S y_rate = vf.Y.eval(x0, S(0));
    if (abs(y_rate) <= S(cfg.event_tol) * S(cfg.event_tol))
        throw DegenerateCrossing("Y(x0,0) ~ 0: starting point is itself tangential");
    const int sigma = -cls.lie_sign(side) * (y_rate > 0 ? 1 : -1);
    auto rhs = [&](const S&, const Vec2<S>& u, Vec2<S>& du) {
        du[0] = S(sigma) * vf.X.eval(u[0], u[1]);
        du[1] = S(sigma) * vf.Y.eval(u[0], u[1]);
    };
    using std::max;
    const S dt = abs(x0) / (64 * max(S(1), abs(vf.X.eval(x0, S(0)))));
    Vec2<S> u{x0, S(0)};
    S t(0);
    for (int n = 0; n < cfg.rk4_steps; ++n) {
        Vec2<S> next = rk4_integrate(rhs, u, t, t + dt, 1);
        if (detail::outside_bound(next, cfg.bound)) throw NoReturn("trajectory left the bounding box");
        if (n > 0 && u[1] * next[1] < 0) {
            Vec2<S> fu;
            rhs(t, u, fu);
            if (u[1] * fu[1] < 0) return detail::land_on_section(vf, sigma, u, cfg);
            // fall back to halving the straddling step until the approach is monotone
            S ta = t;
            Vec2<S> ua = u;
            S h = dt;
            for (int halving = 0; halving < 60; ++halving) {
                h = h / 2;
                Vec2<S> um = rk4_integrate(rhs, ua, ta, ta + h, 1);
                if (ua[1] * um[1] > 0) {
                    ta = ta + h;
                    ua = um;
                }
                Vec2<S> fa;
                rhs(ta, ua, fa);
                if (ua[1] * fa[1] < 0) return detail::land_on_section(vf, sigma, ua, cfg);
            }
            throw DegenerateCrossing("section crossing could not be isolated (rk4)");
        }
        u = next;
        t = t + dt;
    }
    throw NoReturn("no section crossing within the fixed-step budget");
}

template <class S>
S half_return_dispatch(const NumericField<S>& field, const TangencyClassification& cls, Side side,
                       const S& x0, const IntegratorConfig& cfg) {
    return cfg.method == IntegratorMethod::fixed_rk4 ? half_return_rk4(field, cls, side, x0, cfg)
                                                     : half_return(field, cls, side, x0, cfg);
}

// delta (phi+(x0) - phi-(x0)); zero exactly on closed orbits
template <class S>
S displacement(const NumericField<S>& field, const TangencyClassification& cls, const S& x0,
               const IntegratorConfig& cfg) {
    const S plus = half_return_dispatch(field, cls, Side::upper, x0, cfg);
    const S minus = half_return_dispatch(field, cls, Side::lower, x0, cfg);
    return S(cls.delta) * (plus - minus);
}

struct CycleRoot {
    double x_star = 0;
    bool stable = false;
};

struct CycleSearch {
    std::vector<CycleRoot> cycles;
    bool possible_center = false;
    int valid_samples = 0;
    int failed_samples = 0;
};

// bracket sign changes of the displacement on a linear grid and refine
// each by bisection; stability from the bracket signs (decreasing
// displacement means stable)
template <class S>
CycleSearch find_cycles(const NumericField<S>& field, const TangencyClassification& cls, const S& x_lo,
                        const S& x_hi, int n_samples, const IntegratorConfig& cfg) {
    using std::abs;
    if (n_samples < 2) throw UsageError("find_cycles: need at least 2 samples");
    CycleSearch out;
    std::vector<std::optional<S>> delta(static_cast<std::size_t>(n_samples));
    std::vector<S> grid(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        grid[static_cast<std::size_t>(i)] = x_lo + (x_hi - x_lo) * i / (n_samples - 1);
        try {
            delta[static_cast<std::size_t>(i)] = displacement(field, cls, grid[static_cast<std::size_t>(i)], cfg);
            ++out.valid_samples;
        } catch (const DomainError&) {
            ++out.failed_samples;
        }
    }
    if (out.valid_samples == 0) throw NoReturn("displacement failed at every grid sample");

    const S floor = S(50) * S(cfg.event_tol);
    S max_abs(0);
    for (const auto& d : delta)
        if (d && abs(*d) > max_abs) max_abs = abs(*d);
    if (max_abs < floor) {
        out.possible_center = true; // no isolated roots resolvable above the noise floor
        return out;
    }

    for (int i = 0; i + 1 < n_samples; ++i) {
        const auto& da = delta[static_cast<std::size_t>(i)];
        const auto& db = delta[static_cast<std::size_t>(i + 1)];
        if (!da || !db) continue;
        if (*da * *db >= 0) continue;
        if (std::max(abs(*da), abs(*db)) < floor) continue; // sign flip inside the noise band
        S a = grid[static_cast<std::size_t>(i)], b = grid[static_cast<std::size_t>(i + 1)];
        S fa = *da;
        for (int it = 0; it < 60 && abs(b - a) > S(10) * S(cfg.event_tol); ++it) {
            const S m = a + (b - a) / 2;
            const S fm = displacement(field, cls, m, cfg);
            if (fa * fm > 0) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        CycleRoot root;
        const S xm = a + (b - a) / 2;
        if constexpr (std::is_same_v<S, double>)
            root.x_star = xm;
        else
            root.x_star = xm.template convert_to<double>();
        root.stable = (*da > 0); // displacement decreasing through the root
        out.cycles.push_back(root);
    }
    return out;
}

// least-squares slope of log(r) against log(x); the agreement order of a
// truncated series against the integrated map
inline double fit_power_law_slope(const std::vector<std::pair<double, double>>& pts) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& [x, r] : pts) {
        if (x <= 0 || r <= 0) continue;
        const double lx = std::log(x), ly = std::log(r);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) throw UsageError("fit_power_law_slope: need at least two positive points");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace tansing
