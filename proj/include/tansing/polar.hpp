// Generalized trigonometric functions and the polar chart that
// desingularizes the tangency.
//
// (Cs, Sn) solve Cs' = -Sn^{2p-1}, Sn' = Cs^{2q-1} with
// Cs(0) = (1/p)^{1/2q}, Sn(0) = 0; they are T-periodic with
//
//   T = 2 p^{-1/2q} q^{-1/2p} Int_0^1 (1-s)^{(1-2p)/2p} s^{(1-2q)/2q} ds,
//
// an endpoint-singular integral evaluated by tanh-sinh quadrature (the
// double-exponential substitution absorbs the algebraic singularities).
// Cs/Sn themselves come from dense-output integration on [0, T/2] plus
// the even/odd symmetries.
//
// In the chart x = R Cs(theta), y = R^{2k} Sn(theta) (p = 1, q = 2k) the
// canonical side with vertical data (a, f, g) and horizontal speed d
// becomes theta' = F/R, R' = G/R with
//
//   F(R,theta) = a Cs^{2k} - 2 d k Sn + R Cs (Sn g + Cs^{2k} f)
//   G(R,theta) = R Cs^{2k-1} (d Cs^{2k} + a Sn) + R^2 Sn (Sn g + Cs^{2k} f)
//
// so the half-return map is the theta-flow of dR/dtheta = G/F across
// [0, T/2]. Sides whose arcs live below the section are reflected into
// this normal form first (a -> -a, f -> -f, g(x,y) -> g(x,-y)).
#pragma once

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "tansing/canonical.hpp"
#include "tansing/errors.hpp"
#include "tansing/halfreturn.hpp"
#include "tansing/integrate.hpp"
#include "tansing/numbers.hpp"

namespace tansing {

class GenTrig {
public:
    GenTrig(int p, int q, double tol) : p_(p), q_(q), tol_(tol) {
        if (p < 1 || q < 1) throw UsageError("gen_trig requires p, q >= 1");
        if (tol <= 0) throw UsageError("gen_trig requires tol > 0");
        compute_period();
        integrate_half_period();
    }

    int p() const { return p_; }
    int q() const { return q_; }
    double period() const { return T_; }
    double tol() const { return tol_; }

    // Cs and Sn at any theta in [-T/2, T/2] (extended periodically)
    std::pair<double, double> eval(double theta) const {
        double th = std::fmod(theta + T_ / 2, T_);
        if (th < 0) th += T_;
        th -= T_ / 2; // now in [-T/2, T/2)
        if (th < 0) {
            auto [c, s] = eval_nonneg(-th);
            return {c, -s}; // Cs even, Sn odd
        }
        return eval_nonneg(th);
    }

    double cs(double theta) const { return eval(theta).first; }
    double sn(double theta) const { return eval(theta).second; }

    // largest deviation of p Cs^{2q} + q Sn^{2p} from 1 over a dense grid
    double identity_residual(int n_samples = 2048) const {
        double worst = 0;
        for (int i = 0; i <= n_samples; ++i) {
            const double th = -T_ / 2 + T_ * i / n_samples;
            auto [c, s] = eval(th);
            const double r = p_ * std::pow(c, 2 * q_) + q_ * std::pow(s, 2 * p_) - 1.0;
            worst = std::max(worst, std::abs(r));
        }
        return worst;
    }

    // locate a zero of Cs near the given seed by bisection
    double cs_zero_near(double seed) const {
        double a = seed - T_ / 8, b = seed + T_ / 8;
        double fa = cs(a), fb = cs(b);
        if (fa * fb > 0) throw DomainError("cs_zero_near: no sign change around seed");
        for (int it = 0; it < 200 && (b - a) > tol_; ++it) {
            const double m = (a + b) / 2;
            const double fm = cs(m);
            if (fa * fm <= 0) {
                b = m;
                fb = fm;
            } else {
                a = m;
                fa = fm;
            }
        }
        return (a + b) / 2;
    }

private:
    void compute_period() {
        // T = 2 p^{-1/2q} q^{-1/2p} * B(1/2p, 1/2q), as a quadrature
        const double ea = (1.0 - 2.0 * p_) / (2.0 * p_);
        const double eb = (1.0 - 2.0 * q_) / (2.0 * q_);
        boost::math::quadrature::tanh_sinh<double> quad;
        double err = 0, l1 = 0;
        std::size_t levels = 0;
        const double integral = quad.integrate(
            [&](double s, double sc) {
                const double one_minus = (s > 0.5 && sc > 0) ? sc : 1.0 - s;
                return std::pow(one_minus, ea) * std::pow(s, eb);
            },
            0.0, 1.0, tol_, &err, &l1, &levels);
        if (!(err <= 10 * tol_ * l1 + 10 * tol_))
            throw QuadratureFailure("period integral did not converge to the requested tolerance");
        T_ = 2.0 * std::pow(double(p_), -1.0 / (2 * q_)) * std::pow(double(q_), -1.0 / (2 * p_)) * integral;
    }

    void integrate_half_period() {
        auto rhs = [this](const double&, const Vec2<double>& u, Vec2<double>& du) {
            du[0] = -std::pow(u[1], 2 * p_ - 1);
            du[1] = std::pow(u[0], 2 * q_ - 1);
        };
        Dopri5<double, decltype(rhs)> stepper(rhs, tol_ / 10, tol_ / 10);
        const Vec2<double> u0{std::pow(1.0 / p_, 1.0 / (2 * q_)), 0.0};
        stepper.start(0.0, u0, 1e-3);
        steps_.clear();
        const double half = T_ / 2;
        while (stepper.t() < half) {
            stepper.clamp_h(2e-3); // keep the dense interpolant at the integration tolerance
            if (stepper.t() + stepper.h() > half) stepper.set_h(half - stepper.t());
            steps_.push_back(stepper.step());
            if (steps_.size() > 4000000) throw QuadratureFailure("gen_trig: step budget exhausted");
        }
    }

    std::pair<double, double> eval_nonneg(double th) const {
        if (steps_.empty()) throw InternalError("gen_trig: empty dense table");
        if (th <= 0) return {steps_.front().u0[0], steps_.front().u0[1]};
        auto it = std::lower_bound(steps_.begin(), steps_.end(), th,
                                   [](const StepRecord<double>& r, double t) { return r.t1 < t; });
        if (it == steps_.end()) it = std::prev(steps_.end());
        const StepRecord<double>& rec = *it;
        const double h = rec.t1 - rec.t0;
        const double theta01 = h > 0 ? std::clamp((th - rec.t0) / h, 0.0, 1.0) : 0.0;
        Vec2<double> v = hermite_eval(rec, theta01);
        return {v[0], v[1]};
    }

    int p_, q_;
    double tol_;
    double T_ = 0;
    std::vector<StepRecord<double>> steps_;
};

inline GenTrig gen_trig(int p, int q, double tol = 1e-12) { return GenTrig(p, q, tol); }

// one side's canonical data normalized so its returning arcs lie in the
// upper half-plane of the chart
struct PolarSideData {
    int k = 1;
    int delta_eff = 1;
    double a = 0;
    std::vector<double> f;           // univariate coefficients
    std::vector<std::vector<double>> g; // g[i][j]
    double f_eval(double x) const {
        double acc = 0;
        for (std::size_t i = f.size(); i-- > 0;) acc = acc * x + f[i];
        return acc;
    }
    double g_eval(double x, double y) const {
        double acc = 0;
        for (std::size_t j = g.empty() ? 0 : g[0].size(); j-- > 0;) {
            double row = 0;
            for (std::size_t i = g.size(); i-- > 0;) row = row * x + g[i][j];
            acc = acc * y + row;
        }
        return acc;
    }
};

template <class F>
PolarSideData polar_side_data(const CanonicalForm<F>& cf, Side side) {
    PolarSideData d;
    d.k = cf.k(side);
    d.delta_eff = cf.side_delta(side);
    d.a = FieldTraits<F>::to_double(cf.a(side));
    const UniSeries<F>& f = cf.f(side);
    for (int i = 0; i <= f.order(); ++i) d.f.push_back(FieldTraits<F>::to_double(f.coeff(i)));
    const BiSeries<F>& g = cf.g(side);
    d.g.assign(static_cast<std::size_t>(g.order()) + 1,
               std::vector<double>(static_cast<std::size_t>(g.order()) + 1, 0.0));
    for (int dd = 0; dd <= g.order(); ++dd)
        for (int i = 0; i <= dd; ++i)
            d.g[static_cast<std::size_t>(i)][static_cast<std::size_t>(dd - i)] =
                FieldTraits<F>::to_double(g.coeff(i, dd - i));
    if (d.delta_eff * d.a > 0) {
        // reflect (x,y) -> (x,-y): arcs move to the upper half of the chart
        d.a = -d.a;
        for (double& c : d.f) c = -c;
        for (std::size_t i = 0; i < d.g.size(); ++i)
            for (std::size_t j = 1; j < d.g[i].size(); j += 2) d.g[i][j] = -d.g[i][j];
    }
    return d;
}

struct PolarRhsValue {
    double F = 0;
    double G = 0;
};

// the chart right-hand side (F, G) at (R, theta); VanishingF when the
// angular speed falls under the guard
inline PolarRhsValue polar_rhs_eval(const PolarSideData& d, const GenTrig& trig, double R, double theta,
                                    double guard = 1e-9) {
    const auto [c, s] = trig.eval(theta);
    const double c2k = std::pow(c, 2 * d.k);
    const double x = R * c;
    const double y = std::pow(R, 2 * d.k) * s;
    const double mix = s * d.g_eval(x, y) + c2k * d.f_eval(x);
    PolarRhsValue v;
    v.F = d.a * c2k - 2.0 * d.delta_eff * d.k * s + R * c * mix;
    v.G = R * std::pow(c, 2 * d.k - 1) * (d.delta_eff * c2k + d.a * s) + R * R * s * mix;
    if (std::abs(v.F) < guard) throw VanishingF("polar angular speed under the guard threshold");
    return v;
}

// spec-shaped accessor: (R, theta) -> (F, G) for the requested side
template <class F>
auto polar_rhs(const CanonicalForm<F>& cf, Side side, const GenTrig& trig) {
    PolarSideData d = polar_side_data(cf, side);
    return [d, &trig](double R, double theta) { return polar_rhs_eval(d, trig, R, theta); };
}

// half-return through the polar chart; accurate arbitrarily close to the
// tangency because no event detection is involved
inline double polar_half_return(const PolarSideData& d, const GenTrig& trig, double x0,
                                const IntegratorConfig& cfg) {
    if (x0 == 0) return 0;
    auto rhs = [&](const double& theta, const Vec2<double>& u, Vec2<double>& du) {
        const PolarRhsValue v = polar_rhs_eval(d, trig, u[0], theta);
        du[0] = v.G / v.F;
        du[1] = 0;
    };
    const double half = trig.period() / 2;
    if (x0 > 0) {
        Vec2<double> out = integrate_to(rhs, Vec2<double>{x0, 0.0}, 0.0, half, cfg.abs_tol, cfg.rel_tol);
        return -out[0];
    }
    Vec2<double> out = integrate_to(rhs, Vec2<double>{-x0, 0.0}, half, 0.0, cfg.abs_tol, cfg.rel_tol);
    return out[0];
}

template <class F>
double polar_half_return(const CanonicalForm<F>& cf, Side side, const GenTrig& trig, double x0,
                         const IntegratorConfig& cfg) {
    return polar_half_return(polar_side_data(cf, side), trig, x0, cfg);
}

// Half-return dispatcher honoring cfg.polar_threshold: section points
// with |x0| under the threshold go through the polar chart (no event
// detection degradation near the tangency), everything else through
// Cartesian integration.
class PolarRouter {
public:
    template <class F>
    PolarRouter(const NumericField<double>& nf, const TangencyClassification& cls,
                const CanonicalForm<F>& cf, const IntegratorConfig& cfg)
        : nf_(nf), cls_(cls), cfg_(cfg) {
        if (cfg.polar_threshold > 0) {
            up_ = polar_side_data(cf, Side::upper);
            lo_ = polar_side_data(cf, Side::lower);
            trig_up_.emplace(1, 2 * cf.k_plus, std::min(cfg.abs_tol, 1e-12));
            trig_lo_ = cf.k_minus == cf.k_plus
                           ? trig_up_
                           : std::optional<GenTrig>(GenTrig(1, 2 * cf.k_minus, std::min(cfg.abs_tol, 1e-12)));
        }
    }

    double half_return(Side side, double x0) const {
        if (trig_up_ && std::abs(x0) < cfg_.polar_threshold) {
            const PolarSideData& d = side == Side::upper ? up_ : lo_;
            const GenTrig& trig = side == Side::upper ? *trig_up_ : *trig_lo_;
            return polar_half_return(d, trig, x0, cfg_);
        }
        return tansing::half_return(nf_, cls_, side, x0, cfg_);
    }

    double displacement(double x0) const {
        return cls_.delta * (half_return(Side::upper, x0) - half_return(Side::lower, x0));
    }

private:
    NumericField<double> nf_;
    TangencyClassification cls_;
    IntegratorConfig cfg_;
    PolarSideData up_, lo_;
    std::optional<GenTrig> trig_up_, trig_lo_;
};

} // namespace tansing
