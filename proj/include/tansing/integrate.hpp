// Planar ODE integration: an adaptive embedded Dormand-Prince 5(4)
// stepper with local error control, and a fixed-step classical RK4 used
// as a cross-check method. Both are generic over the scalar type, so
// the same driver runs in double and in MPFR precision.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "tansing/errors.hpp"
#include "tansing/numbers.hpp"

namespace tansing {

template <class S>
using Vec2 = std::array<S, 2>;

template <class S>
struct StepRecord {
    S t0{}, t1{};
    Vec2<S> u0{}, u1{};
    Vec2<S> f0{}, f1{}; // derivatives at the endpoints (FSAL)
};

// cubic Hermite evaluation on a step record, theta in [0,1]
template <class S>
Vec2<S> hermite_eval(const StepRecord<S>& st, const S& theta) {
    const S h = st.t1 - st.t0;
    const S t2 = theta * theta;
    const S t3 = t2 * theta;
    const S h00 = 2 * t3 - 3 * t2 + 1;
    const S h10 = t3 - 2 * t2 + theta;
    const S h01 = -2 * t3 + 3 * t2;
    const S h11 = t3 - t2;
    Vec2<S> out;
    for (int i = 0; i < 2; ++i)
        out[static_cast<std::size_t>(i)] = h00 * st.u0[static_cast<std::size_t>(i)] +
                                           h10 * h * st.f0[static_cast<std::size_t>(i)] +
                                           h01 * st.u1[static_cast<std::size_t>(i)] +
                                           h11 * h * st.f1[static_cast<std::size_t>(i)];
    return out;
}

// Dormand-Prince 5(4) with FSAL. Rhs: void(const S& t, const Vec2<S>&, Vec2<S>&).
template <class S, class Rhs>
class Dopri5 {
public:
    Dopri5(Rhs rhs, S abs_tol, S rel_tol) : rhs_(std::move(rhs)), atol_(abs_tol), rtol_(rel_tol) {}

    void start(const S& t0, const Vec2<S>& u0, const S& h0) {
        t_ = t0;
        u_ = u0;
        h_ = h0;
        rhs_(t_, u_, f_);
    }

    const S& t() const { return t_; }
    const Vec2<S>& u() const { return u_; }
    const S& h() const { return h_; }
    void set_h(const S& h) { h_ = h; }
    void clamp_h(const S& hmax) {
        if (h_ > hmax) h_ = hmax;
    }

    // one accepted step (retries internally on error rejections)
    StepRecord<S> step() {
        using std::abs;
        using std::max;
        using std::pow;
        using std::sqrt;
        for (int attempt = 0; attempt < 64; ++attempt) {
            Vec2<S> k2, k3, k4, k5, k6, k7, utmp, u5;
            auto axpy = [&](Vec2<S>& out, std::initializer_list<std::pair<S, const Vec2<S>*>> terms) {
                for (int i = 0; i < 2; ++i) {
                    S acc = u_[static_cast<std::size_t>(i)];
                    for (const auto& [c, v] : terms)
                        acc += h_ * c * (*v)[static_cast<std::size_t>(i)];
                    out[static_cast<std::size_t>(i)] = acc;
                }
            };
            axpy(utmp, {{S(1) / 5, &f_}});
            rhs_(t_ + h_ / 5, utmp, k2);
            axpy(utmp, {{S(3) / 40, &f_}, {S(9) / 40, &k2}});
            rhs_(t_ + h_ * 3 / 10, utmp, k3);
            axpy(utmp, {{S(44) / 45, &f_}, {S(-56) / 15, &k2}, {S(32) / 9, &k3}});
            rhs_(t_ + h_ * 4 / 5, utmp, k4);
            axpy(utmp, {{S(19372) / 6561, &f_}, {S(-25360) / 2187, &k2}, {S(64448) / 6561, &k3}, {S(-212) / 729, &k4}});
            rhs_(t_ + h_ * 8 / 9, utmp, k5);
            axpy(utmp, {{S(9017) / 3168, &f_}, {S(-355) / 33, &k2}, {S(46732) / 5247, &k3}, {S(49) / 176, &k4}, {S(-5103) / 18656, &k5}});
            rhs_(t_ + h_, utmp, k6);
            axpy(u5, {{S(35) / 384, &f_}, {S(500) / 1113, &k3}, {S(125) / 192, &k4}, {S(-2187) / 6784, &k5}, {S(11) / 84, &k6}});
            rhs_(t_ + h_, u5, k7); // FSAL

            // embedded 4th-order error estimate
            S err(0);
            for (int i = 0; i < 2; ++i) {
                const std::size_t ii = static_cast<std::size_t>(i);
                const S e = h_ * (S(71) / 57600 * f_[ii] + S(-71) / 16695 * k3[ii] + S(71) / 1920 * k4[ii] +
                                  S(-17253) / 339200 * k5[ii] + S(22) / 525 * k6[ii] + S(-1) / 40 * k7[ii]);
                const S sc = atol_ + rtol_ * max(abs(u_[ii]), abs(u5[ii]));
                const S r = e / sc;
                err += r * r;
            }
            err = sqrt(err / 2);

            S fac = S(9) / 10 * pow(max(err, S(1) / S(1000000000)), S(-1) / 5);
            fac = std::min(S(5), std::max(S(1) / 5, fac));
            if (err <= 1) {
                StepRecord<S> rec{t_, t_ + h_, u_, u5, f_, k7};
                t_ = rec.t1;
                u_ = u5;
                f_ = k7;
                h_ = h_ * fac;
                return rec;
            }
            h_ = h_ * fac;
        }
        throw NoReturn("step size control failed to produce an accepted step");
    }

private:
    Rhs rhs_;
    S atol_, rtol_;
    S t_{}, h_{};
    Vec2<S> u_{}, f_{};
};

// integrate to a fixed endpoint, clamping the last steps
template <class S, class Rhs>
Vec2<S> integrate_to(Rhs rhs, const Vec2<S>& u0, const S& t0, const S& t1, const S& abs_tol,
                     const S& rel_tol, int max_steps = 1000000) {
    using std::abs;
    const S dir = t1 >= t0 ? S(1) : S(-1);
    Dopri5<S, Rhs> stepper(rhs, abs_tol, rel_tol);
    stepper.start(t0, u0, dir * (abs(t1 - t0) / 100 + abs_tol));
    for (int n = 0; n < max_steps; ++n) {
        if (abs(stepper.t() - t1) <= abs_tol * (1 + abs(t1))) return stepper.u();
        if (dir * (stepper.t() + stepper.h() - t1) > 0) stepper.set_h(t1 - stepper.t());
        stepper.step();
    }
    throw NoReturn("integrate_to exceeded the step budget");
}

// classical RK4 with a fixed step count (cross-check path)
template <class S, class Rhs>
Vec2<S> rk4_integrate(Rhs rhs, Vec2<S> u, const S& t0, const S& t1, int n_steps) {
    const S h = (t1 - t0) / n_steps;
    S t = t0;
    Vec2<S> k1, k2, k3, k4, tmp;
    for (int n = 0; n < n_steps; ++n) {
        rhs(t, u, k1);
        for (int i = 0; i < 2; ++i) tmp[i] = u[i] + h / 2 * k1[i];
        rhs(t + h / 2, tmp, k2);
        for (int i = 0; i < 2; ++i) tmp[i] = u[i] + h / 2 * k2[i];
        rhs(t + h / 2, tmp, k3);
        for (int i = 0; i < 2; ++i) tmp[i] = u[i] + h * k3[i];
        rhs(t + h, tmp, k4);
        for (int i = 0; i < 2; ++i) u[i] = u[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        t = t + h;
    }
    return u;
}

} // namespace tansing
