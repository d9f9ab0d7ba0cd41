// Parameter sweeps over families of monodromic fields: locating zeros
// of V_2 along one parameter, the transversality data (d, ell) of the
// codimension-one bifurcation, and the hypothesis check for n
// simultaneous vanishing even coefficients.
//
// Derivatives of V_n in parameters are always central finite differences
// over exact (or big-float) evaluations, Richardson-extrapolated once;
// symbolic parameter propagation is out of scope by design.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tansing/canonical.hpp"
#include "tansing/classify.hpp"
#include "tansing/errors.hpp"
#include "tansing/halfreturn.hpp"
#include "tansing/input.hpp"
#include "tansing/lyapunov.hpp"
#include "tansing/numbers.hpp"

namespace tansing {

// V_2..V_{n_max} of the family at one parameter point
template <class F>
std::vector<F> eval_V_at(const FieldSpec& spec, const std::map<std::string, F>& env, int n_max) {
    PiecewiseField<F> field = bind_field(spec, env);
    TangencyClassification cls;
    try {
        cls = classify(field);
    } catch (const DomainError& e) {
        throw NotMonodromicAtPoint(e.what());
    }
    if (!cls.monodromic) throw NotMonodromicAtPoint("classification rejects this parameter point");
    LyapunovResult<F> res = lyapunov_coefficients(field, cls, n_max);
    return res.V;
}

template <class F>
F eval_single_V(const FieldSpec& spec, const std::map<std::string, F>& env, int n) {
    return eval_V_at(spec, env, n).back();
}

// central difference with one Richardson extrapolation step; exact in
// the parameter for polynomial dependence of degree <= 3
template <class F, class Eval>
F richardson_derivative(Eval eval, const F& at, const F& h) {
    const F d_h = (eval(at + h) - eval(at - h)) / (F(2) * h);
    const F h2 = h / F(2);
    const F d_h2 = (eval(at + h2) - eval(at - h2)) / (F(2) * h2);
    return (F(4) * d_h2 - d_h) / F(3);
}

template <class F>
struct HopfReport {
    F lambda0{};
    F V2_at_lambda0{};
    F d{};   // dV_2/dlambda at lambda0
    F ell{}; // V_4(lambda0)
    bool hypothesis_ok = false;
    int existence_sign = 0;        // cycles for sign(lambda - lambda0) = existence_sign
    bool predicted_stable = false; // from sign(ell)
    double x_star_coefficient = 0; // x*(lambda) ~ coeff * sqrt(|lambda - lambda0|)
    bool exact_root = false;
};

template <class F>
HopfReport<F> hopf_report_at(const FieldSpec& spec, const std::map<std::string, F>& base,
                             const std::string& name, const F& lambda0, bool exact_root,
                             const F& fd_step) {
    auto v2 = [&](const F& lam) {
        std::map<std::string, F> env = base;
        env[name] = lam;
        return eval_single_V(spec, env, 2);
    };
    HopfReport<F> rep;
    rep.lambda0 = lambda0;
    rep.exact_root = exact_root;
    rep.V2_at_lambda0 = v2(lambda0);
    rep.d = richardson_derivative<F>(v2, lambda0, fd_step);
    {
        std::map<std::string, F> env = base;
        env[name] = lambda0;
        rep.ell = eval_single_V(spec, env, 4);
    }
    rep.hypothesis_ok = field_is_zero(rep.V2_at_lambda0) && !field_is_zero(rep.d) && !field_is_zero(rep.ell);
    if (rep.hypothesis_ok) {
        rep.existence_sign = -field_sign(rep.d) * field_sign(rep.ell);
        rep.predicted_stable = field_sign(rep.ell) < 0;
        const double dd = FieldTraits<F>::to_double(rep.d);
        const double ll = FieldTraits<F>::to_double(rep.ell);
        rep.x_star_coefficient = std::sqrt(std::abs(dd / ll));
    }
    return rep;
}

// scan V_2 for sign changes along one parameter; every root found is
// reported individually
template <class F>
std::vector<HopfReport<F>> hopf_scan(const FieldSpec& spec, const std::string& name, const F& lo,
                                     const F& hi, int grid = 64,
                                     const F& fd_step = from_rational<F>(Rational(1, 128))) {
    if (!(lo < hi)) throw UsageError("hopf_scan: empty interval");
    std::map<std::string, F> base = default_bindings<F>(spec);
    auto v2 = [&](const F& lam) {
        std::map<std::string, F> env = base;
        env[name] = lam;
        return eval_single_V(spec, env, 2);
    };

    std::vector<F> xs, vs;
    for (int i = 0; i <= grid; ++i) {
        const F x = lo + (hi - lo) * F(i) / F(grid);
        xs.push_back(x);
        vs.push_back(v2(x));
    }

    std::vector<HopfReport<F>> reports;
    for (int i = 0; i <= grid; ++i)
        if (field_is_zero(vs[static_cast<std::size_t>(i)]))
            reports.push_back(hopf_report_at(spec, base, name, xs[static_cast<std::size_t>(i)], true, fd_step));
    for (int i = 0; i < grid; ++i) {
        const F &va = vs[static_cast<std::size_t>(i)], &vb = vs[static_cast<std::size_t>(i + 1)];
        if (field_is_zero(va) || field_is_zero(vb)) continue;
        if (field_sign(va) * field_sign(vb) > 0) continue;
        F a = xs[static_cast<std::size_t>(i)], b = xs[static_cast<std::size_t>(i + 1)];
        F fa = va;
        bool exact = false;
        F root = a;
        for (int it = 0; it < 64; ++it) {
            const F m = (a + b) / F(2);
            const F fm = v2(m);
            if (field_is_zero(fm)) {
                root = m;
                exact = true;
                break;
            }
            if (field_sign(fa) * field_sign(fm) > 0) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
            root = (a + b) / F(2);
        }
        reports.push_back(hopf_report_at(spec, base, name, root, exact, fd_step));
    }
    if (reports.empty())
        throw NoSignChange("V_2 has no zero on the scanned interval");
    return reports;
}

template <class F>
struct DegenerateHopfReport {
    std::vector<std::string> names;
    std::vector<F> lambda0;
    std::vector<F> V_vector;            // V_2, V_4, ..., V_{2n}
    F V_next{};                         // V_{2n+2}
    std::vector<std::vector<F>> jacobian; // d V_{2i} / d lambda_j
    F det{};
    bool hypothesis_ok = false;
};

template <class F>
F determinant(std::vector<std::vector<F>> m) {
    using std::abs;
    const std::size_t n = m.size();
    F det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (abs(m[r][c]) > abs(m[piv][c])) piv = r;
        if (field_is_zero(m[piv][c])) return F(0);
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det = det * m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const F f = m[r][c] / m[c][c];
            for (std::size_t cc = c; cc < n; ++cc) m[r][cc] = m[r][cc] - f * m[c][cc];
        }
    }
    return det;
}

// hypotheses of the n-parameter degenerate bifurcation at one point:
// V_2..V_{2n} vanish, the Jacobian in the n parameters is nonsingular,
// and V_{2n+2} is nonzero. The n cycles themselves are an existence
// statement; probe nearby points with count_cycles_numeric to observe
// them.
template <class F>
DegenerateHopfReport<F> degenerate_hopf_check(const FieldSpec& spec,
                                              const std::vector<std::string>& names,
                                              const std::vector<F>& lambda0, int n,
                                              const F& fd_step = from_rational<F>(Rational(1, 1000000))) {
    if (names.size() != lambda0.size() || static_cast<int>(names.size()) != n)
        throw UsageError("degenerate_hopf_check: need exactly n parameter names and values");
    std::map<std::string, F> base = default_bindings<F>(spec);
    for (int j = 0; j < n; ++j) base[names[static_cast<std::size_t>(j)]] = lambda0[static_cast<std::size_t>(j)];

    DegenerateHopfReport<F> rep;
    rep.names = names;
    rep.lambda0 = lambda0;

    const std::vector<F> V_all = eval_V_at(spec, base, 2 * n + 2);
    for (int i = 1; i <= n; ++i) rep.V_vector.push_back(V_all[static_cast<std::size_t>(2 * i - 2)]);
    rep.V_next = V_all[static_cast<std::size_t>(2 * n)];

    rep.jacobian.assign(static_cast<std::size_t>(n), std::vector<F>(static_cast<std::size_t>(n), F(0)));
    for (int j = 0; j < n; ++j) {
        auto eval_vec = [&](const F& val) {
            std::map<std::string, F> env = base;
            env[names[static_cast<std::size_t>(j)]] = val;
            std::vector<F> V = eval_V_at(spec, env, 2 * n);
            std::vector<F> out;
            for (int i = 1; i <= n; ++i) out.push_back(V[static_cast<std::size_t>(2 * i - 2)]);
            return out;
        };
        const F& at = lambda0[static_cast<std::size_t>(j)];
        const std::vector<F> pp = eval_vec(at + fd_step);
        const std::vector<F> pm = eval_vec(at - fd_step);
        const F h2 = fd_step / F(2);
        const std::vector<F> qp = eval_vec(at + h2);
        const std::vector<F> qm = eval_vec(at - h2);
        for (int i = 0; i < n; ++i) {
            const F d_h = (pp[static_cast<std::size_t>(i)] - pm[static_cast<std::size_t>(i)]) / (F(2) * fd_step);
            const F d_h2 = (qp[static_cast<std::size_t>(i)] - qm[static_cast<std::size_t>(i)]) / (F(2) * h2);
            rep.jacobian[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = (F(4) * d_h2 - d_h) / F(3);
        }
    }
    rep.det = determinant(rep.jacobian);

    bool v_zero = true;
    for (const F& v : rep.V_vector) v_zero = v_zero && field_is_zero(v);
    rep.hypothesis_ok = v_zero && !field_is_zero(rep.det) && !field_is_zero(rep.V_next);
    return rep;
}

// bind the family at a point and count cycles with the numeric oracle
template <class F>
CycleSearch count_cycles_numeric(const FieldSpec& spec, const std::map<std::string, F>& env,
                                 double x_lo, double x_hi, int n_samples, const IntegratorConfig& cfg) {
    PiecewiseField<F> field = bind_field(spec, env);
    TangencyClassification cls;
    try {
        cls = classify(field);
    } catch (const DomainError& e) {
        throw NotMonodromicAtPoint(e.what());
    }
    if (!cls.monodromic) throw NotMonodromicAtPoint("classification rejects this parameter point");
    NumericField<double> nf = NumericField<double>::from(field);
    return find_cycles(nf, cls, x_lo, x_hi, n_samples, cfg);
}

} // namespace tansing
