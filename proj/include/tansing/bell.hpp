// Partial and ordinary Bell polynomials.
//
// B_{p,q}(x_1..x_{p-q+1})    = sum p!/(b_1!..b_m!) prod (x_j/j!)^{b_j}
// Bhat_{p,q}(x_1..x_{p-q+1}) = sum q!/(b_1!..b_m!) prod x_j^{b_j}
//
// both over the m = p-q+1 tuples of nonnegative b_j with
// sum j*b_j = p and sum b_j = q. The Bhat weight q!/(b_1!..b_m!) is the
// multinomial coefficient of x^p in (sum_j x_j t^j)^q, which is the
// identity the coefficient recursion relies on; it equals
// (q!/p!) B_{p,q}(1! x_1, ..., m! x_m).
//
// Arguments may be field elements or truncated series — anything with
// ring multiplication, addition, and scaling by an exact Rational.
#pragma once

#include <map>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tansing/errors.hpp"
#include "tansing/numbers.hpp"
#include "tansing/series.hpp"

namespace tansing {

struct BellTerm {
    std::vector<int> powers; // b_1..b_m
    Rational weight_partial;
    Rational weight_ordinary;
};

namespace detail {

inline void enumerate_bell(int p, int q, int m, int j, int rem_weight, int rem_count,
                           std::vector<int>& b, std::vector<BellTerm>& out) {
    if (j == m) {
        if (rem_weight == 0 && rem_count == 0) {
            Rational denom(1);
            Rational denom_fact(1);
            for (int t = 0; t < m; ++t) {
                denom = denom * factorial(b[static_cast<std::size_t>(t)]);
                for (int r = 0; r < b[static_cast<std::size_t>(t)]; ++r)
                    denom_fact = denom_fact * factorial(t + 1);
            }
            out.push_back(BellTerm{b, factorial(p) / (denom * denom_fact), factorial(q) / denom});
        }
        return;
    }
    const int w = j + 1;
    for (int bj = 0; bj * w <= rem_weight && bj <= rem_count; ++bj) {
        b[static_cast<std::size_t>(j)] = bj;
        enumerate_bell(p, q, m, j + 1, rem_weight - bj * w, rem_count - bj, b, out);
    }
    b[static_cast<std::size_t>(j)] = 0;
}

// tuple table per (p,q), memoized; safe under concurrent lookups
inline const std::vector<BellTerm>& bell_terms(int p, int q) {
    static std::map<std::pair<int, int>, std::vector<BellTerm>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(p, q);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const int m = p - q + 1;
    std::vector<BellTerm> terms;
    std::vector<int> b(static_cast<std::size_t>(m), 0);
    enumerate_bell(p, q, m, 0, p, q, b, terms);
    return cache.emplace(key, std::move(terms)).first->second;
}

inline void check_bell_args(int p, int q, std::size_t nargs) {
    if (q < 1 || q > p)
        throw BadArity("Bell polynomial requires 1 <= q <= p, got p=" + std::to_string(p) +
                       ", q=" + std::to_string(q));
    if (nargs != static_cast<std::size_t>(p - q + 1))
        throw BadArity("Bell polynomial B_{" + std::to_string(p) + "," + std::to_string(q) +
                       "} takes " + std::to_string(p - q + 1) + " arguments, got " +
                       std::to_string(nargs));
}

} // namespace detail

// scaling of ring elements by an exact rational
template <class F>
F ring_scale(const F& x, const Rational& s) {
    return x * from_rational<F>(s);
}
template <class F>
UniSeries<F> ring_scale(const UniSeries<F>& x, const Rational& s) {
    return x.scaled(from_rational<F>(s));
}

namespace detail {

template <class R>
R bell_sum(int p, int q, std::span<const R> xs, bool ordinary) {
    check_bell_args(p, q, xs.size());
    const auto& terms = bell_terms(p, q);
    bool have = false;
    R acc{};
    for (const BellTerm& t : terms) {
        bool started = false;
        R prod{};
        for (std::size_t j = 0; j < t.powers.size(); ++j)
            for (int r = 0; r < t.powers[j]; ++r) {
                prod = started ? prod * xs[j] : xs[j];
                started = true;
            }
        // q >= 1 guarantees every tuple has at least one factor
        R term = ring_scale(prod, ordinary ? t.weight_ordinary : t.weight_partial);
        acc = have ? acc + term : term;
        have = true;
    }
    if (!have) throw InternalError("Bell polynomial with empty tuple set");
    return acc;
}

} // namespace detail

template <class R>
R partial_bell(int p, int q, std::span<const R> xs) {
    return detail::bell_sum(p, q, xs, false);
}

template <class R>
R ordinary_bell(int p, int q, std::span<const R> xs) {
    return detail::bell_sum(p, q, xs, true);
}

template <class R>
R partial_bell(int p, int q, const std::vector<R>& xs) {
    return partial_bell(p, q, std::span<const R>(xs));
}

template <class R>
R ordinary_bell(int p, int q, const std::vector<R>& xs) {
    return ordinary_bell(p, q, std::span<const R>(xs));
}

} // namespace tansing
