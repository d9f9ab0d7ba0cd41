// Second, independent assembly of the half-return coefficients: the
// partial-Bell form with factorial-scaled arguments (the accumulator
// carries n! alpha_n), exercising the ordinary/partial conversion from
// the other side. Test-only.
#pragma once

#include <vector>

#include "tansing/bell.hpp"
#include "tansing/numbers.hpp"

namespace tansing::testing {

template <class F>
std::vector<F> alpha_via_partial_bell(const std::vector<F>& mu, int k, int n_max) {
    const int two_k = 2 * k;
    const F& mu2k = mu.at(static_cast<std::size_t>(two_k - 1));
    std::vector<F> alpha{F(-1)};
    std::vector<F> scaled{F(-1)}; // {1! a_1, 2! a_2, ...}
    for (int n = 2; n <= n_max; ++n) {
        const int p = n + two_k - 1;
        std::vector<F> head(scaled.begin(), scaled.end());
        head.push_back(F(0));
        F acc = mu2k * from_rational<F>(factorial(two_k) / factorial(p)) * partial_bell(p, two_k, head);
        for (int i = two_k + 1; i <= p; ++i) {
            std::vector<F> args(scaled.begin(), scaled.begin() + (n + two_k - i));
            acc = acc + mu.at(static_cast<std::size_t>(i - 1)) *
                            from_rational<F>(factorial(i) / factorial(p)) * partial_bell(p, i, args);
        }
        const F an = (acc - mu.at(static_cast<std::size_t>(p - 1))) / (F(two_k) * mu2k);
        alpha.push_back(an);
        scaled.push_back(from_rational<F>(factorial(n)) * an);
    }
    return alpha;
}

} // namespace tansing::testing
