// Searches synthetic states with power potential <= H for the largest
// Q * n^{1-2/p}. The result (rounded up) is frozen as kCalibratedCQ.

#include <cmath>
#include <cstdio>
#include <vector>

#include "vbal/harness.hpp"
#include "vbal/potential.hpp"
#include "vbal/verify.hpp"

int main() {
    const vbal::StrategyParams params;
    double best = 0.0;
    for (std::size_t n = 16; n <= 1024; n *= 2) {
        const double cn = params.c * static_cast<double>(n);
        const double scale = std::pow(static_cast<double>(n), 1.0 - 2.0 / params.p);
        const vbal::SignVector v(n);
        double best_n = 0.0;
        auto consider = [&](const std::vector<std::int64_t>& d) {
            for (auto x : d) {
                if (vbal::gap(x, params.c, n) <= 0.0) return;
            }
            const auto s = vbal::inject_state(d, {}, params);
            if (vbal::power_potential(s, params.c, params.p) > params.H) return;
            best_n = std::max(best_n, vbal::lq_terms(s, v, params.c, params.p).Q * scale);
        };
        // m loaded coordinates at a common level, rest at 0; scan the level.
        for (std::size_t m = 1; m <= n; m = m < 8 ? m + 1 : m * 2) {
            const auto top = static_cast<std::int64_t>(std::sqrt(cn));
            for (int step = 0; step <= 4000; ++step) {
                const auto level = top * step / 4000;
                std::vector<std::int64_t> d(n, 0);
                for (std::size_t j = 0; j < m; ++j) d[j] = level;
                consider(d);
            }
        }
        vbal::RngStream rng(99, n);
        for (int i = 0; i < 20000; ++i) {
            const auto s = vbal::random_bounded_state(rng, n, params);
            consider(s.d);
        }
        std::printf("n=%4zu  max Q*n^(1-2/p) = %.6f\n", n, best_n);
        best = std::max(best, best_n);
    }
    std::printf("overall max = %.6f\n", best);
    return 0;
}
