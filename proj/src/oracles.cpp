#include "vbal/oracles.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "vbal/potential.hpp"

namespace vbal {

namespace {

void check_offline_input(std::span<const SignVector> vectors) {
    if (vectors.empty()) throw std::invalid_argument("offline_optimum: no vectors");
    if (vectors.size() > kMaxOfflineRounds) {
        throw std::length_error("offline_optimum: T=" + std::to_string(vectors.size()) + " exceeds " +
                                std::to_string(kMaxOfflineRounds) + "; use sampling mode");
    }
    const std::size_t n = vectors.front().size();
    if (n == 0 || n > kMaxOfflineDim) throw std::length_error("offline_optimum: n must be in [1, 64]");
    for (const auto& v : vectors) {
        if (v.size() != n) throw std::invalid_argument("offline_optimum: vectors differ in length");
    }
}

void check_weights(std::span<const double> weights) {
    if (weights.empty()) throw std::invalid_argument("weights must be nonempty");
    if (weights.size() > kMaxEnumerationTerms) {
        throw std::length_error("at most " + std::to_string(kMaxEnumerationTerms) + " weights can be enumerated");
    }
}

// Bit i of mask set -> y_i = +1. Summed in index order so every caller
// reproduces the same double.
double signed_sum(std::span<const double> a, std::uint64_t mask) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += ((mask >> i) & 1u) ? a[i] : -a[i];
    return s;
}

EnumerationReport finish(std::uint64_t total, std::uint64_t hits, double threshold) {
    return {total, hits, static_cast<double>(hits) / static_cast<double>(total), threshold};
}

double pz_threshold(std::span<const double> a) {
    double ss = 0.0;
    for (double x : a) ss += x * x;
    return std::sqrt(ss / 2.0);
}

void check_spread_weights(std::span<const double> weights) {
    check_weights(weights);
    for (double a : weights) {
        if (!(std::abs(a) >= 1.0)) throw std::invalid_argument("spread_enumerate: every |a_i| must be >= 1");
    }
}

}  // namespace

std::int64_t offline_optimum_serial(std::span<const SignVector> vectors) {
    check_offline_input(vectors);
    const std::size_t T = vectors.size();
    const std::size_t n = vectors.front().size();
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    std::vector<std::int64_t> sum(n);
    // x_1 = +1; bit t-1 of mask gives x_t for t >= 2.
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (T - 1)); ++mask) {
        std::fill(sum.begin(), sum.end(), 0);
        for (std::size_t t = 0; t < T; ++t) {
            const int x = (t == 0 || ((mask >> (t - 1)) & 1u)) ? 1 : -1;
            for (std::size_t j = 0; j < n; ++j) sum[j] += x * vectors[t][j];
        }
        std::int64_t v = 0;
        for (auto s : sum) v = std::max(v, std::abs(s));
        best = std::min(best, v);
    }
    return best;
}

std::int64_t offline_optimum(std::span<const SignVector> vectors) {
    check_offline_input(vectors);
    const std::size_t T = vectors.size();
    const std::size_t n = vectors.front().size();
    const std::size_t free_bits = T - 1;
    // Low bits are walked in Gray-code order inside a block; high bits pick the block.
    const std::size_t low_bits = std::min<std::size_t>(free_bits, 12);
    const std::uint64_t blocks = std::uint64_t{1} << (free_bits - low_bits);
    const std::uint64_t block_len = std::uint64_t{1} << low_bits;

    std::int64_t best = std::numeric_limits<std::int64_t>::max();
#pragma omp parallel for schedule(dynamic, 1) reduction(min : best)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
        std::vector<std::int64_t> sum(n, 0);
        // Start of the block: all low signs -1.
        for (std::size_t t = 0; t < T; ++t) {
            int x;
            if (t == 0) {
                x = 1;
            } else if (t - 1 < low_bits) {
                x = -1;
            } else {
                x = ((static_cast<std::uint64_t>(b) >> (t - 1 - low_bits)) & 1u) ? 1 : -1;
            }
            for (std::size_t j = 0; j < n; ++j) sum[j] += x * vectors[t][j];
        }
        std::vector<int> low_sign(low_bits, -1);
        auto value = [&] {
            std::int64_t v = 0;
            for (auto s : sum) v = std::max(v, std::abs(s));
            return v;
        };
        std::int64_t local = value();
        for (std::uint64_t k = 1; k < block_len; ++k) {
            const auto bit = static_cast<std::size_t>(std::countr_zero(k));
            const std::size_t t = bit + 1;
            low_sign[bit] = -low_sign[bit];
            const std::int64_t step = 2 * low_sign[bit];
            for (std::size_t j = 0; j < n; ++j) sum[j] += step * vectors[t][j];
            local = std::min(local, value());
        }
        best = std::min(best, local);
    }
    return best;
}

EnumerationReport pz_enumerate_serial(std::span<const double> weights) {
    check_weights(weights);
    const double threshold = pz_threshold(weights);
    const std::uint64_t total = std::uint64_t{1} << weights.size();
    std::uint64_t hits = 0;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        if (std::abs(signed_sum(weights, mask)) >= threshold) ++hits;
    }
    return finish(total, hits, threshold);
}

EnumerationReport pz_enumerate(std::span<const double> weights) {
    check_weights(weights);
    const double threshold = pz_threshold(weights);
    const std::uint64_t total = std::uint64_t{1} << weights.size();
    std::uint64_t hits = 0;
#pragma omp parallel for schedule(static) reduction(+ : hits)
    for (std::int64_t mask = 0; mask < static_cast<std::int64_t>(total); ++mask) {
        if (std::abs(signed_sum(weights, static_cast<std::uint64_t>(mask))) >= threshold) ++hits;
    }
    return finish(total, hits, threshold);
}

EnumerationReport spread_enumerate_serial(std::span<const double> weights, double center, double halfwidth) {
    check_spread_weights(weights);
    const std::uint64_t total = std::uint64_t{1} << weights.size();
    std::uint64_t hits = 0;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        if (std::abs(signed_sum(weights, mask) - center) <= halfwidth) ++hits;
    }
    return finish(total, hits, halfwidth);
}

EnumerationReport spread_enumerate(std::span<const double> weights, double center, double halfwidth) {
    check_spread_weights(weights);
    const std::uint64_t total = std::uint64_t{1} << weights.size();
    std::uint64_t hits = 0;
#pragma omp parallel for schedule(static) reduction(+ : hits)
    for (std::int64_t mask = 0; mask < static_cast<std::int64_t>(total); ++mask) {
        if (std::abs(signed_sum(weights, static_cast<std::uint64_t>(mask)) - center) <= halfwidth) ++hits;
    }
    return finish(total, hits, halfwidth);
}

double all_ones_central_fraction(std::size_t m, double halfwidth) {
    if (m == 0 || m > 62) throw std::invalid_argument("all_ones_central_fraction: m must be in [1, 62]");
    if (!(halfwidth >= 0.0)) throw std::invalid_argument("all_ones_central_fraction: halfwidth must be >= 0");
    // All-ones sums are 2k - m, spaced 2 apart, so a closed window of
    // half-width S holds at most floor(S) + 1 of them; take the middle ones.
    std::vector<std::uint64_t> binom(m + 1, 1);
    for (std::size_t k = 1; k <= m; ++k) binom[k] = binom[k - 1] * (m - k + 1) / k;
    const std::size_t width = std::min<std::size_t>(m + 1, static_cast<std::size_t>(std::floor(halfwidth)) + 1);
    const std::size_t first = (m + 1 - width) / 2;
    std::uint64_t inside = 0;
    for (std::size_t k = first; k < first + width; ++k) inside += binom[k];
    return static_cast<double>(inside) / static_cast<double>(std::uint64_t{1} << m);
}

double taylor_threshold(double c, std::size_t n) {
    const double cn = c * static_cast<double>(n);
    return 8.0 * std::sqrt(cn) + 4.0;
}

double taylor_slack(std::int64_t d, double eta, double c, std::size_t n, int p) {
    if (!(std::abs(eta) <= 1.0)) throw std::domain_error("taylor_bound_check: |eta| must be <= 1");
    const double cn = c * static_cast<double>(n);
    const double g = gap(d, c, n);
    if (g < taylor_threshold(c, n)) {
        throw std::domain_error("taylor_bound_check: gap " + std::to_string(g) + " below 8*sqrt(cn)+4");
    }
    const double x = static_cast<double>(d);
    const double g_moved = cn - (x + eta) * (x + eta);
    // Everything multiplied by (cn)^p, so f(x) becomes (cn/g)^p.
    const double rp = ipow(cn / g, p);
    const double lhs = ipow(cn / g_moved, p) - rp;
    const double rhs = 2.0 * p * x * rp / g * eta + 4.0 * p * (p + 1) * cn * rp / (g * g);
    return rhs - lhs;
}

bool taylor_bound_check(std::int64_t d, double eta, double c, std::size_t n, int p) {
    return taylor_slack(d, eta, c, n, p) >= 0.0;
}

}  // namespace vbal
