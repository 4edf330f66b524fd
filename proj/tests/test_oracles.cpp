#include <doctest.h>

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "vbal/oracles.hpp"
#include "vbal/rng.hpp"

using namespace vbal;

namespace {

// Recursive branch over both signs of every vector (x_1 included).
std::int64_t brute_offline(const std::vector<SignVector>& vs) {
    const std::size_t n = vs.front().size();
    std::vector<std::int64_t> sum(n, 0);
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    std::function<void(std::size_t)> rec = [&](std::size_t t) {
        if (t == vs.size()) {
            std::int64_t m = 0;
            for (auto s : sum) m = std::max<std::int64_t>(m, std::abs(s));
            best = std::min(best, m);
            return;
        }
        for (int x : {1, -1}) {
            for (std::size_t j = 0; j < n; ++j) sum[j] += x * vs[t][j];
            rec(t + 1);
            for (std::size_t j = 0; j < n; ++j) sum[j] -= x * vs[t][j];
        }
    };
    rec(0);
    return best;
}

// Counts signed sums in [lo, hi] by recursion over a multiset of partial sums.
std::uint64_t brute_count(const std::vector<double>& a, const std::function<bool(double)>& hit) {
    std::vector<double> sums{0.0};
    for (double w : a) {
        std::vector<double> next;
        next.reserve(sums.size() * 2);
        for (double s : sums) {
            next.push_back(s + w);
            next.push_back(s - w);
        }
        sums = std::move(next);
    }
    std::uint64_t h = 0;
    for (double s : sums) h += hit(s);
    return h;
}

std::vector<SignVector> random_vectors(RngStream& rng, std::size_t T, std::size_t n) {
    std::vector<SignVector> out;
    for (std::size_t t = 0; t < T; ++t) out.push_back(sample_vector(rng, n));
    return out;
}

// Independent long-double evaluation in units of (cn)^{-p}.
long double taylor_slack_ld(std::int64_t d, long double eta, long double c, std::size_t n, int p) {
    const long double cn = c * n;
    const long double x = d;
    auto f = [&](long double y) { return std::pow(cn / (cn - y * y), p); };
    const long double g = cn - x * x;
    const long double lhs = f(x + eta) - f(x);
    const long double lin = 2.0L * p * x * std::pow(cn, p) / std::pow(g, p + 1) * eta;
    const long double quad = 4.0L * p * (p + 1) * cn * std::pow(cn, p) / std::pow(g, p + 2);
    return lin + quad - lhs;
}

}  // namespace

TEST_CASE("offline optimum examples") {
    CHECK(offline_optimum(std::vector<SignVector>{{1, 1}, {1, 1}}) == 0);
    CHECK(offline_optimum(std::vector<SignVector>{{1, 1}, {1, -1}}) == 2);
    CHECK(offline_optimum(std::vector<SignVector>{{1, -1, 1}}) == 1);
    CHECK(offline_optimum_serial(std::vector<SignVector>{{1, 1}, {1, -1}}) == 2);
}

TEST_CASE("offline optimum agrees with brute force and across kernels") {
    RngStream rng(1, 2);
    for (int i = 0; i < 60; ++i) {
        const std::size_t T = 1 + rng.next_word() % 12;
        const std::size_t n = 1 + rng.next_word() % 6;
        const auto vs = random_vectors(rng, T, n);
        const auto expect = brute_offline(vs);
        CHECK(offline_optimum_serial(vs) == expect);
        CHECK(offline_optimum(vs) == expect);
    }
    // Larger instances exercise the Gray-code blocks.
    for (int i = 0; i < 4; ++i) {
        const auto vs = random_vectors(rng, 18, 40);
        const auto par = offline_optimum(vs);
        CHECK(offline_optimum_serial(vs) == par);
        omp_set_num_threads(3);
        CHECK(offline_optimum(vs) == par);
        omp_set_num_threads(1);
        CHECK(offline_optimum(vs) == par);
    }
}

TEST_CASE("offline optimum caps") {
    std::vector<SignVector> big(kMaxOfflineRounds + 1, SignVector(2));
    CHECK_THROWS_AS(offline_optimum(big), std::length_error);
    CHECK_THROWS_AS(offline_optimum(std::vector<SignVector>{}), std::invalid_argument);
    CHECK_THROWS_AS(offline_optimum(std::vector<SignVector>{SignVector(65)}), std::length_error);
    CHECK_THROWS_AS(offline_optimum(std::vector<SignVector>{{1, 1}, {1}}), std::invalid_argument);
}

TEST_CASE("pz enumeration") {
    const std::vector<double> a1{1}, a2{1, 1}, a3{1, 1, 1};
    CHECK(pz_enumerate(a1).fraction == 1.0);
    const auto r2 = pz_enumerate(a2);
    CHECK(r2.threshold == 1.0);
    CHECK(r2.fraction == 0.5);
    const auto r3 = pz_enumerate(a3);
    CHECK(r3.threshold == doctest::Approx(std::sqrt(1.5)));
    CHECK(r3.hits == 2);
    CHECK(r3.total == 8);
    CHECK(r3.fraction == 0.25);
    CHECK_THROWS_AS(pz_enumerate(std::vector<double>{}), std::invalid_argument);

    RngStream rng(4, 0);
    for (int i = 0; i < 50; ++i) {
        const std::size_t m = 1 + rng.next_word() % 14;
        std::vector<double> a(m);
        for (auto& w : a) w = (rng.next_unit() - 0.5) * 10;
        const auto par = pz_enumerate(a);
        const auto ser = pz_enumerate_serial(a);
        CHECK(par.hits == ser.hits);
        CHECK(par.hits == brute_count(a, [&](double s) { return std::abs(s) >= par.threshold; }));
        CHECK(par.fraction >= 0.25);
    }
}

TEST_CASE("spread enumeration") {
    const std::vector<double> a{1, 1};
    CHECK(spread_enumerate(a, 0.0, 1.0).fraction == 0.5);
    CHECK(all_ones_central_fraction(2, 1.0) == 0.75);
    CHECK(all_ones_central_fraction(3, 0.5) == 0.375);
    CHECK(all_ones_central_fraction(4, 10.0) == 1.0);
    // Best window over every placement of the all-ones sums.
    for (std::size_t m = 1; m <= 10; ++m) {
        const std::vector<double> ones(m, 1.0);
        for (double S : {0.0, 0.5, 1.0, 1.7, 2.0, 3.5}) {
            double best = 0;
            for (int c = -static_cast<int>(m); c <= static_cast<int>(m); ++c) {
                best = std::max(best, spread_enumerate(ones, c, S).fraction);
                best = std::max(best, spread_enumerate(ones, c + 0.5, S).fraction);
            }
            CHECK(all_ones_central_fraction(m, S) == best);
        }
    }
    CHECK_THROWS_AS(spread_enumerate(std::vector<double>{1, 0.5}, 0.0, 1.0), std::invalid_argument);

    RngStream rng(5, 0);
    for (int i = 0; i < 50; ++i) {
        const std::size_t m = 1 + rng.next_word() % 12;
        std::vector<double> w(m);
        double total = 0;
        for (auto& x : w) {
            x = (1.0 + rng.next_unit() * 4) * (rng.next_sign());
            total += std::abs(x);
        }
        CHECK(spread_enumerate(w, 0.0, total).fraction == 1.0);
        const double center = (rng.next_unit() - 0.5) * total;
        const double S = rng.next_unit() * total / 2;
        const auto par = spread_enumerate(w, center, S);
        CHECK(par.hits == spread_enumerate_serial(w, center, S).hits);
        CHECK(par.hits ==
              brute_count(w, [&](double s) { return s >= center - S && s <= center + S; }));
        CHECK(par.fraction <= all_ones_central_fraction(m, S) + 1e-15);
    }
}

TEST_CASE("taylor bound") {
    CHECK(taylor_bound_check(0, 1.0, 1e5, 16, 4));
    CHECK(taylor_slack(0, 0.0, 1e5, 16, 4) >= 0.0);
    CHECK(taylor_slack(5, 0.0, 1e5, 16, 4) ==
          doctest::Approx(static_cast<double>(taylor_slack_ld(5, 0.0L, 1e5L, 16, 4))).epsilon(1e-9));
    CHECK(taylor_threshold(1e5, 16) == doctest::Approx(8 * std::sqrt(1.6e6) + 4));

    const double c = 1e5;
    for (std::size_t n : {16u, 64u}) {
        const double cn = c * n;
        const auto dmax = static_cast<std::int64_t>(std::floor(std::sqrt(cn - taylor_threshold(c, n))));
        for (std::int64_t d : {std::int64_t{0}, std::int64_t{1}, dmax / 2, dmax - 1, dmax, -dmax}) {
            for (double eta : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
                const double ours = taylor_slack(d, eta, c, n, 4);
                const long double ref = taylor_slack_ld(d, eta, c, n, 4);
                CHECK(ref >= 0.0L);
                CHECK(ours == doctest::Approx(static_cast<double>(ref)).epsilon(1e-6).scale(1e-9));
                CHECK(taylor_bound_check(d, eta, c, n, 4));
            }
        }
        CHECK_THROWS_AS(taylor_bound_check(dmax + 1, 1.0, c, n, 4), std::domain_error);
    }
}
