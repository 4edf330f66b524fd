#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "vbal/harness.hpp"
#include "vbal/potential.hpp"
#include "vbal/probes.hpp"

using namespace vbal;

TEST_CASE("probe state builders hit their targets") {
    const StrategyParams params;
    for (std::size_t n : {16u, 64u, 256u}) {
        const auto u = uniform_power_state(n, 0.75 * params.H, params);
        const double phi = power_potential(u, params.c, params.p);
        CHECK(phi >= params.H / 2);
        CHECK(phi <= params.H);
        const auto s = spike_power_state(n, n / 8, 0.75 * params.H, params);
        const double sphi = power_potential(s, params.c, params.p);
        CHECK(sphi >= params.H / 2);
        CHECK(sphi <= params.H);
        const auto cs = uniform_cosh_state(n, 2.0 * n, params);
        CHECK(cosh_potential(cs, params.lambda(n)) >= 2.0 * n);
    }
    CHECK_THROWS_AS(spike_power_state(8, 0, 40, params), std::invalid_argument);
    CHECK_THROWS_AS(uniform_power_state(8, 0.5, params), std::invalid_argument);
}

TEST_CASE("drift probe contract") {
    const StrategyParams params;
    RngStream rng(1, 0);
    CHECK_THROWS_AS(drift_probe(new_game(16, params), 10, params, rng), std::domain_error);
    const auto hot = uniform_power_state(16, params.H * 0.99, params);
    CHECK_NOTHROW(drift_probe(hot, 10, params, rng));
    auto over = hot;
    for (auto& d : over.d) d += d > 0 ? 20 : -20;
    CHECK_THROWS_AS(drift_probe(over, 10, params, rng), std::domain_error);
}

TEST_CASE("drift probe reports") {
    const StrategyParams params;
    RngStream rng(2, 0);
    const auto s = uniform_power_state(64, 0.75 * params.H, params);
    const auto rep = drift_probe(s, 2000, params, rng);
    CHECK(rep.samples == 2000);
    CHECK(rep.Q == doctest::Approx(lq_terms(s, SignVector(64), params.c, params.p).Q));
    CHECK(rep.q_max_bound == doctest::Approx(kCalibratedCQ / 8.0));
    CHECK(rep.mean_delta_phi < 0.0);
    CHECK(rep.max_delta_phi <= rep.q_max_bound);
    CHECK(rep.stderr_delta_phi > 0.0);
}

TEST_CASE("cosh probe") {
    const StrategyParams params;
    RngStream rng(3, 0);
    CHECK_THROWS_AS(cosh_drift_probe(new_game(16, params), 10, params, rng), std::domain_error);
    const auto s = uniform_cosh_state(64, 3.0 * 64, params);
    const auto rep = cosh_drift_probe(s, 500, params, rng);
    CHECK(rep.Q == rep.lambda * rep.lambda * rep.phi);
    CHECK(rep.frac_L_ge_half_c_Q > 0.0);
}

TEST_CASE("log-tail fit on a synthetic geometric histogram") {
    std::vector<std::uint64_t> h;
    const double r = 0.8;
    for (int y = 0; y < 30; ++y) h.push_back(static_cast<std::uint64_t>(std::llround(1e7 * std::pow(r, y))));
    const auto fit = fit_log_tail(h);
    CHECK(fit.slope == doctest::Approx(std::log(r)).epsilon(1e-4));
    CHECK(fit.r2 > 0.9999);
    CHECK(fit.points == 29);

    const std::vector<std::uint64_t> tiny{5, 3};
    CHECK(std::isnan(fit_log_tail(tiny).slope));
}

TEST_CASE("majority tail probe") {
    CHECK_THROWS_AS(majority_tail_probe(8, 100, 1, 0), std::invalid_argument);
    const auto a = majority_tail_probe(8, 4000, 3, 9, 1);
    const auto b = majority_tail_probe(8, 4000, 3, 9, 4);
    CHECK(a.histogram == b.histogram);
    CHECK(a.max_position == b.max_position);
    std::uint64_t total = 0;
    for (auto c : a.histogram) total += c;
    CHECK(total == 3u * 2000u * 8u);
    CHECK(a.mean_drift < 0.0);
    CHECK(a.K > 0.0);
    CHECK(a.bound == doctest::Approx(8 * std::sqrt(8.0) * std::log(8.0)));
}
