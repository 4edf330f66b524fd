#include "vbal/probes.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "vbal/harness.hpp"
#include "vbal/potential.hpp"
#include "vbal/strategies.hpp"

namespace vbal {

double q_max_bound(std::size_t n, const StrategyParams& params, double cq) {
    return cq * std::pow(static_cast<double>(n), -1.0 + 2.0 / params.p);
}

DriftProbeReport drift_probe(const GameState& state, std::size_t samples, const StrategyParams& params,
                             RngStream& rng, double cq) {
    DriftProbeReport rep;
    rep.phi = power_potential(state, params.c, params.p);
    if (!(rep.phi >= params.H / 2.0 && rep.phi <= params.H)) {
        throw std::domain_error("drift_probe: potential " + std::to_string(rep.phi) + " outside [H/2, H]");
    }
    if (samples == 0) throw std::invalid_argument("drift_probe: samples must be >= 1");
    rep.samples = samples;
    rep.q_max_bound = q_max_bound(state.n, params, cq);
    rep.max_delta_phi = -std::numeric_limits<double>::infinity();

    SignVector v(state.n);
    double sum = 0.0, sumsq = 0.0;
    std::size_t hit_q = 0, hit_qmax = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        sample_vector_into(rng, v);
        const auto diag = choose_sign_power_greedy(state, v, params, rng);
        rep.Q = diag.Q;
        sum += diag.delta_phi;
        sumsq += diag.delta_phi * diag.delta_phi;
        rep.max_delta_phi = std::max(rep.max_delta_phi, diag.delta_phi);
        if (std::abs(diag.L) >= 10.0 * diag.Q) ++hit_q;
        if (std::abs(diag.L) >= 10.0 * rep.q_max_bound) ++hit_qmax;
        if (diag.tie) ++rep.ties;
    }
    const double k = static_cast<double>(samples);
    rep.mean_delta_phi = sum / k;
    if (samples > 1) {
        const double var = std::max(0.0, (sumsq - k * rep.mean_delta_phi * rep.mean_delta_phi) / (k - 1.0));
        rep.stderr_delta_phi = std::sqrt(var / k);
    }
    rep.frac_L_ge_10Q = static_cast<double>(hit_q) / k;
    rep.frac_L_ge_10Qmax = static_cast<double>(hit_qmax) / k;
    return rep;
}

CoshProbeReport cosh_drift_probe(const GameState& state, std::size_t samples, const StrategyParams& params,
                                 RngStream& rng) {
    CoshProbeReport rep;
    rep.lambda = params.lambda(state.n);
    rep.phi = cosh_potential(state, rep.lambda);
    if (rep.phi < 2.0 * static_cast<double>(state.n)) {
        throw std::domain_error("cosh_drift_probe: potential " + std::to_string(rep.phi) + " below 2n");
    }
    if (samples == 0) throw std::invalid_argument("cosh_drift_probe: samples must be >= 1");
    rep.samples = samples;

    SignVector v(state.n);
    double sum = 0.0;
    std::size_t hits = 0;
    const double threshold_factor = params.c_cosh / 2.0;
    for (std::size_t s = 0; s < samples; ++s) {
        sample_vector_into(rng, v);
        const auto diag = choose_sign_cosh_greedy(state, v, params, rng);
        rep.Q = diag.Q;
        sum += diag.delta_phi;
        if (std::abs(diag.L) >= threshold_factor * diag.Q) ++hits;
    }
    rep.mean_delta_phi = sum / static_cast<double>(samples);
    rep.frac_L_ge_half_c_Q = static_cast<double>(hits) / static_cast<double>(samples);
    return rep;
}

TailFit fit_log_tail(std::span<const std::uint64_t> histogram, std::uint64_t min_count) {
    TailFit fit;
    std::uint64_t total = 0;
    for (auto c : histogram) total += c;
    std::vector<double> xs, ys;
    for (std::size_t y = 1; y < histogram.size(); ++y) {
        if (histogram[y] >= min_count && histogram[y] > 0) {
            xs.push_back(static_cast<double>(y));
            ys.push_back(std::log(static_cast<double>(histogram[y]) / static_cast<double>(total)));
        }
    }
    fit.points = xs.size();
    if (xs.size() < 3) {
        fit.slope = fit.r2 = fit.intercept = std::numeric_limits<double>::quiet_NaN();
        return fit;
    }
    const double k = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

namespace {

struct TailAccumulator {
    std::vector<std::uint64_t> histogram;
    std::int64_t max_position = 0;
    double drift_sum = 0.0;
    std::uint64_t drift_count = 0;
};

TailAccumulator run_tail_trial(std::size_t n, std::int64_t T, std::uint64_t seed, std::size_t trial) {
    TailAccumulator acc;
    StrategyParams params;
    params.seed = seed;
    GameState state = new_game(n, params);
    RngStream rng(seed, trial);
    SignVector v(n);
    const std::int64_t half = T / 2;
    for (std::int64_t r = 0; r < T; ++r) {
        sample_vector_into(rng, v);
        const auto diag = choose_sign_majority(state, v, rng);
        const auto e = v.entries();
        const bool sampling = state.t >= half;
        for (std::size_t j = 0; j < n; ++j) {
            const std::int64_t before = state.d[j];
            const std::int64_t after = before + diag.x * e[j];
            if (sampling && before != 0) {
                acc.drift_sum += static_cast<double>(std::abs(after) - std::abs(before));
                ++acc.drift_count;
            }
        }
        apply_step(state, v, diag.x);
        for (auto dj : state.d) {
            const auto pos = std::abs(dj);
            acc.max_position = std::max(acc.max_position, pos);
            if (state.t > half) {
                const auto idx = static_cast<std::size_t>(pos);
                if (acc.histogram.size() <= idx) acc.histogram.resize(idx + 1, 0);
                ++acc.histogram[idx];
            }
        }
    }
    return acc;
}

}  // namespace

TailReport majority_tail_probe(std::size_t n, std::int64_t T, std::size_t trials, std::uint64_t seed,
                               int threads) {
    if (n < 1) throw std::invalid_argument("n must be ≥ 1");
    if (trials < 1) throw std::invalid_argument("trials must be ≥ 1");
    if (T < 100 * static_cast<std::int64_t>(n)) throw std::invalid_argument("majority_tail_probe needs T >= 100 n");

    std::vector<TailAccumulator> per_trial(trials);
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(trials); ++i) {
        per_trial[static_cast<std::size_t>(i)] = run_tail_trial(n, T, seed, static_cast<std::size_t>(i));
    }

    TailReport rep;
    rep.n = n;
    rep.T = T;
    rep.trials = trials;
    rep.bound = 8.0 * std::sqrt(static_cast<double>(n)) * std::log(static_cast<double>(n));
    double drift_sum = 0.0;
    std::uint64_t drift_count = 0;
    for (const auto& acc : per_trial) {
        if (rep.histogram.size() < acc.histogram.size()) rep.histogram.resize(acc.histogram.size(), 0);
        for (std::size_t y = 0; y < acc.histogram.size(); ++y) rep.histogram[y] += acc.histogram[y];
        rep.max_position = std::max(rep.max_position, acc.max_position);
        drift_sum += acc.drift_sum;
        drift_count += acc.drift_count;
    }
    rep.fit = fit_log_tail(rep.histogram);
    rep.mean_drift = drift_count > 0 ? drift_sum / static_cast<double>(drift_count) : 0.0;
    rep.K = -2.0 * std::sqrt(static_cast<double>(n)) * rep.mean_drift;
    return rep;
}

namespace {

std::int64_t level_for_ratio(double cn, double ratio_p, int p) {
    // (cn/g)^p = ratio_p  =>  d^2 = cn (1 - ratio_p^{-1/p})
    const double g = cn * std::pow(ratio_p, -1.0 / p);
    return static_cast<std::int64_t>(std::llround(std::sqrt(std::max(0.0, cn - g))));
}

}  // namespace

GameState uniform_power_state(std::size_t n, double target_phi, const StrategyParams& params) {
    if (target_phi < 1.0) throw std::invalid_argument("target potential must be >= 1");
    const double cn = params.c * static_cast<double>(n);
    const std::int64_t level = level_for_ratio(cn, target_phi, params.p);
    std::vector<std::int64_t> d(n);
    for (std::size_t j = 0; j < n; ++j) d[j] = (j % 2 == 0) ? level : -level;
    return inject_state(d, {}, params);
}

GameState spike_power_state(std::size_t n, std::size_t m, double target_phi, const StrategyParams& params) {
    if (m < 1 || m > n) throw std::invalid_argument("spike count must be in [1, n]");
    const double nn = static_cast<double>(n);
    const double per = (target_phi * nn - static_cast<double>(n - m)) / static_cast<double>(m);
    if (per < 1.0) throw std::invalid_argument("target potential too small for the spike count");
    const std::int64_t level = level_for_ratio(params.c * nn, per, params.p);
    std::vector<std::int64_t> d(n, 0);
    for (std::size_t j = 0; j < m; ++j) d[j] = (j % 2 == 0) ? level : -level;
    return inject_state(d, {}, params);
}

GameState uniform_cosh_state(std::size_t n, double target_phi, const StrategyParams& params) {
    const double per = target_phi / static_cast<double>(n);
    if (per < 1.0) throw std::invalid_argument("target cosh potential must be >= n");
    const double lambda = params.lambda(n);
    auto level = static_cast<std::int64_t>(std::ceil(std::acosh(per) / lambda));
    std::vector<std::int64_t> d(n);
    auto fill = [&](std::int64_t lv) {
        for (std::size_t j = 0; j < n; ++j) d[j] = (j % 2 == 0) ? lv : -lv;
    };
    fill(level);
    // Guard against acosh rounding leaving the state just under target.
    while (cosh_potential(inject_state(d, {}, params, true), lambda) < target_phi) fill(++level);
    return inject_state(d, {}, params, true);
}

}  // namespace vbal
