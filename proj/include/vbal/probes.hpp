#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vbal/game.hpp"
#include "vbal/rng.hpp"

namespace vbal {

/// Q * n^{1-2/p} never exceeded this over the calibration search at the
/// default constants (p=4, c=1e5, H=4e^3); see docs/calibration.log (tools/calibrate_cq).
inline constexpr double kCalibratedCQ = 0.6;

/// C_Q * n^{-1+2/p}.
double q_max_bound(std::size_t n, const StrategyParams& params, double cq = kCalibratedCQ);

struct DriftProbeReport {
    std::size_t samples = 0;
    double phi = 0.0;             // masked power potential of the probed state
    double Q = 0.0;               // quadratic term at the state (independent of v)
    double q_max_bound = 0.0;     // C_Q n^{-1+2/p}
    double mean_delta_phi = 0.0;
    double stderr_delta_phi = 0.0;
    double max_delta_phi = 0.0;
    double frac_L_ge_10Q = 0.0;
    double frac_L_ge_10Qmax = 0.0;
    std::size_t ties = 0;
};

/// Plays the power-greedy sign against `samples` fresh vectors at a fixed
/// state. Throws std::domain_error unless the masked potential is in [H/2, H].
DriftProbeReport drift_probe(const GameState& state, std::size_t samples, const StrategyParams& params,
                             RngStream& rng, double cq = kCalibratedCQ);

struct CoshProbeReport {
    std::size_t samples = 0;
    double lambda = 0.0;
    double phi = 0.0;
    double Q = 0.0;  // lambda^2 * phi
    double mean_delta_phi = 0.0;
    double frac_L_ge_half_c_Q = 0.0;
};

/// Pr[|L| >= (c_cosh/2) Q] at a fixed state. Throws std::domain_error if phi < 2n.
CoshProbeReport cosh_drift_probe(const GameState& state, std::size_t samples, const StrategyParams& params,
                                 RngStream& rng);

struct TailFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::size_t points = 0;
};

/// Least squares of ln(frequency) on position, over positions >= 1 whose
/// count is at least min_count. NaN slope/r2 with fewer than 3 points.
TailFit fit_log_tail(std::span<const std::uint64_t> histogram, std::uint64_t min_count = 10);

struct TailReport {
    std::size_t n = 0;
    std::int64_t T = 0;
    std::size_t trials = 0;
    std::vector<std::uint64_t> histogram;  // folded positions, second half of every run
    std::int64_t max_position = 0;         // over every time step of every trial
    double bound = 0.0;                    // 8 sqrt(n) ln n
    TailFit fit;
    double mean_drift = 0.0;               // mean one-step change of a nonzero folded chip
    double K = 0.0;                        // -2 sqrt(n) * mean_drift
};

/// Majority-rule runs with streams (seed, 0..trials-1). Needs T >= 100 n.
TailReport majority_tail_probe(std::size_t n, std::int64_t T, std::size_t trials, std::uint64_t seed,
                               int threads = 0);

// Synthetic states for the probes.

/// All |d_j| equal, power potential as close to target as integers allow.
GameState uniform_power_state(std::size_t n, double target_phi, const StrategyParams& params);
/// m coordinates share the excess potential, the rest sit at 0.
GameState spike_power_state(std::size_t n, std::size_t m, double target_phi, const StrategyParams& params);
/// All |d_j| equal and cosh potential >= target_phi (smallest such integer).
GameState uniform_cosh_state(std::size_t n, double target_phi, const StrategyParams& params);

}  // namespace vbal
