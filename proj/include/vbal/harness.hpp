#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vbal/game.hpp"
#include "vbal/strategies.hpp"

namespace vbal {

enum class TraceLevel { none, summary, full };

struct ExperimentConfig {
    StrategyKind strategy = StrategyKind::power_greedy;
    std::vector<std::size_t> n_values;
    std::vector<std::int64_t> T_values;  // empty: T = n
    std::size_t trials = 1;
    StrategyParams params;               // params.seed is the experiment seed
    TraceLevel trace = TraceLevel::summary;
    int threads = 0;                     // 0: OpenMP default; never affects results
    std::string out_dir = ".";

    /// Throws std::invalid_argument naming the first bad field.
    void validate() const;

    /// (n, T) cells in run order.
    std::vector<std::pair<std::size_t, std::int64_t>> cells() const;
};

struct TrialResult {
    std::int64_t final_V = 0;
    std::int64_t running_max_V = 0;
    double phi_max = 0.0;
    std::int64_t breach_count = 0;
    std::int64_t tie_count = 0;
    std::int64_t phase_count = 0;
    double red_time_fraction = 0.0;
    std::chrono::nanoseconds wall_time{0};
};

/// One row of a step-level trace.
struct TraceRow {
    std::int64_t t = 0;
    int x = 0;
    std::int64_t V = 0;
    double phi = 0.0;
    double L = 0.0;
    double Q = 0.0;
    Rule rule_used = Rule::random;
};
using TraceSink = std::function<void(const TraceRow&)>;

/// Potential tracked for phi_max and traces: cosh for the cosh strategy,
/// the masked power potential otherwise.
double tracked_potential(const GameState& state, StrategyKind kind, const StrategyParams& params);

/// Plays `rounds` more rounds on `state`: sample, choose, apply, recolor.
/// Accumulates into `result` (running max, counters), and finally sets
/// final_V and red_time_fraction over the rounds played here.
void play_rounds(GameState& state, const Strategy& strategy, std::int64_t rounds, RngStream& rng,
                 TrialResult& result, const TraceSink* sink = nullptr);

/// Fresh game of dimension n, T rounds, stream (params.seed, trial_index).
TrialResult run_trial(const ExperimentConfig& config, std::size_t n, std::int64_t T, std::size_t trial_index,
                      const TraceSink* sink = nullptr);

struct Quantiles {
    double min = 0, q25 = 0, median = 0, q75 = 0, q95 = 0, max = 0;
};

/// Linear interpolation between order statistics.
double quantile(std::span<const double> sorted, double q);
Quantiles quantiles(std::vector<double> values);

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
};

struct CellSummary {
    std::size_t n = 0;
    std::int64_t T = 0;
    std::size_t trials = 0;
    Quantiles final_V;
    Quantiles running_max_V;
    MeanStderr V_over_sqrt_n;
    std::optional<MeanStderr> V_over_sqrt_nlogn;  // undefined at n = 1
    std::int64_t breach_total = 0;
    std::int64_t tie_total = 0;
    std::int64_t phase_total = 0;
    double phi_max = 0.0;
    double red_time_fraction_mean = 0.0;
};

struct ExperimentSummary {
    std::vector<CellSummary> cells;
};

struct ExperimentResult {
    ExperimentSummary summary;
    std::vector<std::vector<TrialResult>> trials;  // [cell][trial_index]
};

/// Aggregates in trial-index order.
CellSummary summarize(std::size_t n, std::int64_t T, std::span<const TrialResult> trials);

/// Trials run under OpenMP; aggregation is serial over index-ordered results,
/// so the output does not depend on config.threads.
ExperimentResult run_experiment(const ExperimentConfig& config);
/// Single-threaded reference; same output as run_experiment.
ExperimentResult run_experiment_serial(const ExperimentConfig& config);

struct SweepRow {
    std::size_t n = 0;
    std::int64_t T = 0;
    StrategyKind strategy = StrategyKind::power_greedy;
    double median_V = 0.0;
    double median_V_over_sqrt_n = 0.0;
    double median_V_over_sqrt_nlogn = 0.0;  // NaN at n = 1
    double q95_V = 0.0;
    std::size_t trials = 0;
};

/// One row per (strategy, n, T) in strategy-major order. Needs >= 2 n values.
std::vector<SweepRow> scaling_sweep(const ExperimentConfig& base, std::span<const StrategyKind> strategies);

/// Wraps arbitrary positions in a synthetic state (t = 0, parity exempt).
/// Empty colors means all green. Throws std::invalid_argument if some
/// |d_j| >= sqrt(cn) unless breach_ok.
GameState inject_state(std::span<const std::int64_t> d, std::span<const Color> colors, const StrategyParams& params,
                       bool breach_ok = false);

}  // namespace vbal
