#include "vbal/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vbal/potential.hpp"

namespace vbal {

void ExperimentConfig::validate() const {
    if (n_values.empty()) throw std::invalid_argument("n list must not be empty");
    for (auto n : n_values) {
        if (n < 1) throw std::invalid_argument("n must be ≥ 1");
    }
    for (auto T : T_values) {
        if (T < 1) throw std::invalid_argument("T must be ≥ 1");
    }
    if (trials < 1) throw std::invalid_argument("trials must be ≥ 1");
    params.validate();
}

std::vector<std::pair<std::size_t, std::int64_t>> ExperimentConfig::cells() const {
    std::vector<std::pair<std::size_t, std::int64_t>> out;
    for (auto n : n_values) {
        if (T_values.empty()) {
            out.emplace_back(n, static_cast<std::int64_t>(n));
        } else {
            for (auto T : T_values) out.emplace_back(n, T);
        }
    }
    return out;
}

double tracked_potential(const GameState& state, StrategyKind kind, const StrategyParams& params) {
    if (kind == StrategyKind::cosh_greedy) return cosh_potential(state, params.lambda(state.n));
    return power_potential(state, params.c, params.p);
}

void play_rounds(GameState& state, const Strategy& strategy, std::int64_t rounds, RngStream& rng,
                 TrialResult& result, const TraceSink* sink) {
    const auto& params = strategy.params();
    const bool cosh_kind = strategy.kind() == StrategyKind::cosh_greedy;
    SignVector v(state.n);
    std::int64_t red_rounds = 0;

    for (std::int64_t r = 0; r < rounds; ++r) {
        sample_vector_into(rng, v);
        StepDiagnostics diag = strategy.choose(state, v, rng);
        apply_step(state, v, diag.x);

        // Breaches are judged before recoloring resets the mask.
        const PowerValue masked = power_potential_value(state, params.c, params.p);
        if (!masked.finite()) ++result.breach_count;
        diag.recolored = strategy.after_step(state);
        if (diag.tie) ++result.tie_count;
        if (state.any_red()) ++red_rounds;

        double phi;
        if (cosh_kind) {
            phi = cosh_potential(state, params.lambda(state.n));
        } else if (diag.recolored) {
            phi = power_potential(state, params.c, params.p);
        } else {
            phi = masked.phi;
        }
        result.phi_max = std::max(result.phi_max, phi);

        const std::int64_t V = current_value(state);
        result.running_max_V = std::max(result.running_max_V, V);
        if (sink != nullptr) (*sink)(TraceRow{state.t, diag.x, V, phi, diag.L, diag.Q, diag.rule_used});
    }
    result.final_V = current_value(state);
    result.phase_count = state.phases;
    result.red_time_fraction = rounds > 0 ? static_cast<double>(red_rounds) / static_cast<double>(rounds) : 0.0;
}

TrialResult run_trial(const ExperimentConfig& config, std::size_t n, std::int64_t T, std::size_t trial_index,
                      const TraceSink* sink) {
    const auto start = std::chrono::steady_clock::now();
    GameState state = new_game(n, config.params);
    RngStream rng(config.params.seed, trial_index);
    const Strategy strategy(config.strategy, config.params);

    TrialResult result;
    result.phi_max = tracked_potential(state, config.strategy, config.params);
    play_rounds(state, strategy, T, rng, result, sink);
    result.wall_time =
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
    return result;
}

double quantile(std::span<const double> sorted, double q) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

Quantiles quantiles(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    return {quantile(values, 0.0),  quantile(values, 0.25), quantile(values, 0.5),
            quantile(values, 0.75), quantile(values, 0.95), quantile(values, 1.0)};
}

namespace {

MeanStderr mean_stderr(std::span<const double> xs) {
    MeanStderr out;
    if (xs.empty()) return out;
    double sum = 0.0;
    for (double x : xs) sum += x;
    out.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - out.mean) * (x - out.mean);
        const double var = ss / static_cast<double>(xs.size() - 1);
        out.stderr_ = std::sqrt(var / static_cast<double>(xs.size()));
    }
    return out;
}

}  // namespace

CellSummary summarize(std::size_t n, std::int64_t T, std::span<const TrialResult> trials) {
    CellSummary cell;
    cell.n = n;
    cell.T = T;
    cell.trials = trials.size();

    std::vector<double> finals, maxes, r1, r2;
    const double sn = std::sqrt(static_cast<double>(n));
    const double snl = std::sqrt(static_cast<double>(n) * std::log(static_cast<double>(n)));
    double red_sum = 0.0;
    for (const auto& tr : trials) {
        finals.push_back(static_cast<double>(tr.final_V));
        maxes.push_back(static_cast<double>(tr.running_max_V));
        r1.push_back(static_cast<double>(tr.final_V) / sn);
        if (n > 1) r2.push_back(static_cast<double>(tr.final_V) / snl);
        cell.breach_total += tr.breach_count;
        cell.tie_total += tr.tie_count;
        cell.phase_total += tr.phase_count;
        cell.phi_max = std::max(cell.phi_max, tr.phi_max);
        red_sum += tr.red_time_fraction;
    }
    cell.final_V = quantiles(finals);
    cell.running_max_V = quantiles(maxes);
    cell.V_over_sqrt_n = mean_stderr(r1);
    if (n > 1) cell.V_over_sqrt_nlogn = mean_stderr(r2);
    cell.red_time_fraction_mean = trials.empty() ? 0.0 : red_sum / static_cast<double>(trials.size());
    return cell;
}

namespace {

ExperimentResult collect(const ExperimentConfig& config, std::vector<std::vector<TrialResult>> trials) {
    ExperimentResult out;
    const auto cells = config.cells();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        out.summary.cells.push_back(summarize(cells[i].first, cells[i].second, trials[i]));
    }
    out.trials = std::move(trials);
    return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto cells = config.cells();
    std::vector<std::vector<TrialResult>> trials(cells.size(), std::vector<TrialResult>(config.trials));
    const auto jobs = static_cast<std::int64_t>(cells.size() * config.trials);
    const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();

    // Each job writes only its own slot; no shared mutable state.
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::int64_t job = 0; job < jobs; ++job) {
        const auto cell = static_cast<std::size_t>(job) / config.trials;
        const auto index = static_cast<std::size_t>(job) % config.trials;
        trials[cell][index] = run_trial(config, cells[cell].first, cells[cell].second, index);
    }
    return collect(config, std::move(trials));
}

ExperimentResult run_experiment_serial(const ExperimentConfig& config) {
    config.validate();
    const auto cells = config.cells();
    std::vector<std::vector<TrialResult>> trials(cells.size(), std::vector<TrialResult>(config.trials));
    for (std::size_t cell = 0; cell < cells.size(); ++cell) {
        for (std::size_t index = 0; index < config.trials; ++index) {
            trials[cell][index] = run_trial(config, cells[cell].first, cells[cell].second, index);
        }
    }
    return collect(config, std::move(trials));
}

std::vector<SweepRow> scaling_sweep(const ExperimentConfig& base, std::span<const StrategyKind> strategies) {
    if (base.n_values.size() < 2) throw std::invalid_argument("sweep needs at least 2 n values");
    if (strategies.empty()) throw std::invalid_argument("sweep needs at least one strategy");
    std::vector<SweepRow> rows;
    for (auto kind : strategies) {
        ExperimentConfig cfg = base;
        cfg.strategy = kind;
        const auto result = run_experiment(cfg);
        for (const auto& cell : result.summary.cells) {
            SweepRow row;
            row.n = cell.n;
            row.T = cell.T;
            row.strategy = kind;
            row.median_V = cell.final_V.median;
            const double n = static_cast<double>(cell.n);
            row.median_V_over_sqrt_n = row.median_V / std::sqrt(n);
            row.median_V_over_sqrt_nlogn =
                cell.n > 1 ? row.median_V / std::sqrt(n * std::log(n)) : std::numeric_limits<double>::quiet_NaN();
            row.q95_V = cell.final_V.q95;
            row.trials = cell.trials;
            rows.push_back(row);
        }
    }
    return rows;
}

GameState inject_state(std::span<const std::int64_t> d, std::span<const Color> colors, const StrategyParams& params,
                       bool breach_ok) {
    GameState s = new_game(d.size(), params);
    if (!colors.empty()) {
        if (colors.size() != d.size()) throw std::invalid_argument("colors length does not match d");
        s.colors.assign(colors.begin(), colors.end());
    }
    for (std::size_t j = 0; j < d.size(); ++j) {
        if (!breach_ok && gap(d[j], params.c, s.n) <= 0.0) {
            throw std::invalid_argument("|d_j| >= sqrt(cn) at coordinate " + std::to_string(j) +
                                        " needs breach_ok");
        }
    }
    s.d.assign(d.begin(), d.end());
    s.synthetic = true;
    return s;
}

}  // namespace vbal
