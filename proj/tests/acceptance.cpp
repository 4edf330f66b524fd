// Acceptance gate: one PASS/FAIL line per primary criterion, exit 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "vbal/harness.hpp"
#include "vbal/io.hpp"
#include "vbal/potential.hpp"
#include "vbal/probes.hpp"
#include "vbal/verify.hpp"

using namespace vbal;

namespace {

// Pinned tolerances.
constexpr double kInvariantSeconds = 60.0;
constexpr std::size_t kProbeSamples = 10000;
constexpr double kProbeMinFraction = 0.23;
constexpr double kFlatnessMax = 0.25;          // max/min - 1 of the normalized medians
constexpr double kScalingSeconds = 600.0;
constexpr std::size_t kScalingTrials = 200;
constexpr std::uint64_t kSeed = 1;
constexpr std::size_t kTailN = 32;
constexpr std::int64_t kTailT = 100000;
constexpr std::size_t kTailTrials = 20;
constexpr double kTailMinR2 = 0.9;
constexpr std::size_t kHorizonTrials = 20;
constexpr double kHorizonMaxRatio = 1.25;
constexpr double kMaxRedFraction = 0.01;

struct Outcome {
    bool passed = true;
    std::vector<std::string> notes;

    void require(bool ok, std::string note) {
        passed = passed && ok;
        notes.push_back(std::string(ok ? "ok   " : "FAIL ") + note);
    }
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

template <class... Args>
std::string fmtn(const char* f, Args... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<CheckResult> verification;
double verification_seconds = 0.0;

const CheckResult& find_check(const std::string& name) {
    for (const auto& r : verification) {
        if (r.name == name) return r;
    }
    static const CheckResult missing{"missing", false, "check not run"};
    return missing;
}

Outcome exact_invariants() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    verification = run_verification();
    verification_seconds = seconds_since(t0);
    for (const char* name : {"phi(0) = 1", "parity", "greedy dominance", "class-count bound", "taylor bound"}) {
        const auto& r = find_check(name);
        o.require(r.passed, r.name + ": " + r.detail);
    }
    o.require(verification_seconds < kInvariantSeconds,
              fmt("full verification suite %.1fs", verification_seconds) + fmt(" (limit %.0fs)", kInvariantSeconds));
    return o;
}

Outcome enumeration_oracles() {
    Outcome o;
    for (const char* name : {"pz lower bound", "spread maximality", "online >= offline"}) {
        const auto& r = find_check(name);
        o.require(r.passed, r.name + ": " + r.detail);
    }
    return o;
}

Outcome drift_probes() {
    Outcome o;
    const StrategyParams params;
    std::uint64_t stream = 0;
    for (std::size_t n : {64u, 256u}) {
        struct Probe {
            std::string label;
            GameState state;
        };
        std::vector<Probe> states;
        for (double f : {0.5, 0.75, 1.0}) {
            const double target = f * params.H;
            auto s = uniform_power_state(n, target, params);
            // Integer rounding can step outside [H/2, H]; nudge back in.
            while (power_potential(s, params.c, params.p) > params.H) {
                for (auto& d : s.d) d -= d > 0 ? 1 : -1;
            }
            while (power_potential(s, params.c, params.p) < params.H / 2) {
                for (auto& d : s.d) d += d > 0 ? 1 : -1;
            }
            states.push_back({fmt("uniform %.2fH", f), s});
        }
        for (std::size_t m : {n / 4, n / 16, std::size_t{1}}) {
            states.push_back({fmtn("spike m=%zu", m), spike_power_state(n, m, 0.75 * params.H, params)});
        }
        for (const auto& [label, s] : states) {
            RngStream rng(kSeed, stream++);
            const auto rep = drift_probe(s, kProbeSamples, params, rng);
            const std::string where = fmtn("n=%zu %s phi=%.2f: ", n, label.c_str(), rep.phi);
            o.require(rep.mean_delta_phi < 0.0, where + fmtn("E[dPhi]=%.3g (se %.2g) < 0", rep.mean_delta_phi,
                                                             rep.stderr_delta_phi));
            o.require(rep.frac_L_ge_10Q >= kProbeMinFraction,
                      where + fmtn("Pr[|L|>=10Q]=%.4f >= %.2f", rep.frac_L_ge_10Q, kProbeMinFraction));
            o.require(rep.max_delta_phi <= rep.q_max_bound,
                      where + fmtn("max dPhi=%.4g <= C_Q n^{-1/2}=%.4g", rep.max_delta_phi, rep.q_max_bound));
        }
        for (double f : {2.0, 4.0}) {
            const auto s = uniform_cosh_state(n, f * static_cast<double>(n), params);
            RngStream rng(kSeed, stream++);
            const auto rep = cosh_drift_probe(s, kProbeSamples, params, rng);
            o.require(rep.frac_L_ge_half_c_Q >= kProbeMinFraction,
                      fmtn("n=%zu cosh phi=%.1f (%.0fn): Pr[|L|>=6Q]=%.4f >= %.2f", n, rep.phi, f,
                           rep.frac_L_ge_half_c_Q, kProbeMinFraction));
        }
    }
    return o;
}

double spread(const std::vector<double>& xs) {
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    return *hi / *lo - 1.0;
}

Outcome scaling() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig cfg;
    cfg.n_values = {64, 256, 1024};
    cfg.trials = kScalingTrials;
    cfg.params.seed = kSeed;
    const std::vector<StrategyKind> kinds{StrategyKind::power_greedy, StrategyKind::random};
    const auto rows = scaling_sweep(cfg, kinds);

    std::vector<double> greedy, random_sqrt_n, random_sqrt_nlogn;
    for (const auto& r : rows) {
        if (r.strategy == StrategyKind::power_greedy) {
            greedy.push_back(r.median_V_over_sqrt_n);
        } else {
            random_sqrt_n.push_back(r.median_V_over_sqrt_n);
            random_sqrt_nlogn.push_back(r.median_V_over_sqrt_nlogn);
        }
    }
    const double gs = spread(greedy);
    o.require(gs < kFlatnessMax, fmtn("power median V/sqrt(n) = %.4f, %.4f, %.4f; max/min-1 = %.4f < %.2f",
                                      greedy[0], greedy[1], greedy[2], gs, kFlatnessMax));
    const bool increasing = random_sqrt_n[0] < random_sqrt_n[1] && random_sqrt_n[1] < random_sqrt_n[2];
    o.require(increasing, fmtn("random median V/sqrt(n) = %.4f, %.4f, %.4f strictly increasing", random_sqrt_n[0],
                               random_sqrt_n[1], random_sqrt_n[2]));
    const double rs = spread(random_sqrt_nlogn);
    o.require(rs < kFlatnessMax, fmtn("random median V/sqrt(n ln n) = %.4f, %.4f, %.4f; max/min-1 = %.4f < %.2f",
                                      random_sqrt_nlogn[0], random_sqrt_nlogn[1], random_sqrt_nlogn[2], rs,
                                      kFlatnessMax));

    // Breach totals come from the same cells as the sweep.
    cfg.strategy = StrategyKind::power_greedy;
    const auto res = run_experiment(cfg);
    std::int64_t breaches = 0;
    for (const auto& c : res.summary.cells) breaches += c.breach_total;
    o.require(breaches == 0, fmtn("power greedy breaches over %zu trials: %lld", 3 * kScalingTrials,
                                  static_cast<long long>(breaches)));
    const double secs = seconds_since(t0);
    o.require(secs <= kScalingSeconds, fmt("scaling runtime %.1fs", secs) + fmt(" (limit %.0fs)", kScalingSeconds));
    return o;
}

Outcome arbitrary_horizon() {
    Outcome o;
    const auto tail = majority_tail_probe(kTailN, kTailT, kTailTrials, kSeed);
    o.require(static_cast<double>(tail.max_position) <= tail.bound,
              fmtn("majority n=32 T=1e5: max folded position %lld <= 8 sqrt(n) ln n = %.1f",
                   static_cast<long long>(tail.max_position), tail.bound));
    o.require(tail.fit.slope < 0.0 && tail.fit.r2 >= kTailMinR2,
              fmtn("log-tail slope %.4f < 0, R^2 %.4f >= %.2f (%zu points)", tail.fit.slope, tail.fit.r2,
                   kTailMinR2, tail.fit.points));

    ExperimentConfig cfg;
    cfg.strategy = StrategyKind::combined;
    cfg.n_values = {32};
    cfg.T_values = {10000, 1000000};
    cfg.trials = kHorizonTrials;
    cfg.params.seed = kSeed;
    const auto res = run_experiment(cfg);
    const double short_med = res.summary.cells[0].running_max_V.median;
    const double long_med = res.summary.cells[1].running_max_V.median;
    o.require(long_med <= kHorizonMaxRatio * short_med,
              fmtn("combined n=32: median running max %.1f at T=1e6 <= %.2f x %.1f at T=1e4", long_med,
                   kHorizonMaxRatio, short_med));
    double worst_red = 0.0;
    for (const auto& t : res.trials[1]) worst_red = std::max(worst_red, t.red_time_fraction);
    o.require(worst_red < kMaxRedFraction,
              fmtn("combined T=1e6: max red_time_fraction %.5f < %.2f (phases %lld)", worst_red, kMaxRedFraction,
                   static_cast<long long>(res.summary.cells[1].phase_total)));
    return o;
}

Outcome reproducibility() {
    Outcome o;
    ExperimentConfig cfg;
    cfg.n_values = {64, 128};
    cfg.T_values = {1000};
    cfg.trials = 100;
    cfg.params.seed = 7;
    for (auto kind : {StrategyKind::power_greedy, StrategyKind::combined, StrategyKind::majority}) {
        cfg.strategy = kind;
        cfg.threads = 8;
        const auto a = summary_to_json(cfg, run_experiment(cfg).summary).dump(2);
        const auto b = summary_to_json(cfg, run_experiment(cfg).summary).dump(2);
        cfg.threads = 1;
        const auto one = summary_to_json(cfg, run_experiment(cfg).summary).dump(2);
        o.require(a == b && a == one,
                  std::string(to_string(kind)) + ": summary.json identical across runs and threads 1 vs 8");
    }
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"exact invariants", exact_invariants},   {"enumeration oracles", enumeration_oracles},
        {"drift probes", drift_probes},           {"scaling", scaling},
        {"arbitrary horizon", arbitrary_horizon}, {"reproducibility", reproducibility},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        const Outcome o = c.run();
        std::printf("%s  %-20s (%.1fs)\n", o.passed ? "PASS" : "FAIL", c.name, seconds_since(t0));
        for (const auto& note : o.notes) std::printf("        %s\n", note.c_str());
        std::fflush(stdout);
        failed += o.passed ? 0 : 1;
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
