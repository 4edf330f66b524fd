// vbal: command-line driver for the online vector-balancing experiments.
//
//   vbal run      one (strategy, n, T) cell -> summary.json, trials.csv, trace.csv
//   vbal sweep    strategies x n list       -> sweep.csv
//   vbal compare  strategies on one grid    -> compare.csv, compare.json
//   vbal probe    drift / cosh / majority-tail probes -> probe.json (+ tail.csv)
//   vbal oracle   exhaustive references (offline, pz, spread) -> JSON on stdout
//   vbal verify   deterministic invariant suite, exit 0 iff all pass
//
// Exit codes: 0 success, 1 verification failure, 2 usage/config error.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vbal/harness.hpp"
#include "vbal/io.hpp"
#include "vbal/oracles.hpp"
#include "vbal/probes.hpp"
#include "vbal/verify.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

int usage_error(const std::string& kind, const std::string& message) {
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
    return kExitUsage;
}

struct CommonFlags {
    std::string config_path;
    std::string strategy;
    std::vector<long long> n;
    std::vector<std::string> T;
    long long trials = 0;
    unsigned long long seed = 0;
    double c = 0, H = 0, c_cosh = 0;
    int p = 0;
    std::string trace;
    int threads = 0;
    std::string out;

    std::vector<CLI::Option*> opts;

    void attach(CLI::App* app) {
        opts.push_back(app->add_option("--config", config_path, "JSON config file (flags override it)"));
        opts.push_back(app->add_option("--strategy", strategy, "random | power | cosh | majority | combined"));
        opts.push_back(app->add_option("--n", n, "dimension(s)")->delimiter(','));
        opts.push_back(app->add_option("--T", T, "horizon(s), or n")->delimiter(','));
        opts.push_back(app->add_option("--trials", trials, "trials per cell"));
        opts.push_back(app->add_option("--seed", seed, "experiment seed"));
        opts.push_back(app->add_option("--c", c, "gap scale constant"));
        opts.push_back(app->add_option("--p", p, "power-potential exponent"));
        opts.push_back(app->add_option("--H", H, "potential threshold"));
        opts.push_back(app->add_option("--c-cosh", c_cosh, "cosh-strategy constant"));
        opts.push_back(app->add_option("--trace", trace, "none | summary | full"));
        opts.push_back(app->add_option("--threads", threads, "OpenMP threads (results do not depend on it)"));
        opts.push_back(app->add_option("--out", out, "output directory"));
    }

    bool given(std::size_t i) const { return opts[i]->count() > 0; }

    vbal::ExperimentConfig resolve() const {
        vbal::ExperimentConfig cfg;
        cfg.n_values.clear();
        if (given(0)) cfg = vbal::load_config_file(config_path, cfg);
        json overlay = json::object();
        if (given(1)) overlay["strategy"] = strategy;
        if (given(2)) overlay["n"] = n;
        if (given(3)) {
            if (T.size() == 1 && T[0] == "n") {
                overlay["T"] = "n";
            } else {
                json list = json::array();
                for (const auto& s : T) {
                    long long v = 0;
                    try {
                        std::size_t used = 0;
                        v = std::stoll(s, &used);
                        if (used != s.size()) throw std::invalid_argument(s);
                    } catch (const std::exception&) {
                        throw vbal::ConfigError("T must be an integer, a list, or \"n\"");
                    }
                    list.push_back(v);
                }
                overlay["T"] = list;
            }
        }
        if (given(4)) overlay["trials"] = trials;
        if (given(5)) overlay["seed"] = seed;
        if (given(6)) overlay["c"] = c;
        if (given(7)) overlay["p"] = p;
        if (given(8)) overlay["H"] = H;
        if (given(9)) overlay["c_cosh"] = c_cosh;
        if (given(10)) overlay["trace"] = trace;
        if (given(11)) overlay["threads"] = threads;
        if (given(12)) overlay["out"] = out;
        cfg = vbal::apply_config_json(overlay, cfg);
        try {
            cfg.validate();
        } catch (const std::invalid_argument& e) {
            throw vbal::ConfigError(e.what());
        }
        return cfg;
    }
};

std::vector<vbal::StrategyKind> parse_strategy_list(const std::vector<std::string>& names,
                                                   const vbal::ExperimentConfig& cfg) {
    std::vector<vbal::StrategyKind> out;
    for (const auto& s : names) {
        const auto k = vbal::parse_strategy(s);
        if (!k) throw vbal::ConfigError("unknown strategy: " + s);
        out.push_back(*k);
    }
    if (out.empty()) out.push_back(cfg.strategy);
    return out;
}

std::vector<vbal::TraceRow> record_trace(const vbal::ExperimentConfig& cfg, std::size_t trial) {
    std::vector<vbal::TraceRow> rows;
    const std::size_t n = cfg.n_values.front();
    const auto T = cfg.cells().front().second;
    const vbal::GameState fresh = vbal::new_game(n, cfg.params);
    rows.push_back({0, 0, 0, vbal::tracked_potential(fresh, cfg.strategy, cfg.params),
                    std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(),
                    vbal::Rule::random});
    const vbal::TraceSink sink = [&rows](const vbal::TraceRow& r) { rows.push_back(r); };
    vbal::run_trial(cfg, n, T, trial, &sink);
    return rows;
}

int cmd_run(const CommonFlags& flags) {
    const auto cfg = flags.resolve();
    if (cfg.cells().size() != 1) throw vbal::ConfigError("run needs exactly one n and one T (use sweep)");
    const fs::path dir = cfg.out_dir;
    vbal::ensure_directory(dir);
    const auto result = vbal::run_experiment(cfg);
    const json config_json = vbal::config_to_json(cfg);

    vbal::write_file(dir / "summary.json", vbal::summary_to_json(cfg, result.summary).dump(2) + "\n");
    if (cfg.trace != vbal::TraceLevel::none) {
        vbal::write_file(dir / "trials.csv", vbal::trials_csv(config_json, result.trials.front()));
        vbal::write_file(dir / "trace.csv", vbal::trace_csv(config_json, record_trace(cfg, 0)));
    }
    if (cfg.trace == vbal::TraceLevel::full) {
        for (std::size_t i = 1; i < cfg.trials; ++i) {
            vbal::write_file(dir / ("trace_" + std::to_string(i) + ".csv"),
                             vbal::trace_csv(config_json, record_trace(cfg, i)));
        }
    }
    const auto& cell = result.summary.cells.front();
    std::printf("strategy=%s n=%zu T=%lld trials=%zu median_V=%g median_running_max_V=%g breaches=%lld\n",
                std::string(vbal::to_string(cfg.strategy)).c_str(), cell.n, static_cast<long long>(cell.T),
                cell.trials, cell.final_V.median, cell.running_max_V.median,
                static_cast<long long>(cell.breach_total));
    return kExitOk;
}

int cmd_sweep(const CommonFlags& flags, const std::vector<std::string>& strategies) {
    const auto cfg = flags.resolve();
    if (cfg.n_values.size() < 2) throw vbal::ConfigError("sweep needs an n list with at least 2 entries");
    const auto kinds = parse_strategy_list(strategies, cfg);
    const fs::path dir = cfg.out_dir;
    vbal::ensure_directory(dir);
    const auto rows = vbal::scaling_sweep(cfg, kinds);
    json config_json = vbal::config_to_json(cfg);
    json names = json::array();
    for (auto k : kinds) names.push_back(std::string(vbal::to_string(k)));
    config_json["strategies"] = names;
    config_json.erase("strategy");
    const auto text = vbal::sweep_csv(config_json, rows);
    vbal::write_file(dir / "sweep.csv", text);
    std::cout << text;
    return kExitOk;
}

int cmd_compare(const CommonFlags& flags, const std::vector<std::string>& strategies) {
    const auto cfg = flags.resolve();
    const auto kinds = parse_strategy_list(strategies, cfg);
    const fs::path dir = cfg.out_dir;
    vbal::ensure_directory(dir);

    json config_json = vbal::config_to_json(cfg);
    json names = json::array();
    for (auto k : kinds) names.push_back(std::string(vbal::to_string(k)));
    config_json["strategies"] = names;
    config_json.erase("strategy");

    std::ostringstream csv;
    csv << "# config: " << config_json.dump() << '\n'
        << "strategy,n,T,trials,median_final_V,median_running_max_V,q95_final_V,mean_V_over_sqrt_n,"
           "stderr_V_over_sqrt_n,breach_total,tie_total,phase_total\n";
    json results = json::array();
    for (auto kind : kinds) {
        auto run_cfg = cfg;
        run_cfg.strategy = kind;
        const auto res = vbal::run_experiment(run_cfg);
        for (const auto& c : res.summary.cells) {
            csv << vbal::to_string(kind) << ',' << c.n << ',' << c.T << ',' << c.trials << ','
                << vbal::format_number(c.final_V.median) << ',' << vbal::format_number(c.running_max_V.median) << ','
                << vbal::format_number(c.final_V.q95) << ',' << vbal::format_number(c.V_over_sqrt_n.mean) << ','
                << vbal::format_number(c.V_over_sqrt_n.stderr_) << ',' << c.breach_total << ',' << c.tie_total
                << ',' << c.phase_total << '\n';
        }
        auto summary = vbal::summary_to_json(run_cfg, res.summary);
        results.push_back({{"strategy", std::string(vbal::to_string(kind))}, {"cells", summary["cells"]}});
    }
    vbal::write_file(dir / "compare.csv", csv.str());
    vbal::write_file(dir / "compare.json", json{{"config", config_json}, {"results", results}}.dump(2) + "\n");
    std::cout << csv.str();
    return kExitOk;
}

struct ProbeFlags {
    std::string kind = "power";
    std::size_t n = 64;
    std::size_t samples = 10000;
    double phi = 0;  // 0: default target per kind
    std::size_t spikes = 0;
    unsigned long long seed = 1;
    long long T = 100000;
    std::size_t trials = 20;
    int threads = 0;
    std::string out = ".";
};

int cmd_probe(const ProbeFlags& pf) {
    if (pf.n < 1) throw vbal::ConfigError("n must be ≥ 1");
    vbal::StrategyParams params;
    params.seed = pf.seed;
    json report;
    const fs::path dir = pf.out;
    vbal::ensure_directory(dir);
    json cfg = {{"kind", pf.kind}, {"n", pf.n}, {"seed", pf.seed}, {"c", params.c}, {"p", params.p},
                {"H", params.H}, {"c_cosh", params.c_cosh}};
    if (pf.kind == "power") {
        const double target = pf.phi > 0 ? pf.phi : 0.75 * params.H;
        const auto state = pf.spikes > 0 ? vbal::spike_power_state(pf.n, pf.spikes, target, params)
                                         : vbal::uniform_power_state(pf.n, target, params);
        vbal::RngStream rng(pf.seed, 0);
        try {
            report = vbal::to_json(vbal::drift_probe(state, pf.samples, params, rng));
        } catch (const std::domain_error& e) {
            throw vbal::ConfigError(e.what());
        }
        cfg["samples"] = pf.samples;
        cfg["target_phi"] = target;
        cfg["spikes"] = pf.spikes;
    } else if (pf.kind == "cosh") {
        const double target = pf.phi > 0 ? pf.phi : 2.0 * static_cast<double>(pf.n);
        vbal::RngStream rng(pf.seed, 0);
        try {
            report = vbal::to_json(vbal::cosh_drift_probe(vbal::uniform_cosh_state(pf.n, target, params),
                                                          pf.samples, params, rng));
        } catch (const std::domain_error& e) {
            throw vbal::ConfigError(e.what());
        }
        cfg["samples"] = pf.samples;
        cfg["target_phi"] = target;
    } else if (pf.kind == "tail") {
        vbal::TailReport rep;
        try {
            rep = vbal::majority_tail_probe(pf.n, pf.T, pf.trials, pf.seed, pf.threads);
        } catch (const std::invalid_argument& e) {
            throw vbal::ConfigError(e.what());
        }
        cfg["T"] = pf.T;
        cfg["trials"] = pf.trials;
        report = vbal::to_json(rep);
        vbal::write_file(dir / "tail.csv", vbal::tail_csv(cfg, rep.histogram));
    } else {
        throw vbal::ConfigError("probe kind must be power, cosh or tail");
    }
    const json out = {{"config", cfg}, {"report", report}};
    vbal::write_file(dir / "probe.json", out.dump(2) + "\n");
    std::cout << out.dump(2) << '\n';
    return kExitOk;
}

std::vector<double> parse_weights(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw vbal::ConfigError("bad weight: " + item);
        }
    }
    return out;
}

struct OracleFlags {
    std::string kind = "offline";
    std::string weights;
    std::string vectors;  // "1,1;1,-1"
    double center = 0.0;
    double halfwidth = 1.0;
    std::size_t n = 4;
    std::size_t T = 8;
    unsigned long long seed = 1;
};

int cmd_oracle(const OracleFlags& of) {
    json out;
    try {
        if (of.kind == "offline") {
            std::vector<vbal::SignVector> vs;
            if (!of.vectors.empty()) {
                std::stringstream rows(of.vectors);
                std::string row;
                while (std::getline(rows, row, ';')) {
                    std::vector<int> entries;
                    for (double x : parse_weights(row)) entries.push_back(static_cast<int>(x));
                    vs.emplace_back(std::span<const int>(entries));
                }
            } else {
                vbal::RngStream rng(of.seed, 0);
                for (std::size_t t = 0; t < of.T; ++t) vs.push_back(vbal::sample_vector(rng, of.n));
            }
            out = {{"kind", "offline"}, {"T", vs.size()}, {"n", vs.empty() ? 0 : vs.front().size()},
                   {"optimum", vbal::offline_optimum(vs)}};
        } else if (of.kind == "pz" || of.kind == "spread") {
            const auto a = parse_weights(of.weights);
            const auto rep = of.kind == "pz" ? vbal::pz_enumerate(a) : vbal::spread_enumerate(a, of.center, of.halfwidth);
            out = {{"kind", of.kind}, {"m", a.size()},          {"total", rep.total},
                   {"hits", rep.hits}, {"fraction", rep.fraction}, {"threshold", rep.threshold}};
            if (of.kind == "spread") {
                out["center"] = of.center;
                out["all_ones_fraction"] = vbal::all_ones_central_fraction(a.size(), of.halfwidth);
            }
        } else {
            throw vbal::ConfigError("oracle kind must be offline, pz or spread");
        }
    } catch (const std::invalid_argument& e) {
        throw vbal::ConfigError(e.what());
    } catch (const std::length_error& e) {
        throw vbal::ConfigError(e.what());
    }
    std::cout << out.dump(2) << '\n';
    return kExitOk;
}

int cmd_verify(unsigned long long seed, const std::string& fault) {
    vbal::VerifyOptions opt;
    opt.seed = seed;
    if (fault == "class-boundary") {
        opt.flip_class_boundary = true;
    } else if (!fault.empty()) {
        throw vbal::ConfigError("unknown fault: " + fault);
    }
    const auto results = vbal::run_verification(opt);
    bool all = true;
    for (const auto& r : results) {
        std::printf("%-20s %s  %s\n", r.name.c_str(), r.passed ? "PASS" : "FAIL", r.detail.c_str());
        all = all && r.passed;
    }
    if (!all) {
        for (const auto& r : results) {
            if (!r.passed) std::fprintf(stderr, "verification failed: %s\n", r.name.c_str());
        }
    }
    return all ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"online vector balancing: strategies, experiments and oracles"};
    app.require_subcommand(1);

    CommonFlags run_flags, sweep_flags, compare_flags;
    auto* run = app.add_subcommand("run", "run one (strategy, n, T) cell");
    run_flags.attach(run);

    std::vector<std::string> sweep_strategies, compare_strategies;
    auto* sweep = app.add_subcommand("sweep", "scaling sweep over an n list");
    sweep_flags.attach(sweep);
    sweep->add_option("--strategies", sweep_strategies, "strategies to sweep")->delimiter(',');

    auto* compare = app.add_subcommand("compare", "several strategies on the same grid");
    compare_flags.attach(compare);
    compare->add_option("--strategies", compare_strategies, "strategies to compare")->delimiter(',');

    ProbeFlags pf;
    auto* probe = app.add_subcommand("probe", "drift probes on injected states, majority tail");
    probe->add_option("--kind", pf.kind, "power | cosh | tail");
    probe->add_option("--n", pf.n, "dimension");
    probe->add_option("--samples", pf.samples, "vectors sampled at the state");
    probe->add_option("--phi", pf.phi, "target potential of the injected state");
    probe->add_option("--spikes", pf.spikes, "power probe: number of loaded coordinates (0 = all)");
    probe->add_option("--seed", pf.seed, "seed");
    probe->add_option("--T", pf.T, "tail probe horizon");
    probe->add_option("--trials", pf.trials, "tail probe trials");
    probe->add_option("--threads", pf.threads, "OpenMP threads");
    probe->add_option("--out", pf.out, "output directory");

    OracleFlags of;
    auto* oracle = app.add_subcommand("oracle", "exhaustive reference computations");
    oracle->add_option("--kind", of.kind, "offline | pz | spread");
    oracle->add_option("--weights", of.weights, "comma-separated weights");
    oracle->add_option("--vectors", of.vectors, "offline vectors, e.g. 1,1;1,-1");
    oracle->add_option("--center", of.center, "spread interval center");
    oracle->add_option("--halfwidth", of.halfwidth, "spread interval half-width");
    oracle->add_option("--n", of.n, "offline: dimension of random vectors");
    oracle->add_option("--T", of.T, "offline: number of random vectors");
    oracle->add_option("--seed", of.seed, "offline: seed for random vectors");

    unsigned long long verify_seed = 2024;
    std::string fault;
    auto* verify = app.add_subcommand("verify", "run the invariant and oracle suite");
    verify->add_option("--seed", verify_seed, "seed for the randomized checks");
    verify->add_option("--inject-fault", fault, "self-test hook: class-boundary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return usage_error("usage", e.what());
    }

    try {
        if (*run) return cmd_run(run_flags);
        if (*sweep) return cmd_sweep(sweep_flags, sweep_strategies);
        if (*compare) return cmd_compare(compare_flags, compare_strategies);
        if (*probe) return cmd_probe(pf);
        if (*oracle) return cmd_oracle(of);
        if (*verify) return cmd_verify(verify_seed, fault);
    } catch (const vbal::ConfigError& e) {
        return usage_error("config", e.what());
    } catch (const vbal::OutputError& e) {
        return usage_error("output", e.what());
    } catch (const std::invalid_argument& e) {
        return usage_error("config", e.what());
    }
    return kExitUsage;
}
