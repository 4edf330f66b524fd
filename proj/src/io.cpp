#include "vbal/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace vbal {

using nlohmann::json;

namespace {

std::int64_t as_integer(const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw ConfigError(key + " must be an integer");
    return v.get<std::int64_t>();
}

double as_real(const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError(key + " must be a number");
    return v.get<double>();
}

std::size_t as_dimension(const json& v) {
    const auto n = as_integer(v, "n");
    if (n < 1) throw ConfigError("n must be ≥ 1");
    return static_cast<std::size_t>(n);
}

std::int64_t as_horizon(const json& v) {
    const auto T = as_integer(v, "T");
    if (T < 1) throw ConfigError("T must be ≥ 1");
    return T;
}

std::string csv_preamble(const json& config) { return "# config: " + config.dump() + "\n"; }

}  // namespace

std::string_view to_string(TraceLevel level) {
    switch (level) {
        case TraceLevel::none: return "none";
        case TraceLevel::summary: return "summary";
        case TraceLevel::full: return "full";
    }
    return "?";
}

TraceLevel parse_trace_level(std::string_view name) {
    for (auto lv : {TraceLevel::none, TraceLevel::summary, TraceLevel::full}) {
        if (to_string(lv) == name) return lv;
    }
    throw ConfigError("trace must be none, summary or full");
}

ExperimentConfig apply_config_json(const json& j, ExperimentConfig cfg) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, v] : j.items()) {
        if (key == "strategy") {
            if (!v.is_string()) throw ConfigError("strategy must be a string");
            const auto kind = parse_strategy(v.get<std::string>());
            if (!kind) throw ConfigError("unknown strategy: " + v.get<std::string>());
            cfg.strategy = *kind;
        } else if (key == "n") {
            cfg.n_values.clear();
            if (v.is_array()) {
                for (const auto& e : v) cfg.n_values.push_back(as_dimension(e));
            } else {
                cfg.n_values.push_back(as_dimension(v));
            }
        } else if (key == "T") {
            cfg.T_values.clear();
            if (v.is_string()) {
                if (v.get<std::string>() != "n") throw ConfigError("T must be an integer, a list, or \"n\"");
            } else if (v.is_array()) {
                for (const auto& e : v) cfg.T_values.push_back(as_horizon(e));
            } else {
                cfg.T_values.push_back(as_horizon(v));
            }
        } else if (key == "trials") {
            const auto t = as_integer(v, key);
            if (t < 1) throw ConfigError("trials must be ≥ 1");
            cfg.trials = static_cast<std::size_t>(t);
        } else if (key == "seed") {
            if (!v.is_number_integer()) throw ConfigError("seed must be an integer");
            cfg.params.seed = v.get<std::uint64_t>();
        } else if (key == "c") {
            cfg.params.c = as_real(v, key);
        } else if (key == "p") {
            cfg.params.p = static_cast<int>(as_integer(v, key));
        } else if (key == "H") {
            cfg.params.H = as_real(v, key);
        } else if (key == "c_cosh") {
            cfg.params.c_cosh = as_real(v, key);
        } else if (key == "trace") {
            if (!v.is_string()) throw ConfigError("trace must be a string");
            cfg.trace = parse_trace_level(v.get<std::string>());
        } else if (key == "threads") {
            cfg.threads = static_cast<int>(as_integer(v, key));
        } else if (key == "out") {
            if (!v.is_string()) throw ConfigError("out must be a string");
            cfg.out_dir = v.get<std::string>();
        } else {
            throw ConfigError("unknown config key: " + key);
        }
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::filesystem::path& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + path.string() + " is not valid JSON");
    }
    return apply_config_json(j, std::move(base));
}

json config_to_json(const ExperimentConfig& config) {
    json j;
    j["strategy"] = std::string(to_string(config.strategy));
    j["n"] = config.n_values;
    if (config.T_values.empty()) {
        j["T"] = "n";
    } else {
        j["T"] = config.T_values;
    }
    j["trials"] = config.trials;
    j["seed"] = config.params.seed;
    j["c"] = config.params.c;
    j["p"] = config.params.p;
    j["H"] = config.params.H;
    j["c_cosh"] = config.params.c_cosh;
    j["beta"] = config.params.beta();
    j["gamma"] = config.params.gamma();
    j["trace"] = std::string(to_string(config.trace));
    return j;
}

namespace {

json to_json(const Quantiles& q) {
    return {{"min", q.min}, {"q25", q.q25}, {"median", q.median}, {"q75", q.q75}, {"q95", q.q95}, {"max", q.max}};
}

json to_json(const MeanStderr& m) { return {{"mean", m.mean}, {"stderr", m.stderr_}}; }

}  // namespace

json summary_to_json(const ExperimentConfig& config, const ExperimentSummary& summary) {
    json cells = json::array();
    for (const auto& c : summary.cells) {
        json cell;
        cell["n"] = c.n;
        cell["T"] = c.T;
        cell["trials"] = c.trials;
        cell["final_V"] = to_json(c.final_V);
        cell["running_max_V"] = to_json(c.running_max_V);
        cell["V_over_sqrt_n"] = to_json(c.V_over_sqrt_n);
        cell["V_over_sqrt_nlogn"] = c.V_over_sqrt_nlogn ? to_json(*c.V_over_sqrt_nlogn) : json(nullptr);
        cell["breach_total"] = c.breach_total;
        cell["tie_total"] = c.tie_total;
        cell["phase_total"] = c.phase_total;
        cell["phi_max"] = c.phi_max;
        cell["red_time_fraction_mean"] = c.red_time_fraction_mean;
        cells.push_back(std::move(cell));
    }
    return {{"config", config_to_json(config)}, {"cells", std::move(cells)}};
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string trials_csv(const json& config, std::span<const TrialResult> trials) {
    std::ostringstream out;
    out << csv_preamble(config) << kTrialsHeader << '\n';
    for (std::size_t i = 0; i < trials.size(); ++i) {
        const auto& t = trials[i];
        out << i << ',' << t.final_V << ',' << t.running_max_V << ',' << format_number(t.phi_max) << ','
            << t.breach_count << ',' << t.tie_count << ',' << t.phase_count << ','
            << format_number(t.red_time_fraction) << '\n';
    }
    return out.str();
}

std::string trace_csv(const json& config, std::span<const TraceRow> rows) {
    std::ostringstream out;
    out << csv_preamble(config) << kTraceHeader << '\n';
    for (const auto& r : rows) {
        out << r.t << ',' << r.x << ',' << r.V << ',' << format_number(r.phi) << ',' << format_number(r.L) << ','
            << format_number(r.Q) << ',' << (r.t == 0 ? std::string_view("init") : to_string(r.rule_used)) << '\n';
    }
    return out.str();
}

std::string sweep_csv(const json& config, std::span<const SweepRow> rows) {
    std::ostringstream out;
    out << csv_preamble(config) << kSweepHeader << '\n';
    for (const auto& r : rows) {
        out << r.n << ',' << r.T << ',' << to_string(r.strategy) << ',' << format_number(r.median_V) << ','
            << format_number(r.median_V_over_sqrt_n) << ',' << format_number(r.median_V_over_sqrt_nlogn) << ','
            << format_number(r.q95_V) << ',' << r.trials << '\n';
    }
    return out.str();
}

std::string tail_csv(const json& config, std::span<const std::uint64_t> histogram) {
    std::uint64_t total = 0;
    for (auto c : histogram) total += c;
    std::ostringstream out;
    out << csv_preamble(config) << kTailHeader << '\n';
    for (std::size_t y = 0; y < histogram.size(); ++y) {
        const double freq = total > 0 ? static_cast<double>(histogram[y]) / static_cast<double>(total) : 0.0;
        out << y << ',' << histogram[y] << ',' << format_number(freq) << '\n';
    }
    return out.str();
}

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw OutputError("cannot create output directory " + dir.string());
    }
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw OutputError("cannot write " + path.string());
}

json to_json(const DriftProbeReport& r) {
    return {{"samples", r.samples},
            {"phi", r.phi},
            {"Q", r.Q},
            {"q_max_bound", r.q_max_bound},
            {"mean_delta_phi", r.mean_delta_phi},
            {"stderr_delta_phi", r.stderr_delta_phi},
            {"max_delta_phi", r.max_delta_phi},
            {"frac_L_ge_10Q", r.frac_L_ge_10Q},
            {"frac_L_ge_10Qmax", r.frac_L_ge_10Qmax},
            {"ties", r.ties}};
}

json to_json(const CoshProbeReport& r) {
    return {{"samples", r.samples},
            {"lambda", r.lambda},
            {"phi", r.phi},
            {"Q", r.Q},
            {"mean_delta_phi", r.mean_delta_phi},
            {"frac_L_ge_half_c_Q", r.frac_L_ge_half_c_Q}};
}

json to_json(const TailReport& r) {
    return {{"n", r.n},
            {"T", r.T},
            {"trials", r.trials},
            {"max_position", r.max_position},
            {"bound", r.bound},
            {"slope", r.fit.slope},
            {"intercept", r.fit.intercept},
            {"r2", r.fit.r2},
            {"fit_points", r.fit.points},
            {"mean_drift", r.mean_drift},
            {"K", r.K}};
}

}  // namespace vbal
