#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vbal/harness.hpp"
#include "vbal/probes.hpp"

namespace vbal {

/// Invalid configuration (maps to exit status 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Output file could not be written (exit status 2).
class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Config files are flat JSON objects:
//   strategy  "random" | "power" | "cosh" | "majority" | "combined"
//   n         integer or list of integers
//   T         integer, list of integers, or "n"
//   trials, seed, c, p, H, c_cosh, threads
//   trace     "none" | "summary" | "full"
//   out       output directory
// Unknown keys are rejected.

/// Overlays the keys present in `j` onto `base`. Throws ConfigError.
ExperimentConfig apply_config_json(const nlohmann::json& j, ExperimentConfig base);
ExperimentConfig load_config_file(const std::filesystem::path& path, ExperimentConfig base);

std::string_view to_string(TraceLevel level);
TraceLevel parse_trace_level(std::string_view name);

/// Resolved experiment config as embedded in every output. Leaves out
/// `threads` and `out`, which never change results.
nlohmann::json config_to_json(const ExperimentConfig& config);

nlohmann::json summary_to_json(const ExperimentConfig& config, const ExperimentSummary& summary);

/// Locale-independent shortest round-trip text; "nan" / "inf" / "-inf".
std::string format_number(double x);

std::string trials_csv(const nlohmann::json& config, std::span<const TrialResult> trials);
std::string trace_csv(const nlohmann::json& config, std::span<const TraceRow> rows);
std::string sweep_csv(const nlohmann::json& config, std::span<const SweepRow> rows);
std::string tail_csv(const nlohmann::json& config, std::span<const std::uint64_t> histogram);

inline constexpr std::string_view kTrialsHeader =
    "trial_index,final_V,running_max_V,phi_max,breach_count,tie_count,phase_count,red_time_fraction";
inline constexpr std::string_view kTraceHeader = "t,x,V_t,phi,L,Q,rule_used";
inline constexpr std::string_view kSweepHeader =
    "n,T,strategy,median_V,median_V_over_sqrt_n,median_V_over_sqrt_nlogn,q95_V,trials";
inline constexpr std::string_view kTailHeader = "position,count,frequency";

/// Writes bytes verbatim (binary mode, LF preserved). Throws OutputError.
void write_file(const std::filesystem::path& path, std::string_view contents);
/// Creates the directory if needed. Throws OutputError.
void ensure_directory(const std::filesystem::path& dir);

nlohmann::json to_json(const DriftProbeReport& rep);
nlohmann::json to_json(const CoshProbeReport& rep);
nlohmann::json to_json(const TailReport& rep);

}  // namespace vbal
