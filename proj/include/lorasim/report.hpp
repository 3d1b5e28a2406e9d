#pragma once

// Multi-trial execution and the CSV / JSON report formats.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lorasim/metrics.hpp"
#include "lorasim/scenario.hpp"

namespace lorasim {

inline constexpr std::string_view kCsvHeader =
    "axis_value,policy,seed,attempts,successes,fsr,fairness,mean_switch_latency";

// One trial, reduced to the reported fields.
struct TrialRow {
    std::string axis_value;
    Policy policy = Policy::Tow;
    std::uint64_t seed = 0;
    std::uint64_t attempts = 0;
    std::uint64_t successes = 0;
    std::optional<double> fsr;
    std::optional<double> fairness;
    std::optional<double> mean_switch_latency;
    std::vector<std::pair<int, std::uint64_t>> received_per_channel;
    bool operator==(const TrialRow&) const = default;
};

TrialRow summarize(std::string axis_value, Policy policy, std::uint64_t seed, const MetricsRecord& r);

// Trial i always gets derive_seed(master, i).
std::vector<std::uint64_t> trial_seeds(std::uint64_t master, std::uint32_t count);

// Worker count: LORA_TOW_SIM_THREADS when set, else hardware concurrency.
unsigned worker_threads();

// Runs one trial per seed on up to `threads` workers. Results are in seed
// order and identical for any thread count.
std::vector<MetricsRecord> run_trials(const ScenarioConfig& cfg, std::span<const std::uint64_t> seeds,
                                      unsigned threads);

// Fixed six-decimal rendering shared by both formats; empty for no data.
std::string format_value(std::optional<double> v);

std::string emit_csv(std::span<const TrialRow> rows);
std::string emit_json(std::span<const TrialRow> rows);

struct RunReport {
    std::string scenario;
    std::string config_hash;
    Policy policy = Policy::Tow;
    std::uint64_t master_seed = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<TrialRow> trials;
    TrialAggregate aggregate;
    ScenarioConfig config;
    std::string version;
};

// 64-bit FNV-1a of the canonical config text, as 16 hex digits.
std::string config_hash(const ScenarioConfig& cfg);

RunReport make_run_report(const ScenarioConfig& cfg, std::uint64_t master_seed, unsigned threads);
std::string report_json(const RunReport& report);
// Reads the embedded config, seed list and trial rows back.
RunReport parse_report_json(std::string_view text);

// Re-executes the report's embedded config and seeds and compares the result.
// Returns an empty string when every numeric field matches, else a description.
std::string replay_mismatch(const RunReport& report, unsigned threads);

struct SweepSpec {
    std::string axis;  // devices | setting | preset
    std::vector<std::string> values;
    std::vector<Policy> policies;
    std::uint32_t seeds = 10;
    std::uint64_t master_seed = 1;
};

// Applies one sweep-axis value to a scenario.
ScenarioConfig apply_axis(const ScenarioConfig& base, std::string_view axis, std::string_view value);

// Cross product of axis values and policies, every seed each; rows ordered by
// (value position, policy position, seed position).
std::vector<TrialRow> run_sweep(const ScenarioConfig& base, const SweepSpec& spec, unsigned threads);

}  // namespace lorasim
