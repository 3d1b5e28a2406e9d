#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lorasim/types.hpp"

namespace lorasim {

struct FsrPoint {
    TimeMs time_ms = 0;
    double fsr = 0.0;
    bool operator==(const FsrPoint&) const = default;
};

struct SwitchLatency {
    std::uint32_t device = 0;  // 1-based
    TimeMs change_ms = 0;
    std::uint32_t decisions = 0;
    bool censored = false;
    bool operator==(const SwitchLatency&) const = default;
};

struct MetricsRecord {
    std::uint64_t attempts = 0;
    std::uint64_t successes = 0;
    std::vector<FsrPoint> fsr_series;
    std::map<int, std::uint64_t> received_per_channel;
    std::map<std::pair<int, int>, std::uint64_t> received_per_pair;  // (channel, sf)
    std::vector<SwitchLatency> switch_latencies;
    std::vector<int> fairness_channels;  // the gateway's channel set
    std::vector<std::vector<DecisionRecord>> decision_logs;  // per device

    std::optional<double> fsr() const;
    std::optional<double> fairness() const;
    std::optional<double> mean_switch_latency() const;
    // Received count for every fairness channel, zeros included.
    std::vector<std::uint64_t> channel_counts() const;

    bool operator==(const MetricsRecord&) const = default;
};

// Cumulative frame success rate; nullopt when nothing was attempted.
std::optional<double> fsr(std::uint64_t successes, std::uint64_t attempts);

// Jain index (sum x)^2 / (n * sum x^2); nullopt when every count is zero.
std::optional<double> fairness(std::span<const double> counts);
std::optional<double> fairness(std::span<const std::uint64_t> counts);

// Decisions needed after each availability change until a device's channel
// stays inside the new set for `window` consecutive decisions. A device that
// never settles before the next change (or the end of its log) is reported
// censored with the number of decisions it had left.
std::vector<SwitchLatency> switch_latency(const std::vector<std::vector<DecisionRecord>>& logs,
                                          const std::vector<AvailabilityWindow>& schedule,
                                          unsigned window = 5);

struct Stat {
    double mean = 0.0;
    double stddev = 0.0;   // sample (n - 1)
    double ci95 = 0.0;     // normal-approximation half width
    std::size_t n = 0;
    bool operator==(const Stat&) const = default;
};

Stat describe(std::span<const double> values);

struct TrialAggregate {
    std::optional<Stat> fsr;
    std::optional<Stat> fairness;
    std::optional<Stat> mean_switch_latency;
    bool operator==(const TrialAggregate&) const = default;
};

TrialAggregate aggregate_trials(std::span<const MetricsRecord> records);

}  // namespace lorasim
