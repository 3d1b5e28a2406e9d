#include "lorasim/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace lorasim {

std::optional<double> fsr(std::uint64_t successes, std::uint64_t attempts) {
    if (attempts == 0) return std::nullopt;
    return static_cast<double>(successes) / static_cast<double>(attempts);
}

std::optional<double> fairness(std::span<const double> counts) {
    if (counts.empty()) return std::nullopt;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double c : counts) {
        sum += c;
        sum_sq += c * c;
    }
    if (sum_sq == 0.0) return std::nullopt;
    return sum * sum / (static_cast<double>(counts.size()) * sum_sq);
}

std::optional<double> fairness(std::span<const std::uint64_t> counts) {
    std::vector<double> as_real(counts.begin(), counts.end());
    return fairness(std::span<const double>(as_real));
}

std::optional<double> MetricsRecord::fsr() const { return lorasim::fsr(successes, attempts); }

std::vector<std::uint64_t> MetricsRecord::channel_counts() const {
    std::vector<std::uint64_t> counts;
    counts.reserve(fairness_channels.size());
    for (int ch : fairness_channels) {
        auto it = received_per_channel.find(ch);
        counts.push_back(it == received_per_channel.end() ? 0 : it->second);
    }
    return counts;
}

std::optional<double> MetricsRecord::fairness() const {
    const auto counts = channel_counts();
    return lorasim::fairness(std::span<const std::uint64_t>(counts));
}

std::optional<double> MetricsRecord::mean_switch_latency() const {
    if (switch_latencies.empty()) return std::nullopt;
    double total = 0.0;
    for (const auto& s : switch_latencies) total += s.decisions;
    return total / static_cast<double>(switch_latencies.size());
}

namespace {

bool contains(const std::vector<int>& set, int ch) {
    return std::find(set.begin(), set.end(), ch) != set.end();
}

}  // namespace

std::vector<SwitchLatency> switch_latency(const std::vector<std::vector<DecisionRecord>>& logs,
                                          const std::vector<AvailabilityWindow>& schedule,
                                          unsigned window) {
    std::vector<SwitchLatency> out;
    if (window == 0) window = 1;
    for (std::size_t w = 1; w < schedule.size(); ++w) {
        const auto& next = schedule[w];
        if (next.channels == schedule[w - 1].channels) continue;
        for (std::size_t dev = 0; dev < logs.size(); ++dev) {
            const auto& log = logs[dev];
            // Decisions inside the new window, in time order.
            auto first = std::lower_bound(
                log.begin(), log.end(), next.from_ms,
                [](const DecisionRecord& d, TimeMs t) { return d.time_ms < t; });
            auto last = std::lower_bound(
                first, log.end(), next.to_ms,
                [](const DecisionRecord& d, TimeMs t) { return d.time_ms < t; });
            const auto count = static_cast<std::size_t>(last - first);
            if (count == 0) continue;

            SwitchLatency lat{static_cast<std::uint32_t>(dev + 1), next.from_ms,
                              static_cast<std::uint32_t>(count), true};
            std::size_t run = 0;
            for (std::size_t i = 0; i < count; ++i) {
                if (contains(next.channels, first[i].channel)) {
                    ++run;
                    const std::size_t start = i + 1 - run;
                    // A compliant run reaching the end of the window also counts.
                    if (run >= window || i + 1 == count) {
                        lat.decisions = static_cast<std::uint32_t>(start);
                        lat.censored = false;
                        break;
                    }
                } else {
                    run = 0;
                }
            }
            out.push_back(lat);
        }
    }
    return out;
}

Stat describe(std::span<const double> values) {
    Stat s;
    s.n = values.size();
    if (values.empty()) return s;
    // Welford: identical inputs give exactly zero spread.
    double ss = 0.0;
    std::size_t k = 0;
    for (double v : values) {
        const double d = v - s.mean;
        s.mean += d / static_cast<double>(++k);
        ss += d * (v - s.mean);
    }
    if (s.n > 1) {
        s.stddev = std::sqrt(ss / static_cast<double>(s.n - 1));
        s.ci95 = 1.959963984540054 * s.stddev / std::sqrt(static_cast<double>(s.n));
    }
    return s;
}

TrialAggregate aggregate_trials(std::span<const MetricsRecord> records) {
    std::vector<double> f;
    std::vector<double> fi;
    std::vector<double> sw;
    for (const auto& r : records) {
        if (auto v = r.fsr()) f.push_back(*v);
        if (auto v = r.fairness()) fi.push_back(*v);
        if (auto v = r.mean_switch_latency()) sw.push_back(*v);
    }
    TrialAggregate agg;
    if (!f.empty()) agg.fsr = describe(f);
    if (!fi.empty()) agg.fairness = describe(fi);
    if (!sw.empty()) agg.mean_switch_latency = describe(sw);
    return agg;
}

}  // namespace lorasim
