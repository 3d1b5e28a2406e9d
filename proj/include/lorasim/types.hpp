#pragma once

#include <cstdint>
#include <vector>

namespace lorasim {

using TimeMs = std::int64_t;

inline constexpr TimeMs kMinute = 60'000;

// Channel set accepted by the gateway over [from_ms, to_ms).
struct AvailabilityWindow {
    TimeMs from_ms = 0;
    TimeMs to_ms = 0;
    std::vector<int> channels;
    bool operator==(const AvailabilityWindow&) const = default;
};

// One decision epoch of one device, as reported: actual channel number and SF.
struct DecisionRecord {
    TimeMs time_ms = 0;
    int channel = 0;
    int sf = 0;
    bool success = false;
    bool operator==(const DecisionRecord&) const = default;
};

}  // namespace lorasim
