#pragma once

// Scenario configuration: a validated value type, its JSON text form, and the
// built-in experiment presets.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lorasim/bandit.hpp"
#include "lorasim/types.hpp"

namespace lorasim {

// Invalid or unparsable configuration. `problems` lists every violation as
// "field.path: message".
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

struct DeviceGroup {
    std::uint32_t count = 1;
    std::vector<int> channels;
    std::vector<int> sfs{7};  // one entry = fixed SF
    TimeMs ti_ms = 10'000;
    std::uint32_t tr = 3;
    std::uint32_t payload = 50;
    std::optional<TimeMs> phase_ms;  // fixed epoch offset; drawn uniformly when unset
    bool operator==(const DeviceGroup&) const = default;
};

struct PolicyConfig {
    Policy kind = Policy::Tow;
    double alpha = 0.9;
    double beta = 0.9;
    double amp = 0.5;
    double epsilon = 0.1;
    double omega_max = 1e6;
    bool operator==(const PolicyConfig&) const = default;

    PolicyParams params() const;
};

struct GatewayConfig {
    std::vector<int> channels;
    // Explicit (channel, sf) demodulators; empty = channels x every device SF.
    std::vector<std::pair<int, int>> demodulators;
    // Empty = every channel available for the whole run.
    std::vector<AvailabilityWindow> availability;
    bool operator==(const GatewayConfig&) const = default;
};

struct WiSunWindow {
    TimeMs from_ms = 0;
    TimeMs to_ms = 0;
    std::optional<int> channel;  // nullopt = idle
    bool operator==(const WiSunWindow&) const = default;
};

struct WiSunConfig {
    std::uint32_t count = 20;
    double bitrate_kbps = 50.0;
    std::uint32_t payload = 200;
    TimeMs ti_ms = 1'000;
    std::vector<WiSunWindow> schedule;
    bool operator==(const WiSunConfig&) const = default;
};

struct InterferenceConfig {
    unsigned radius = 2;
    double g1 = 0.8;
    double g2 = 0.33;
    bool operator==(const InterferenceConfig&) const = default;
};

struct CollisionConfig {
    bool capture = false;
    bool inter_sf = false;
    bool operator==(const CollisionConfig&) const = default;
};

// How a LoRa device's carrier sense sees other LoRa frames. Wi-SUN energy is
// always visible for the whole frame.
enum class CcaMode {
    Energy,    // the whole frame is visible
    Preamble,  // only the preamble is visible, as with LoRa channel activity detection
};

struct MacConfig {
    TimeMs ack_wait_ms = 100;
    TimeMs backoff_max_ms = 500;       // CCA busy: uniform wait in [0, max]
    TimeMs retx_backoff_max_ms = 0;    // no ACK: uniform wait in [0, max] before resending
    TimeMs epoch_jitter_ms = 0;        // per-epoch uniform delay in [0, max] after the grid slot
    CcaMode cca = CcaMode::Energy;
    double preamble_symbols = 12.25;
    bool operator==(const MacConfig&) const = default;
};

struct Horizon {
    std::optional<TimeMs> wall_ms;
    std::optional<std::uint32_t> attempts;  // per device
    bool operator==(const Horizon&) const = default;
};

struct ScenarioConfig {
    std::string name = "custom";
    double bandwidth_khz = 125.0;
    std::vector<DeviceGroup> devices;
    PolicyConfig policy;
    GatewayConfig gateway;
    std::optional<WiSunConfig> wisun;
    InterferenceConfig interference;
    CollisionConfig collision;
    MacConfig mac;
    Horizon horizon;
    std::uint32_t trials = 10;
    bool operator==(const ScenarioConfig&) const = default;

    std::uint32_t device_count() const;
    // Every SF any device may use, sorted.
    std::vector<int> device_sfs() const;
    // Resolved demodulator list (explicit or channels x device SFs).
    std::vector<std::pair<int, int>> demodulators() const;
    // Resolved availability (explicit or one full-horizon window).
    std::vector<AvailabilityWindow> availability() const;
    // Latest instant any device may still start an epoch; for attempt
    // horizons this is derived from TI and the attempt count.
    TimeMs horizon_ms() const;
};

// Every violated invariant, empty when valid.
std::vector<std::string> validate(const ScenarioConfig& cfg);

// Parses JSON text; throws ConfigError with line/column on syntax errors and
// with every violation on invalid content. Missing keys take their defaults.
ScenarioConfig load_config_text(std::string_view text);
ScenarioConfig load_config_file(const std::string& path);

// Canonical JSON text (two-space indent, keys in schema order).
std::string dump_config(const ScenarioConfig& cfg);

// Re-split the device population across the existing groups.
void set_device_count(ScenarioConfig& cfg, std::uint32_t count);

// CH-SF experiment setting 1..5: fixed SF7, SF8, SF9,
// equal SF7/8/9 groups, or joint CH-SF selection over {7, 8, 9}.
void apply_chsf_setting(ScenarioConfig& cfg, int setting);

std::vector<std::string> builtin_names();
// Throws ConfigError listing the known presets on an unknown name.
ScenarioConfig builtin(std::string_view name);

}  // namespace lorasim
