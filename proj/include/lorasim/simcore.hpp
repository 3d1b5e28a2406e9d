#pragma once

// Discrete-event uplink simulation: LoRa devices choosing (channel, SF) per
// decision epoch, a multichannel gateway, and optional Wi-SUN interferers.

#include <cstdint>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "lorasim/airtime.hpp"
#include "lorasim/metrics.hpp"
#include "lorasim/rng.hpp"
#include "lorasim/scenario.hpp"
#include "lorasim/types.hpp"

namespace lorasim {

enum class FrameKind : std::uint8_t { LoRa, WiSun };

struct FrameEvent {
    std::uint32_t source = 0;  // 1-based device or interferer id
    FrameKind kind = FrameKind::LoRa;
    int channel = 0;
    std::optional<int> sf;  // none for Wi-SUN
    TimeMs start_ms = 0;
    TimeMs duration_ms = 0;

    TimeMs end_ms() const { return start_ms + duration_ms; }
    bool overlaps(const FrameEvent& other) const {
        return start_ms < other.end_ms() && other.start_ms < end_ms();
    }
};

class GatewaySchedule {
public:
    GatewaySchedule(std::vector<std::pair<int, int>> demodulators,
                    std::vector<AvailabilityWindow> availability);

    bool demodulates(int channel, int sf) const;
    // True when `channel` is in the available set at every instant of [from, to).
    bool available_throughout(int channel, TimeMs from, TimeMs to) const;
    const std::vector<AvailabilityWindow>& availability() const { return availability_; }

private:
    std::vector<std::pair<int, int>> demodulators_;
    std::vector<AvailabilityWindow> availability_;
};

// Shared radio medium. Frames are added in start-time order; every pairwise
// interaction is settled when the later frame of the pair starts.
class Medium {
public:
    Medium(InterferenceKernel kernel, CollisionConfig collision, double bandwidth_khz,
           MacConfig mac = {});

    std::size_t transmit(const FrameEvent& frame, Rng& rng);

    // Carrier sense at `now` on `channel` as seen by a device of kind `sensing`.
    // A frame starting exactly at `now` is not yet visible.
    bool busy(int channel, TimeMs now, FrameKind sensing) const;

    const FrameEvent& frame(std::size_t id) const { return frames_[id].frame; }
    bool corrupted(std::size_t id) const { return frames_[id].corrupted; }
    std::size_t size() const { return frames_.size(); }

private:
    struct Entry {
        FrameEvent frame;
        bool corrupted = false;
    };

    bool visible_to(const FrameEvent& f, TimeMs now, FrameKind sensing) const;
    void interact(Entry& earlier, Entry& later, Rng& rng);

    InterferenceKernel kernel_;
    CollisionConfig collision_;
    double bandwidth_khz_;
    MacConfig mac_;
    std::vector<Entry> frames_;
    mutable std::vector<std::size_t> active_;
};

// Gateway verdict on a LoRa frame already settled in `medium`.
bool gw_decode(const Medium& medium, std::size_t frame_id, const GatewaySchedule& gw);

struct FrameLogEntry {
    FrameEvent frame;
    bool decoded = false;
};

// Wi-SUN frame duration: payload * 8 / bitrate, in whole milliseconds.
TimeMs wisun_frame_ms(std::uint32_t payload_bytes, double bitrate_kbps);

struct RunOptions {
    std::vector<FrameLogEntry>* frames = nullptr;  // receives every frame when set
};

// Runs one trial. Output depends only on (cfg, seed).
MetricsRecord run_simulation(const ScenarioConfig& cfg, std::uint64_t seed, RunOptions options = {});

// One JSON object per line: start, end, source, kind, channel, sf, decoded.
void write_event_log(std::ostream& out, const std::vector<FrameLogEntry>& frames);

}  // namespace lorasim
