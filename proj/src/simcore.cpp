#include "lorasim/simcore.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

#include "json.hpp"

namespace lorasim {

// ---------------------------------------------------------------------------
// Gateway

GatewaySchedule::GatewaySchedule(std::vector<std::pair<int, int>> demodulators,
                                 std::vector<AvailabilityWindow> availability)
    : demodulators_(std::move(demodulators)), availability_(std::move(availability)) {
    std::sort(demodulators_.begin(), demodulators_.end());
}

bool GatewaySchedule::demodulates(int channel, int sf) const {
    return std::binary_search(demodulators_.begin(), demodulators_.end(), std::pair{channel, sf});
}

bool GatewaySchedule::available_throughout(int channel, TimeMs from, TimeMs to) const {
    TimeMs covered = from;
    for (const auto& w : availability_) {
        if (w.to_ms <= covered || w.from_ms > covered) continue;
        if (std::find(w.channels.begin(), w.channels.end(), channel) == w.channels.end()) {
            return false;
        }
        covered = w.to_ms;
        if (covered >= to) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Medium

Medium::Medium(InterferenceKernel kernel, CollisionConfig collision, double bandwidth_khz,
               MacConfig mac)
    : kernel_(std::move(kernel)), collision_(collision), bandwidth_khz_(bandwidth_khz), mac_(mac) {}

bool Medium::visible_to(const FrameEvent& f, TimeMs now, FrameKind sensing) const {
    if (f.start_ms >= now || f.end_ms() <= now) return false;
    if (sensing == FrameKind::LoRa && f.kind == FrameKind::LoRa && mac_.cca == CcaMode::Preamble) {
        const double visible = preamble_ms(bandwidth_khz_, *f.sf, mac_.preamble_symbols);
        return static_cast<double>(now - f.start_ms) < visible;
    }
    return true;
}

bool Medium::busy(int channel, TimeMs now, FrameKind sensing) const {
    std::erase_if(active_, [&](std::size_t id) { return frames_[id].frame.end_ms() <= now; });
    for (std::size_t id : active_) {
        const auto& f = frames_[id].frame;
        if (f.channel == channel && visible_to(f, now, sensing)) return true;
    }
    return false;
}

void Medium::interact(Entry& earlier, Entry& later, Rng& rng) {
    const auto& a = earlier.frame;
    const auto& b = later.frame;
    if (a.channel == b.channel) {
        if (a.kind == FrameKind::WiSun || b.kind == FrameKind::WiSun) {
            earlier.corrupted = later.corrupted = true;
        } else if (*a.sf == *b.sf) {
            const double lock = preamble_ms(bandwidth_khz_, *a.sf, mac_.preamble_symbols);
            if (collision_.capture && static_cast<double>(b.start_ms - a.start_ms) >= lock) {
                // Receiver already locked on the earlier frame.
                later.corrupted = true;
            } else {
                earlier.corrupted = later.corrupted = true;
            }
        } else if (collision_.inter_sf) {
            earlier.corrupted = later.corrupted = true;
        }
        return;
    }
    const double g = kernel_.coupling(a.channel, b.channel);
    if (g > 0.0 && uniform01(rng) < g) earlier.corrupted = later.corrupted = true;
}

std::size_t Medium::transmit(const FrameEvent& frame, Rng& rng) {
    const TimeMs now = frame.start_ms;
    std::erase_if(active_, [&](std::size_t id) { return frames_[id].frame.end_ms() <= now; });
    const std::size_t id = frames_.size();
    frames_.push_back(Entry{frame, false});
    for (std::size_t other : active_) interact(frames_[other], frames_[id], rng);
    active_.push_back(id);
    return id;
}

bool gw_decode(const Medium& medium, std::size_t frame_id, const GatewaySchedule& gw) {
    const auto& f = medium.frame(frame_id);
    if (f.kind != FrameKind::LoRa || !f.sf) return false;
    return gw.available_throughout(f.channel, f.start_ms, f.end_ms()) &&
           gw.demodulates(f.channel, *f.sf) && !medium.corrupted(frame_id);
}

TimeMs wisun_frame_ms(std::uint32_t payload_bytes, double bitrate_kbps) {
    // bits / (kbit/s) = ms
    return static_cast<TimeMs>(std::ceil(payload_bytes * 8.0 / bitrate_kbps - 1e-9));
}

// ---------------------------------------------------------------------------
// Simulation

namespace {

// Simultaneous events run in this order, then by source id.
enum class EventKind : std::uint8_t { WiSunTick = 0, DeviceAck = 1, DeviceTrial = 2, DeviceEpoch = 3 };

struct Event {
    TimeMs time;
    EventKind kind;
    std::uint32_t source;  // zero-based index
    std::uint64_t seq;

    bool operator>(const Event& o) const {
        return std::tie(time, kind, source, seq) > std::tie(o.time, o.kind, o.source, o.seq);
    }
};

struct Device {
    std::uint32_t id;
    const DeviceGroup* group;
    JointSelector selector;
    Rng rng;
    TimeMs phase_ms;
    std::uint64_t epoch = 0;       // grid index of the current epoch
    std::uint32_t completed = 0;   // finished attempts
    // Current attempt.
    TimeMs epoch_ms = 0;
    ArmPair pair{};
    std::uint32_t trials_used = 0;
    std::size_t frame = 0;
};

struct WiSunDevice {
    TimeMs phase_ms;
    std::uint64_t tick = 0;
};

// Stream ids under the trial seed.
constexpr std::uint64_t kDeviceStreams = 1;
constexpr std::uint64_t kWiSunStream = 2;
constexpr std::uint64_t kMediumStream = 3;

class Simulation {
public:
    Simulation(const ScenarioConfig& cfg, std::uint64_t seed, RunOptions options)
        : cfg_(cfg),
          options_(options),
          gw_(cfg.demodulators(), cfg.availability()),
          medium_(InterferenceKernel(cfg.interference.radius, cfg.interference.g1,
                                     cfg.interference.g2),
                  cfg.collision, cfg.bandwidth_khz, cfg.mac),
          medium_rng_(derive_seed(seed, kMediumStream)),
          wisun_rng_(derive_seed(seed, kWiSunStream)) {
        const std::uint64_t device_root = derive_seed(seed, kDeviceStreams);
        const PolicyParams params = cfg.policy.params();
        std::uint32_t id = 0;
        for (const auto& g : cfg.devices) {
            for (std::uint32_t i = 0; i < g.count; ++i, ++id) {
                Rng rng(derive_seed(device_root, id));
                const TimeMs phase = g.phase_ms ? *g.phase_ms : uniform_int(rng, 0, g.ti_ms - 1);
                devices_.push_back(Device{id, &g,
                                          JointSelector(cfg.policy.kind, g.channels.size(),
                                                        g.sfs.size(), params),
                                          std::move(rng), phase});
            }
        }
        if (cfg.wisun) {
            for (std::uint32_t i = 0; i < cfg.wisun->count; ++i) {
                wisun_.push_back(WiSunDevice{uniform_int(wisun_rng_, 0, cfg.wisun->ti_ms - 1)});
            }
            wisun_frame_ = wisun_frame_ms(cfg.wisun->payload, cfg.wisun->bitrate_kbps);
        }
        record_.fairness_channels = cfg.gateway.channels;
        record_.decision_logs.resize(devices_.size());
    }

    MetricsRecord run() {
        for (auto& d : devices_) {
            if (has_epoch(d, d.phase_ms)) {
                ++active_;
                push(d.phase_ms, EventKind::DeviceEpoch, d.id);
            }
        }
        for (std::uint32_t i = 0; i < wisun_.size(); ++i) {
            if (active_ > 0) push(wisun_[i].phase_ms, EventKind::WiSunTick, i);
        }
        while (!queue_.empty()) {
            const Event ev = queue_.top();
            queue_.pop();
            switch (ev.kind) {
                case EventKind::WiSunTick: wisun_tick(ev.source, ev.time); break;
                case EventKind::DeviceEpoch: start_epoch(devices_[ev.source], ev.time); break;
                case EventKind::DeviceTrial: trial(devices_[ev.source], ev.time); break;
                case EventKind::DeviceAck: ack(devices_[ev.source], ev.time); break;
            }
        }
        record_.switch_latencies = switch_latency(record_.decision_logs, gw_.availability());
        if (options_.frames != nullptr) {
            options_.frames->clear();
            options_.frames->reserve(medium_.size());
            for (std::size_t i = 0; i < medium_.size(); ++i) {
                options_.frames->push_back(FrameLogEntry{medium_.frame(i), gw_decode(medium_, i, gw_)});
            }
        }
        return std::move(record_);
    }

private:
    void push(TimeMs t, EventKind kind, std::uint32_t source) {
        queue_.push(Event{t, kind, source, seq_++});
    }

    bool has_epoch(const Device& d, TimeMs t) const {
        if (cfg_.horizon.attempts) return d.completed < *cfg_.horizon.attempts;
        return t < *cfg_.horizon.wall_ms;
    }

    void start_epoch(Device& d, TimeMs now) {
        d.epoch_ms = now;
        d.pair = d.selector.decide(d.rng);
        d.trials_used = 0;
        trial(d, now);
    }

    void trial(Device& d, TimeMs now) {
        const auto& g = *d.group;
        const int channel = g.channels[d.pair.channel];
        const int sf = g.sfs[d.pair.sf];
        if (medium_.busy(channel, now, FrameKind::LoRa)) {
            ++d.trials_used;
            if (d.trials_used <= g.tr) {
                push(now + uniform_int(d.rng, 0, cfg_.mac.backoff_max_ms), EventKind::DeviceTrial, d.id);
            } else {
                finish(d, now, false);
            }
            return;
        }
        const TimeMs toa = time_on_air_ms(cfg_.bandwidth_khz, sf, g.payload);
        d.frame = medium_.transmit(FrameEvent{d.id + 1, FrameKind::LoRa, channel, sf, now, toa},
                                   medium_rng_);
        push(now + toa + cfg_.mac.ack_wait_ms, EventKind::DeviceAck, d.id);
    }

    void ack(Device& d, TimeMs now) {
        if (gw_decode(medium_, d.frame, gw_)) {
            finish(d, now, true);
            return;
        }
        ++d.trials_used;
        if (d.trials_used <= d.group->tr) {
            push(now + uniform_int(d.rng, 0, cfg_.mac.retx_backoff_max_ms), EventKind::DeviceTrial, d.id);
        } else {
            finish(d, now, false);
        }
    }

    void finish(Device& d, TimeMs now, bool success) {
        const auto& g = *d.group;
        const int channel = g.channels[d.pair.channel];
        const int sf = g.sfs[d.pair.sf];
        d.selector.feedback(d.pair, success);
        ++d.completed;
        ++record_.attempts;
        if (success) {
            ++record_.successes;
            ++record_.received_per_channel[channel];
            ++record_.received_per_pair[{channel, sf}];
        }
        record_.fsr_series.push_back(FsrPoint{now, *fsr(record_.successes, record_.attempts)});
        record_.decision_logs[d.id].push_back(DecisionRecord{d.epoch_ms, channel, sf, success});

        // Next grid epoch strictly after the attempt ended; a late finish skips slots.
        TimeMs next = d.phase_ms + static_cast<TimeMs>(++d.epoch) * g.ti_ms;
        while (next < now) next = d.phase_ms + static_cast<TimeMs>(++d.epoch) * g.ti_ms;
        if (cfg_.mac.epoch_jitter_ms > 0) next += uniform_int(d.rng, 0, cfg_.mac.epoch_jitter_ms);
        if (has_epoch(d, next)) {
            push(next, EventKind::DeviceEpoch, d.id);
        } else {
            --active_;
        }
    }

    std::optional<int> wisun_channel(TimeMs now) const {
        for (const auto& w : cfg_.wisun->schedule) {
            if (w.from_ms <= now && now < w.to_ms) return w.channel;
        }
        return std::nullopt;
    }

    void wisun_tick(std::uint32_t index, TimeMs now) {
        if (active_ == 0) return;
        if (cfg_.horizon.wall_ms && now >= *cfg_.horizon.wall_ms) return;
        auto& w = wisun_[index];
        if (auto ch = wisun_channel(now); ch && !medium_.busy(*ch, now, FrameKind::WiSun)) {
            medium_.transmit(FrameEvent{index + 1, FrameKind::WiSun, *ch, std::nullopt, now, wisun_frame_},
                             medium_rng_);
        }
        push(w.phase_ms + static_cast<TimeMs>(++w.tick) * cfg_.wisun->ti_ms, EventKind::WiSunTick, index);
    }

    const ScenarioConfig& cfg_;
    RunOptions options_;
    GatewaySchedule gw_;
    Medium medium_;
    Rng medium_rng_;
    Rng wisun_rng_;
    std::vector<Device> devices_;
    std::vector<WiSunDevice> wisun_;
    TimeMs wisun_frame_ = 0;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
    std::uint64_t seq_ = 0;
    std::uint32_t active_ = 0;
    MetricsRecord record_;
};

}  // namespace

MetricsRecord run_simulation(const ScenarioConfig& cfg, std::uint64_t seed, RunOptions options) {
    if (auto problems = validate(cfg); !problems.empty()) throw ConfigError(std::move(problems));
    return Simulation(cfg, seed, options).run();
}

void write_event_log(std::ostream& out, const std::vector<FrameLogEntry>& frames) {
    for (const auto& e : frames) {
        nlohmann::ordered_json j;
        j["start_ms"] = e.frame.start_ms;
        j["end_ms"] = e.frame.end_ms();
        j["source"] = e.frame.source;
        j["kind"] = e.frame.kind == FrameKind::LoRa ? "lora" : "wisun";
        j["channel"] = e.frame.channel;
        j["sf"] = e.frame.sf ? nlohmann::ordered_json(*e.frame.sf) : nlohmann::ordered_json(nullptr);
        j["decoded"] = e.decoded;
        out << j.dump() << '\n';
    }
}

}  // namespace lorasim
