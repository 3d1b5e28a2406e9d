#include "lorasim/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lorasim/airtime.hpp"

namespace lorasim {

using Json = nlohmann::ordered_json;

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("invalid configuration: " + join(problems, "; ")),
      problems_(std::move(problems)) {}

PolicyParams PolicyConfig::params() const {
    PolicyParams p;
    p.tow = TowParams{alpha, beta, amp, omega_max};
    p.epsilon = epsilon;
    return p;
}

std::uint32_t ScenarioConfig::device_count() const {
    std::uint32_t n = 0;
    for (const auto& g : devices) n += g.count;
    return n;
}

std::vector<int> ScenarioConfig::device_sfs() const {
    std::set<int> sfs;
    for (const auto& g : devices) sfs.insert(g.sfs.begin(), g.sfs.end());
    return {sfs.begin(), sfs.end()};
}

std::vector<std::pair<int, int>> ScenarioConfig::demodulators() const {
    if (!gateway.demodulators.empty()) return gateway.demodulators;
    std::vector<std::pair<int, int>> out;
    for (int ch : gateway.channels) {
        for (int sf : device_sfs()) out.emplace_back(ch, sf);
    }
    return out;
}

std::vector<AvailabilityWindow> ScenarioConfig::availability() const {
    if (!gateway.availability.empty()) return gateway.availability;
    return {AvailabilityWindow{0, horizon_ms(), gateway.channels}};
}

TimeMs ScenarioConfig::horizon_ms() const {
    if (horizon.wall_ms) return *horizon.wall_ms;
    TimeMs longest = 0;
    for (const auto& g : devices) longest = std::max(longest, g.ti_ms);
    // Phase plus `attempts` epochs, with one spare interval for skipped slots.
    return longest * (static_cast<TimeMs>(horizon.attempts.value_or(0)) + 2);
}

// ---------------------------------------------------------------------------
// Validation

namespace {

class Problems {
public:
    void add(std::string path, std::string msg) { list_.push_back(std::move(path) + ": " + msg); }
    void check(bool ok, std::string path, std::string msg) {
        if (!ok) add(std::move(path), std::move(msg));
    }
    std::vector<std::string> take() { return std::move(list_); }
    bool empty() const { return list_.empty(); }

private:
    std::vector<std::string> list_;
};

bool has_duplicates(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) != v.end();
}

void check_channels(Problems& p, const std::vector<int>& channels, const std::string& path,
                    bool allow_empty = false) {
    if (channels.empty() && !allow_empty) p.add(path, "must not be empty");
    for (int ch : channels) {
        if (ch < 1) p.add(path, "channel " + std::to_string(ch) + " must be >= 1");
    }
    if (has_duplicates(channels)) p.add(path, "duplicate channel");
}

void check_unit(Problems& p, double v, const std::string& path) {
    p.check(v >= 0.0 && v <= 1.0, path, "must lie in [0, 1]");
}

}  // namespace

std::vector<std::string> validate(const ScenarioConfig& cfg) {
    Problems p;
    p.check(is_tabulated_bandwidth(cfg.bandwidth_khz), "bandwidth_khz",
            "must be one of 62.5, 125, 250, 500");

    p.check(!cfg.devices.empty(), "devices", "at least one device group is required");
    p.check(cfg.device_count() > 0, "devices", "device count must be positive");
    for (std::size_t i = 0; i < cfg.devices.size(); ++i) {
        const auto& g = cfg.devices[i];
        const std::string path = "devices[" + std::to_string(i) + "]";
        check_channels(p, g.channels, path + ".channels");
        p.check(!g.sfs.empty(), path + ".sfs", "must not be empty");
        for (int sf : g.sfs) {
            p.check(sf >= kMinSf && sf <= kMaxSf, path + ".sfs",
                    "SF " + std::to_string(sf) + " outside 7..12");
        }
        p.check(!has_duplicates(g.sfs), path + ".sfs", "duplicate SF");
        p.check(g.ti_ms > 0, path + ".ti_ms", "must be positive");
        p.check(g.payload == kTabulatedPayload, path + ".payload",
                "only 50-byte payloads have tabulated airtime");
        if (g.phase_ms) {
            p.check(*g.phase_ms >= 0 && *g.phase_ms < g.ti_ms, path + ".phase_ms",
                    "must lie in [0, ti_ms)");
        }
    }

    const auto& pol = cfg.policy;
    check_unit(p, pol.alpha, "policy.alpha");
    check_unit(p, pol.beta, "policy.beta");
    check_unit(p, pol.epsilon, "policy.epsilon");
    p.check(pol.amp >= 0.0, "policy.amp", "must be >= 0");
    p.check(pol.omega_max > 0.0, "policy.omega_max", "must be > 0");

    const auto& h = cfg.horizon;
    p.check(h.wall_ms.has_value() != h.attempts.has_value(), "horizon",
            "exactly one of wall_ms or attempts must be set");
    if (h.wall_ms) p.check(*h.wall_ms > 0, "horizon.wall_ms", "must be positive");
    if (h.attempts) p.check(*h.attempts > 0, "horizon.attempts", "must be positive");

    const auto& gw = cfg.gateway;
    check_channels(p, gw.channels, "gateway.channels");
    for (std::size_t i = 0; i < gw.demodulators.size(); ++i) {
        const auto [ch, sf] = gw.demodulators[i];
        const std::string path = "gateway.demodulators[" + std::to_string(i) + "]";
        p.check(std::find(gw.channels.begin(), gw.channels.end(), ch) != gw.channels.end(), path,
                "channel " + std::to_string(ch) + " is not a gateway channel");
        p.check(sf >= kMinSf && sf <= kMaxSf, path, "SF outside 7..12");
    }
    if (!gw.availability.empty()) {
        TimeMs expect = 0;
        for (std::size_t i = 0; i < gw.availability.size(); ++i) {
            const auto& w = gw.availability[i];
            const std::string path = "gateway.availability[" + std::to_string(i) + "]";
            p.check(w.from_ms == expect, path + ".from_ms",
                    "windows must be contiguous from 0 (expected " + std::to_string(expect) + ")");
            p.check(w.to_ms > w.from_ms, path + ".to_ms", "must be after from_ms");
            check_channels(p, w.channels, path + ".channels", true);
            for (int ch : w.channels) {
                p.check(std::find(gw.channels.begin(), gw.channels.end(), ch) != gw.channels.end(),
                        path + ".channels", "channel " + std::to_string(ch) + " is not a gateway channel");
            }
            expect = w.to_ms;
        }
        if (p.empty() && (h.wall_ms.has_value() != h.attempts.has_value())) {
            p.check(expect >= cfg.horizon_ms(), "gateway.availability",
                    "windows must cover the run horizon (" + std::to_string(cfg.horizon_ms()) + " ms)");
        }
    }

    if (cfg.wisun) {
        const auto& w = *cfg.wisun;
        p.check(w.bitrate_kbps > 0.0, "wisun.bitrate_kbps", "must be positive");
        p.check(w.payload > 0, "wisun.payload", "must be positive");
        p.check(w.ti_ms > 0, "wisun.ti_ms", "must be positive");
        TimeMs expect = 0;
        for (std::size_t i = 0; i < w.schedule.size(); ++i) {
            const auto& s = w.schedule[i];
            const std::string path = "wisun.schedule[" + std::to_string(i) + "]";
            p.check(s.from_ms == expect, path + ".from_ms", "windows must be contiguous from 0");
            p.check(s.to_ms > s.from_ms, path + ".to_ms", "must be after from_ms");
            if (s.channel) p.check(*s.channel >= 1, path + ".channel", "must be >= 1");
            expect = s.to_ms;
        }
    }

    const auto& k = cfg.interference;
    p.check(k.radius <= 2, "interference.radius", "must be 0, 1 or 2");
    check_unit(p, k.g1, "interference.g1");
    check_unit(p, k.g2, "interference.g2");
    p.check(k.g2 <= k.g1, "interference.g2", "coupling must not increase with distance");

    p.check(cfg.mac.ack_wait_ms >= 0, "mac.ack_wait_ms", "must be >= 0");
    p.check(cfg.mac.backoff_max_ms >= 0, "mac.backoff_max_ms", "must be >= 0");
    p.check(cfg.mac.retx_backoff_max_ms >= 0, "mac.retx_backoff_max_ms", "must be >= 0");
    p.check(cfg.mac.epoch_jitter_ms >= 0, "mac.epoch_jitter_ms", "must be >= 0");
    p.check(cfg.mac.preamble_symbols > 0.0, "mac.preamble_symbols", "must be positive");
    p.check(cfg.trials >= 1, "trials", "must be >= 1");
    return p.take();
}

// ---------------------------------------------------------------------------
// JSON form

namespace {

std::string_view cca_name(CcaMode m) { return m == CcaMode::Energy ? "energy" : "preamble"; }

// Reads typed fields out of a JSON object, recording every problem with its
// path instead of stopping at the first one.
class Reader {
public:
    explicit Reader(Problems& p) : p_(p) {}

    bool object(const Json& j, const std::string& path, std::initializer_list<std::string_view> keys) {
        if (!j.is_object()) {
            p_.add(path, "expected an object");
            return false;
        }
        for (const auto& [key, _] : j.items()) {
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
                p_.add(path.empty() ? key : path + "." + key, "unknown key");
            }
        }
        return true;
    }

    template <typename T>
    void field(const Json& j, std::string_view key, const std::string& path, T& out) {
        auto it = j.find(key);
        if (it == j.end()) return;
        const std::string full = path.empty() ? std::string(key) : path + "." + std::string(key);
        read(*it, full, out);
    }

    template <typename T>
    void read(const Json& v, const std::string& path, T& out) {
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) return p_.add(path, "expected true or false");
            out = v.get<bool>();
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!v.is_number()) return p_.add(path, "expected a number");
            out = v.get<T>();
        } else if constexpr (std::is_unsigned_v<T>) {
            if (!v.is_number_integer() || (v.is_number_integer() && v.get<std::int64_t>() < 0)) {
                return p_.add(path, "expected a nonnegative integer");
            }
            out = v.get<T>();
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer()) return p_.add(path, "expected an integer");
            out = v.get<T>();
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) return p_.add(path, "expected a string");
            out = v.get<std::string>();
        } else if constexpr (std::is_same_v<T, std::vector<int>>) {
            if (!v.is_array()) return p_.add(path, "expected a list of integers");
            out.clear();
            for (std::size_t i = 0; i < v.size(); ++i) {
                int x = 0;
                read(v[i], path + "[" + std::to_string(i) + "]", x);
                out.push_back(x);
            }
        } else {
            static_assert(sizeof(T) == 0, "unsupported field type");
        }
    }

private:
    Problems& p_;
};

void read_group(Reader& r, const Json& j, const std::string& path, DeviceGroup& g) {
    if (!r.object(j, path, {"count", "channels", "sfs", "ti_ms", "tr", "payload", "phase_ms"})) return;
    r.field(j, "count", path, g.count);
    r.field(j, "channels", path, g.channels);
    r.field(j, "sfs", path, g.sfs);
    r.field(j, "ti_ms", path, g.ti_ms);
    r.field(j, "tr", path, g.tr);
    r.field(j, "payload", path, g.payload);
    if (auto it = j.find("phase_ms"); it != j.end() && !it->is_null()) {
        TimeMs phase = 0;
        r.read(*it, path + ".phase_ms", phase);
        g.phase_ms = phase;
    }
}

void read_windows(Reader& r, Problems& p, const Json& j, const std::string& path,
                  std::vector<AvailabilityWindow>& out) {
    if (!j.is_array()) return p.add(path, "expected a list");
    out.clear();
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string wp = path + "[" + std::to_string(i) + "]";
        AvailabilityWindow w;
        if (r.object(j[i], wp, {"from_ms", "to_ms", "channels"})) {
            r.field(j[i], "from_ms", wp, w.from_ms);
            r.field(j[i], "to_ms", wp, w.to_ms);
            r.field(j[i], "channels", wp, w.channels);
        }
        out.push_back(std::move(w));
    }
}

ScenarioConfig from_json(const Json& root, Problems& p) {
    ScenarioConfig cfg;
    Reader r(p);
    if (!r.object(root, "", {"name", "bandwidth_khz", "devices", "policy", "gateway", "wisun",
                             "interference", "collision", "mac", "horizon", "trials"})) {
        return cfg;
    }
    r.field(root, "name", "", cfg.name);
    r.field(root, "bandwidth_khz", "", cfg.bandwidth_khz);
    r.field(root, "trials", "", cfg.trials);

    if (auto it = root.find("devices"); it != root.end()) {
        if (it->is_array()) {
            for (std::size_t i = 0; i < it->size(); ++i) {
                DeviceGroup g;
                read_group(r, (*it)[i], "devices[" + std::to_string(i) + "]", g);
                cfg.devices.push_back(std::move(g));
            }
        } else {
            DeviceGroup g;
            read_group(r, *it, "devices", g);
            cfg.devices.push_back(std::move(g));
        }
    } else {
        p.add("devices", "missing");
    }

    if (auto it = root.find("policy"); it != root.end()) {
        const Json& j = *it;
        if (r.object(j, "policy", {"name", "alpha", "beta", "amp", "epsilon", "omega_max"})) {
            std::string name(policy_name(cfg.policy.kind));
            r.field(j, "name", "policy", name);
            if (auto pol = parse_policy(name)) {
                cfg.policy.kind = *pol;
            } else {
                p.add("policy.name", "unknown policy '" + name + "' (tow, ucb1tuned, egreedy, random)");
            }
            r.field(j, "alpha", "policy", cfg.policy.alpha);
            r.field(j, "beta", "policy", cfg.policy.beta);
            r.field(j, "amp", "policy", cfg.policy.amp);
            r.field(j, "epsilon", "policy", cfg.policy.epsilon);
            r.field(j, "omega_max", "policy", cfg.policy.omega_max);
        }
    }

    if (auto it = root.find("gateway"); it != root.end()) {
        const Json& j = *it;
        if (r.object(j, "gateway", {"channels", "demodulators", "availability"})) {
            r.field(j, "channels", "gateway", cfg.gateway.channels);
            if (auto d = j.find("demodulators"); d != j.end()) {
                if (!d->is_array()) {
                    p.add("gateway.demodulators", "expected a list of [channel, sf] pairs");
                } else {
                    for (std::size_t i = 0; i < d->size(); ++i) {
                        std::vector<int> pair;
                        const std::string dp = "gateway.demodulators[" + std::to_string(i) + "]";
                        r.read((*d)[i], dp, pair);
                        if (pair.size() != 2) {
                            p.add(dp, "expected [channel, sf]");
                        } else {
                            cfg.gateway.demodulators.emplace_back(pair[0], pair[1]);
                        }
                    }
                }
            }
            if (auto a = j.find("availability"); a != j.end()) {
                read_windows(r, p, *a, "gateway.availability", cfg.gateway.availability);
            }
        }
    } else {
        p.add("gateway", "missing");
    }

    if (auto it = root.find("wisun"); it != root.end() && !it->is_null()) {
        const Json& j = *it;
        WiSunConfig w;
        if (r.object(j, "wisun", {"count", "bitrate_kbps", "payload", "ti_ms", "schedule"})) {
            r.field(j, "count", "wisun", w.count);
            r.field(j, "bitrate_kbps", "wisun", w.bitrate_kbps);
            r.field(j, "payload", "wisun", w.payload);
            r.field(j, "ti_ms", "wisun", w.ti_ms);
            if (auto s = j.find("schedule"); s != j.end()) {
                if (!s->is_array()) {
                    p.add("wisun.schedule", "expected a list");
                } else {
                    for (std::size_t i = 0; i < s->size(); ++i) {
                        const std::string sp = "wisun.schedule[" + std::to_string(i) + "]";
                        WiSunWindow win;
                        const Json& e = (*s)[i];
                        if (r.object(e, sp, {"from_ms", "to_ms", "channel"})) {
                            r.field(e, "from_ms", sp, win.from_ms);
                            r.field(e, "to_ms", sp, win.to_ms);
                            if (auto c = e.find("channel"); c != e.end() && !c->is_null()) {
                                int ch = 0;
                                r.read(*c, sp + ".channel", ch);
                                win.channel = ch;
                            }
                        }
                        w.schedule.push_back(win);
                    }
                }
            }
        }
        cfg.wisun = std::move(w);
    }

    if (auto it = root.find("interference"); it != root.end()) {
        if (r.object(*it, "interference", {"radius", "g1", "g2"})) {
            r.field(*it, "radius", "interference", cfg.interference.radius);
            r.field(*it, "g1", "interference", cfg.interference.g1);
            r.field(*it, "g2", "interference", cfg.interference.g2);
        }
    }
    if (auto it = root.find("collision"); it != root.end()) {
        if (r.object(*it, "collision", {"capture", "inter_sf"})) {
            r.field(*it, "capture", "collision", cfg.collision.capture);
            r.field(*it, "inter_sf", "collision", cfg.collision.inter_sf);
        }
    }
    if (auto it = root.find("mac"); it != root.end()) {
        if (r.object(*it, "mac", {"ack_wait_ms", "backoff_max_ms", "retx_backoff_max_ms", "epoch_jitter_ms", "cca",
                                         "preamble_symbols"})) {
            r.field(*it, "ack_wait_ms", "mac", cfg.mac.ack_wait_ms);
            r.field(*it, "backoff_max_ms", "mac", cfg.mac.backoff_max_ms);
            r.field(*it, "retx_backoff_max_ms", "mac", cfg.mac.retx_backoff_max_ms);
            r.field(*it, "epoch_jitter_ms", "mac", cfg.mac.epoch_jitter_ms);
            r.field(*it, "preamble_symbols", "mac", cfg.mac.preamble_symbols);
            std::string cca(cca_name(cfg.mac.cca));
            r.field(*it, "cca", "mac", cca);
            if (cca == "energy") {
                cfg.mac.cca = CcaMode::Energy;
            } else if (cca == "preamble") {
                cfg.mac.cca = CcaMode::Preamble;
            } else {
                p.add("mac.cca", "expected 'energy' or 'preamble'");
            }
        }
    }
    if (auto it = root.find("horizon"); it != root.end()) {
        if (r.object(*it, "horizon", {"wall_ms", "attempts"})) {
            if (auto w = it->find("wall_ms"); w != it->end() && !w->is_null()) {
                TimeMs v = 0;
                r.read(*w, "horizon.wall_ms", v);
                cfg.horizon.wall_ms = v;
            }
            if (auto a = it->find("attempts"); a != it->end() && !a->is_null()) {
                std::uint32_t v = 0;
                r.read(*a, "horizon.attempts", v);
                cfg.horizon.attempts = v;
            }
        }
    } else {
        p.add("horizon", "missing");
    }
    return cfg;
}

Json windows_json(const std::vector<AvailabilityWindow>& windows) {
    Json out = Json::array();
    for (const auto& w : windows) {
        out.push_back(Json{{"from_ms", w.from_ms}, {"to_ms", w.to_ms}, {"channels", w.channels}});
    }
    return out;
}

}  // namespace

ScenarioConfig load_config_text(std::string_view text) {
    Json root;
    try {
        root = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError({std::string("parse error: ") + e.what()});
    }
    Problems p;
    ScenarioConfig cfg = from_json(root, p);
    auto problems = p.take();
    if (problems.empty()) problems = validate(cfg);
    if (!problems.empty()) throw ConfigError(std::move(problems));
    return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_config_text(ss.str());
}

std::string dump_config(const ScenarioConfig& cfg) {
    Json root;
    root["name"] = cfg.name;
    root["bandwidth_khz"] = cfg.bandwidth_khz;
    Json devices = Json::array();
    for (const auto& g : cfg.devices) {
        Json j{{"count", g.count}, {"channels", g.channels}, {"sfs", g.sfs},
               {"ti_ms", g.ti_ms}, {"tr", g.tr}, {"payload", g.payload}};
        if (g.phase_ms) j["phase_ms"] = *g.phase_ms;
        devices.push_back(std::move(j));
    }
    root["devices"] = std::move(devices);
    root["policy"] = Json{{"name", policy_name(cfg.policy.kind)},
                          {"alpha", cfg.policy.alpha},
                          {"beta", cfg.policy.beta},
                          {"amp", cfg.policy.amp},
                          {"epsilon", cfg.policy.epsilon},
                          {"omega_max", cfg.policy.omega_max}};
    Json gw{{"channels", cfg.gateway.channels}};
    if (!cfg.gateway.demodulators.empty()) {
        Json d = Json::array();
        for (auto [ch, sf] : cfg.gateway.demodulators) d.push_back(Json::array({ch, sf}));
        gw["demodulators"] = std::move(d);
    }
    if (!cfg.gateway.availability.empty()) gw["availability"] = windows_json(cfg.gateway.availability);
    root["gateway"] = std::move(gw);
    if (cfg.wisun) {
        const auto& w = *cfg.wisun;
        Json sched = Json::array();
        for (const auto& s : w.schedule) {
            sched.push_back(Json{{"from_ms", s.from_ms},
                                 {"to_ms", s.to_ms},
                                 {"channel", s.channel ? Json(*s.channel) : Json(nullptr)}});
        }
        root["wisun"] = Json{{"count", w.count},       {"bitrate_kbps", w.bitrate_kbps},
                             {"payload", w.payload},   {"ti_ms", w.ti_ms},
                             {"schedule", std::move(sched)}};
    } else {
        root["wisun"] = nullptr;
    }
    root["interference"] = Json{{"radius", cfg.interference.radius},
                                {"g1", cfg.interference.g1},
                                {"g2", cfg.interference.g2}};
    root["collision"] = Json{{"capture", cfg.collision.capture}, {"inter_sf", cfg.collision.inter_sf}};
    root["mac"] = Json{{"ack_wait_ms", cfg.mac.ack_wait_ms},
                       {"backoff_max_ms", cfg.mac.backoff_max_ms},
                       {"retx_backoff_max_ms", cfg.mac.retx_backoff_max_ms},
                       {"epoch_jitter_ms", cfg.mac.epoch_jitter_ms},
                       {"cca", cca_name(cfg.mac.cca)},
                       {"preamble_symbols", cfg.mac.preamble_symbols}};
    Json horizon = Json::object();
    if (cfg.horizon.wall_ms) horizon["wall_ms"] = *cfg.horizon.wall_ms;
    if (cfg.horizon.attempts) horizon["attempts"] = *cfg.horizon.attempts;
    root["horizon"] = std::move(horizon);
    root["trials"] = cfg.trials;
    return root.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Presets

void set_device_count(ScenarioConfig& cfg, std::uint32_t count) {
    if (cfg.devices.empty()) return;
    const auto groups = static_cast<std::uint32_t>(cfg.devices.size());
    for (std::uint32_t i = 0; i < groups; ++i) {
        cfg.devices[i].count = count / groups + (i < count % groups ? 1 : 0);
    }
}

void apply_chsf_setting(ScenarioConfig& cfg, int setting) {
    if (setting < 1 || setting > 5) {
        throw ConfigError({"setting: must be 1..5 (got " + std::to_string(setting) + ")"});
    }
    if (cfg.devices.empty()) throw ConfigError({"devices: scenario has no device group"});
    const std::uint32_t total = cfg.device_count();
    DeviceGroup base = cfg.devices.front();
    cfg.devices.clear();
    if (setting <= 3) {
        base.sfs = {6 + setting};
        cfg.devices.push_back(base);
    } else if (setting == 4) {
        for (int sf : {7, 8, 9}) {
            base.sfs = {sf};
            cfg.devices.push_back(base);
        }
    } else {
        base.sfs = {7, 8, 9};
        cfg.devices.push_back(base);
    }
    set_device_count(cfg, total);
}

namespace {

constexpr TimeMs minutes(TimeMs m) { return m * kMinute; }

ScenarioConfig table2_base(std::string name, std::vector<int> device_channels, std::vector<int> gw_channels) {
    ScenarioConfig cfg;
    cfg.name = std::move(name);
    cfg.bandwidth_khz = 125.0;
    cfg.devices = {DeviceGroup{30, std::move(device_channels), {7}, 10'000, 3, 50, std::nullopt}};
    cfg.gateway.channels = std::move(gw_channels);
    cfg.horizon.wall_ms = minutes(30);
    return cfg;
}

ScenarioConfig chsf_base(std::string name) {
    ScenarioConfig cfg;
    cfg.name = std::move(name);
    cfg.bandwidth_khz = 125.0;
    cfg.devices = {DeviceGroup{30, {1, 3, 5}, {7, 8, 9}, 20'000, 0, 50, std::nullopt}};
    cfg.gateway.channels = {1, 3, 5};
    cfg.horizon.attempts = 200;
    return cfg;
}

WiSunConfig wisun_fleet(std::vector<WiSunWindow> schedule) {
    WiSunConfig w;
    w.count = 20;
    w.bitrate_kbps = 50.0;
    w.payload = 200;
    w.ti_ms = 1'000;
    w.schedule = std::move(schedule);
    return w;
}

ScenarioConfig chsf_wisun(std::string name) {
    ScenarioConfig cfg = chsf_base(std::move(name));
    cfg.wisun = wisun_fleet({{0, minutes(20), std::nullopt},
                             {minutes(20), minutes(30), 1},
                             {minutes(30), minutes(40), 3},
                             {minutes(40), minutes(50), 5}});
    cfg.horizon = Horizon{minutes(50), std::nullopt};
    return cfg;
}

struct Preset {
    std::string_view name;
    ScenarioConfig (*make)();
};

const std::vector<Preset>& presets() {
    static const std::vector<Preset> list{
        {"ch-static", [] { return table2_base("ch-static", {1, 3, 5, 7, 9}, {1, 3, 5}); }},
        {"ch-dynamic",
         [] {
             auto cfg = table2_base("ch-dynamic", {1, 3, 5, 7, 9}, {1, 3, 5});
             cfg.horizon.wall_ms = minutes(40);
             cfg.gateway.availability = {{0, minutes(10), {1, 3, 5}},
                                         {minutes(10), minutes(20), {1, 3}},
                                         {minutes(20), minutes(30), {3, 5}},
                                         {minutes(30), minutes(40), {1, 5}}};
             return cfg;
         }},
        {"chsf-static", [] { return chsf_base("chsf-static"); }},
        {"chsf-sf7", [] { auto c = chsf_base("chsf-sf7"); apply_chsf_setting(c, 1); return c; }},
        {"chsf-sf8", [] { auto c = chsf_base("chsf-sf8"); apply_chsf_setting(c, 2); return c; }},
        {"chsf-sf9", [] { auto c = chsf_base("chsf-sf9"); apply_chsf_setting(c, 3); return c; }},
        {"chsf-mixed", [] { auto c = chsf_base("chsf-mixed"); apply_chsf_setting(c, 4); return c; }},
        {"chsf-wisun", [] { return chsf_wisun("chsf-wisun"); }},
        {"adjacent-1", [] { return table2_base("adjacent-1", {2, 4, 6}, {2, 4, 6}); }},
        {"adjacent-2", [] { return table2_base("adjacent-2", {2, 5, 8}, {2, 5, 8}); }},
        {"adjacent-wisun",
         [] {
             auto cfg = table2_base("adjacent-wisun", {1, 4, 7, 10, 14}, {1, 4, 7});
             cfg.horizon.wall_ms = minutes(40);
             cfg.wisun = wisun_fleet({{0, minutes(10), std::nullopt},
                                      {minutes(10), minutes(20), 1},
                                      {minutes(20), minutes(30), 4},
                                      {minutes(30), minutes(40), 7}});
             return cfg;
         }},
    };
    return list;
}

}  // namespace

std::vector<std::string> builtin_names() {
    std::vector<std::string> names;
    for (const auto& p : presets()) names.emplace_back(p.name);
    return names;
}

ScenarioConfig builtin(std::string_view name) {
    for (const auto& p : presets()) {
        if (p.name == name) return p.make();
    }
    throw ConfigError({"builtin: unknown preset '" + std::string(name) + "' (available: " +
                       join(builtin_names(), ", ") + ")"});
}

}  // namespace lorasim
