#include "lorasim/report.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "lorasim/simcore.hpp"

namespace lorasim {

using Json = nlohmann::ordered_json;

namespace {

// Runs job(i) for i in [0, n) on up to `threads` workers; rethrows the first failure.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& job) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

Json optional_number(std::optional<double> v) {
    if (!v) return nullptr;
    // Same digits as the CSV rendering.
    return std::strtod(format_value(v).c_str(), nullptr);
}

Json stat_json(const std::optional<Stat>& s) {
    if (!s) return nullptr;
    return Json{{"mean", optional_number(s->mean)},
                {"std", optional_number(s->stddev)},
                {"ci95", optional_number(s->ci95)},
                {"n", s->n}};
}

Json row_json(const TrialRow& r) {
    Json j{{"axis_value", r.axis_value},
           {"policy", policy_name(r.policy)},
           {"seed", r.seed},
           {"attempts", r.attempts},
           {"successes", r.successes},
           {"fsr", optional_number(r.fsr)},
           {"fairness", optional_number(r.fairness)},
           {"mean_switch_latency", optional_number(r.mean_switch_latency)}};
    Json per_channel = Json::object();
    for (auto [ch, n] : r.received_per_channel) per_channel[std::to_string(ch)] = n;
    j["received_per_channel"] = std::move(per_channel);
    return j;
}

}  // namespace

TrialRow summarize(std::string axis_value, Policy policy, std::uint64_t seed, const MetricsRecord& r) {
    TrialRow row;
    row.axis_value = std::move(axis_value);
    row.policy = policy;
    row.seed = seed;
    row.attempts = r.attempts;
    row.successes = r.successes;
    row.fsr = r.fsr();
    row.fairness = r.fairness();
    row.mean_switch_latency = r.mean_switch_latency();
    const auto counts = r.channel_counts();
    for (std::size_t i = 0; i < counts.size(); ++i) {
        row.received_per_channel.emplace_back(r.fairness_channels[i], counts[i]);
    }
    return row;
}

std::vector<std::uint64_t> trial_seeds(std::uint64_t master, std::uint32_t count) {
    std::vector<std::uint64_t> seeds(count);
    for (std::uint32_t i = 0; i < count; ++i) seeds[i] = derive_seed(master, i);
    return seeds;
}

unsigned worker_threads() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("LORA_TOW_SIM_THREADS")) {
        unsigned cap = 0;
        const std::string_view s(env);
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
        if (ec == std::errc() && ptr == s.data() + s.size() && cap > 0) return cap;
    }
    return hw;
}

std::vector<MetricsRecord> run_trials(const ScenarioConfig& cfg, std::span<const std::uint64_t> seeds,
                                      unsigned threads) {
    std::vector<MetricsRecord> out(seeds.size());
    parallel_for(seeds.size(), threads, [&](std::size_t i) { out[i] = run_simulation(cfg, seeds[i]); });
    return out;
}

std::string format_value(std::optional<double> v) {
    if (!v) return {};
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", *v);
    return buf;
}

std::string emit_csv(std::span<const TrialRow> rows) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += r.axis_value + ',' + std::string(policy_name(r.policy)) + ',' + std::to_string(r.seed) +
               ',' + std::to_string(r.attempts) + ',' + std::to_string(r.successes) + ',' +
               format_value(r.fsr) + ',' + format_value(r.fairness) + ',' +
               format_value(r.mean_switch_latency) + '\n';
    }
    return out;
}

std::string emit_json(std::span<const TrialRow> rows) {
    Json arr = Json::array();
    for (const auto& r : rows) arr.push_back(row_json(r));
    return arr.dump(2) + "\n";
}

std::string config_hash(const ScenarioConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump_config(cfg)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunReport make_run_report(const ScenarioConfig& cfg, std::uint64_t master_seed, unsigned threads) {
    RunReport rep;
    rep.scenario = cfg.name;
    rep.config_hash = config_hash(cfg);
    rep.policy = cfg.policy.kind;
    rep.master_seed = master_seed;
    rep.seeds = trial_seeds(master_seed, cfg.trials);
    rep.config = cfg;
    rep.version = LORASIM_VERSION;
    const auto records = run_trials(cfg, rep.seeds, threads);
    for (std::size_t i = 0; i < records.size(); ++i) {
        rep.trials.push_back(summarize(cfg.name, cfg.policy.kind, rep.seeds[i], records[i]));
    }
    rep.aggregate = aggregate_trials(records);
    return rep;
}

std::string report_json(const RunReport& rep) {
    Json j;
    j["tool"] = "lora_tow_sim";
    j["version"] = rep.version;
    j["scenario"] = rep.scenario;
    j["config_hash"] = rep.config_hash;
    j["policy"] = policy_name(rep.policy);
    j["master_seed"] = rep.master_seed;
    j["seeds"] = rep.seeds;
    Json trials = Json::array();
    for (const auto& t : rep.trials) trials.push_back(row_json(t));
    j["trials"] = std::move(trials);
    j["aggregate"] = Json{{"fsr", stat_json(rep.aggregate.fsr)},
                          {"fairness", stat_json(rep.aggregate.fairness)},
                          {"mean_switch_latency", stat_json(rep.aggregate.mean_switch_latency)}};
    j["config"] = Json::parse(dump_config(rep.config));
    return j.dump(2) + "\n";
}

RunReport parse_report_json(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError({std::string("report: ") + e.what()});
    }
    if (!j.is_object() || !j.contains("config") || !j.contains("seeds") || !j.contains("master_seed")) {
        throw ConfigError({"report: missing config, seeds or master_seed"});
    }
    RunReport rep;
    rep.config = load_config_text(j["config"].dump());
    rep.scenario = j.value("scenario", rep.config.name);
    rep.config_hash = j.value("config_hash", "");
    rep.policy = rep.config.policy.kind;
    rep.master_seed = j["master_seed"].get<std::uint64_t>();
    rep.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    rep.version = j.value("version", "");
    const Json trials = j.value("trials", Json::array());
    for (const auto& t : trials) {
        TrialRow row;
        row.axis_value = t.value("axis_value", "");
        row.policy = parse_policy(t.value("policy", "tow")).value_or(Policy::Tow);
        row.seed = t.value("seed", std::uint64_t{0});
        row.attempts = t.value("attempts", std::uint64_t{0});
        row.successes = t.value("successes", std::uint64_t{0});
        auto opt = [&](const char* key) -> std::optional<double> {
            if (!t.contains(key) || t[key].is_null()) return std::nullopt;
            return t[key].get<double>();
        };
        row.fsr = opt("fsr");
        row.fairness = opt("fairness");
        row.mean_switch_latency = opt("mean_switch_latency");
        const Json per_channel = t.value("received_per_channel", Json::object());
        for (const auto& [ch, n] : per_channel.items()) {
            row.received_per_channel.emplace_back(std::stoi(ch), n.get<std::uint64_t>());
        }
        rep.trials.push_back(std::move(row));
    }
    return rep;
}

std::string replay_mismatch(const RunReport& report, unsigned threads) {
    if (config_hash(report.config) != report.config_hash) return "config hash differs from embedded config";
    const auto records = run_trials(report.config, report.seeds, threads);
    if (records.size() != report.trials.size()) return "trial count differs";
    std::ostringstream diff;
    for (std::size_t i = 0; i < records.size(); ++i) {
        TrialRow fresh = summarize(report.config.name, report.config.policy.kind, report.seeds[i], records[i]);
        const auto& old = report.trials[i];
        // Compare through the shared rendering so parsed and fresh values agree.
        const std::string a = emit_csv(std::span(&fresh, 1));
        const std::string b = emit_csv(std::span(&old, 1));
        if (a != b || fresh.received_per_channel != old.received_per_channel) {
            diff << "trial " << i << " (seed " << report.seeds[i] << ") differs\n";
        }
    }
    return diff.str();
}

ScenarioConfig apply_axis(const ScenarioConfig& base, std::string_view axis, std::string_view value) {
    auto as_int = [&](std::string_view what) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc() || ptr != value.data() + value.size() || v <= 0) {
            throw ConfigError({std::string(what) + ": '" + std::string(value) + "' is not a positive integer"});
        }
        return v;
    };
    if (axis == "devices") {
        ScenarioConfig cfg = base;
        set_device_count(cfg, static_cast<std::uint32_t>(as_int("devices")));
        return cfg;
    }
    if (axis == "setting") {
        ScenarioConfig cfg = base;
        apply_chsf_setting(cfg, as_int("setting"));
        return cfg;
    }
    if (axis == "preset") {
        ScenarioConfig cfg = builtin(value);
        cfg.policy = base.policy;
        cfg.trials = base.trials;
        return cfg;
    }
    throw ConfigError({"axis: unknown sweep axis '" + std::string(axis) + "' (devices, setting, preset)"});
}

std::vector<TrialRow> run_sweep(const ScenarioConfig& base, const SweepSpec& spec, unsigned threads) {
    if (spec.values.empty()) throw ConfigError({"values: sweep needs at least one value"});
    if (spec.policies.empty()) throw ConfigError({"policies: sweep needs at least one policy"});
    if (spec.seeds == 0) throw ConfigError({"seeds: must be >= 1"});

    struct Job {
        std::size_t config;
        std::uint64_t seed;
    };
    std::vector<ScenarioConfig> configs;
    std::vector<std::string> labels;
    std::vector<Job> jobs;
    const auto seeds = trial_seeds(spec.master_seed, spec.seeds);
    for (const auto& value : spec.values) {
        const ScenarioConfig at_value = apply_axis(base, spec.axis, value);
        for (Policy p : spec.policies) {
            ScenarioConfig cfg = at_value;
            cfg.policy.kind = p;
            if (auto problems = validate(cfg); !problems.empty()) throw ConfigError(std::move(problems));
            configs.push_back(std::move(cfg));
            labels.push_back(value);
            for (auto s : seeds) jobs.push_back(Job{configs.size() - 1, s});
        }
    }
    std::vector<TrialRow> rows(jobs.size());
    parallel_for(jobs.size(), threads, [&](std::size_t i) {
        const auto& cfg = configs[jobs[i].config];
        rows[i] = summarize(labels[jobs[i].config], cfg.policy.kind, jobs[i].seed,
                            run_simulation(cfg, jobs[i].seed));
    });
    return rows;
}

}  // namespace lorasim
