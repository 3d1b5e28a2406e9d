// lora_tow_sim: run LoRa channel/SF selection scenarios and emit reports.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lorasim/report.hpp"
#include "lorasim/scenario.hpp"
#include "lorasim/simcore.hpp"

namespace {

enum Exit : int { kOk = 0, kConfig = 2, kIo = 3, kInternal = 4 };

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ScenarioArgs {
    std::string builtin;
    std::string config;
    std::string policy;
    std::uint32_t devices = 0;
    int setting = 0;
    std::uint32_t seeds = 0;
    std::uint64_t master_seed = 1;
    std::string out;
    std::string format = "json";
};

void add_scenario_flags(CLI::App* cmd, ScenarioArgs& a) {
    auto* b = cmd->add_option("--builtin", a.builtin, "Built-in preset name");
    auto* c = cmd->add_option("--config", a.config, "Scenario config file (JSON)");
    b->excludes(c);
    cmd->add_option("--seeds", a.seeds, "Number of trials (default: the scenario's trial count)");
    cmd->add_option("--master-seed", a.master_seed, "Master seed; trial seeds derive from it");
    cmd->add_option("--out", a.out, "Output path (default: stdout)");
    cmd->add_option("--format", a.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
}

lorasim::ScenarioConfig resolve(const ScenarioArgs& a) {
    if (a.builtin.empty() == a.config.empty()) {
        throw lorasim::ConfigError({"scenario: pass exactly one of --builtin or --config"});
    }
    lorasim::ScenarioConfig cfg;
    if (!a.builtin.empty()) {
        cfg = lorasim::builtin(a.builtin);
    } else {
        try {
            cfg = lorasim::load_config_file(a.config);
        } catch (const std::ios_base::failure& e) {
            throw IoError(e.what());
        }
    }
    if (!a.policy.empty()) {
        auto p = lorasim::parse_policy(a.policy);
        if (!p) throw lorasim::ConfigError({"policy: unknown policy '" + a.policy + "'"});
        cfg.policy.kind = *p;
    }
    if (a.setting != 0) lorasim::apply_chsf_setting(cfg, a.setting);
    if (a.devices != 0) lorasim::set_device_count(cfg, a.devices);
    if (a.seeds != 0) cfg.trials = a.seeds;
    if (auto problems = lorasim::validate(cfg); !problems.empty()) {
        throw lorasim::ConfigError(std::move(problems));
    }
    return cfg;
}

void write_output(const std::string& path, const std::string& body) {
    if (path.empty() || path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << body;
    if (!out) throw IoError("write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void print_aggregate(const lorasim::RunReport& rep) {
    auto stat = [](const std::optional<lorasim::Stat>& s) {
        if (!s) return std::string("n/a");
        return lorasim::format_value(s->mean) + " +/- " + lorasim::format_value(s->ci95);
    };
    std::cerr << rep.scenario << " policy=" << lorasim::policy_name(rep.policy)
              << " trials=" << rep.seeds.size() << " fsr=" << stat(rep.aggregate.fsr)
              << " fairness=" << stat(rep.aggregate.fairness) << '\n';
}

std::vector<lorasim::Policy> parse_policies(const std::vector<std::string>& names) {
    std::vector<lorasim::Policy> out;
    for (const auto& n : names) {
        auto p = lorasim::parse_policy(n);
        if (!p) throw lorasim::ConfigError({"policies: unknown policy '" + n + "'"});
        out.push_back(*p);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LoRa uplink simulator with decentralized channel/SF selection policies"};
    app.require_subcommand(1);

    ScenarioArgs run_args;
    std::string event_log;
    auto* run = app.add_subcommand("run", "Run one scenario over several seeds");
    add_scenario_flags(run, run_args);
    run->add_option("--policy", run_args.policy, "tow | ucb1tuned | egreedy | random");
    run->add_option("--devices", run_args.devices, "Override the device count");
    run->add_option("--setting", run_args.setting, "CH-SF setting 1..5");
    run->add_option("--event-log", event_log, "Write the first trial's per-frame log (JSON lines)");

    ScenarioArgs sweep_args;
    std::string axis;
    std::vector<std::string> values;
    std::vector<std::string> policies{"tow", "ucb1tuned", "egreedy", "random"};
    auto* sweep = app.add_subcommand("sweep", "Sweep one parameter across policies and seeds");
    add_scenario_flags(sweep, sweep_args);
    sweep_args.format = "csv";
    sweep->add_option("--axis", axis, "devices | setting | preset")->required();
    sweep->add_option("--values", values, "Axis values")->required()->delimiter(',');
    sweep->add_option("--policies", policies, "Policies to compare")->delimiter(',');
    sweep->add_option("--devices", sweep_args.devices, "Override the device count");

    std::string export_name;
    std::string export_out;
    auto* exp = app.add_subcommand("export", "Print a built-in preset as config text");
    exp->add_option("--builtin", export_name, "Preset name")->required();
    exp->add_option("--out", export_out, "Output path (default: stdout)");

    std::string replay_path;
    auto* replay = app.add_subcommand("replay", "Re-run a JSON report and verify every number");
    replay->add_option("--report", replay_path, "Report written by `run --format json`")->required();

    app.add_subcommand("list", "List built-in presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        const unsigned threads = lorasim::worker_threads();
        if (run->parsed()) {
            const auto cfg = resolve(run_args);
            const auto rep = lorasim::make_run_report(cfg, run_args.master_seed, threads);
            write_output(run_args.out, run_args.format == "csv" ? lorasim::emit_csv(rep.trials)
                                                                : lorasim::report_json(rep));
            if (!event_log.empty()) {
                std::vector<lorasim::FrameLogEntry> frames;
                lorasim::run_simulation(cfg, rep.seeds.front(), {&frames});
                std::ostringstream ss;
                lorasim::write_event_log(ss, frames);
                write_output(event_log, ss.str());
            }
            print_aggregate(rep);
        } else if (sweep->parsed()) {
            const auto cfg = resolve(sweep_args);
            lorasim::SweepSpec spec;
            spec.axis = axis;
            spec.values = values;
            spec.policies = parse_policies(policies);
            spec.seeds = cfg.trials;
            spec.master_seed = sweep_args.master_seed;
            const auto rows = lorasim::run_sweep(cfg, spec, threads);
            write_output(sweep_args.out, sweep_args.format == "csv" ? lorasim::emit_csv(rows)
                                                                    : lorasim::emit_json(rows));
        } else if (exp->parsed()) {
            write_output(export_out, lorasim::dump_config(lorasim::builtin(export_name)));
        } else if (replay->parsed()) {
            const auto rep = lorasim::parse_report_json(read_file(replay_path));
            const auto diff = lorasim::replay_mismatch(rep, threads);
            if (!diff.empty()) {
                std::cerr << "replay mismatch:\n" << diff;
                return kInternal;
            }
            std::cerr << "replay ok: " << rep.seeds.size() << " trials reproduced\n";
        } else {
            for (const auto& name : lorasim::builtin_names()) std::cout << name << '\n';
        }
    } catch (const lorasim::ConfigError& e) {
        std::cerr << "config error:\n";
        for (const auto& p : e.problems()) std::cerr << "  " << p << '\n';
        return kConfig;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kOk;
}
