// Prints one PASS/FAIL line per acceptance criterion. Exits nonzero when an
// exact criterion (1, 2, 8, 9) fails; the qualitative figure-shape criteria
// are reported but do not fail the run.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "lorasim/airtime.hpp"
#include "lorasim/bandit.hpp"
#include "lorasim/metrics.hpp"
#include "lorasim/report.hpp"

using namespace lorasim;

namespace {

constexpr std::array<Policy, 4> kPolicies{Policy::Tow, Policy::Ucb1Tuned, Policy::EpsilonGreedy, Policy::Random};
constexpr std::uint32_t kSeeds = 10;

bool report(int id, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    return ok;
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// Mean of a field over the rows matching (value, policy); NaN when no row has data.
struct SweepTable {
    std::vector<TrialRow> rows;

    double mean(const std::string& value, Policy p, std::optional<double> TrialRow::*field) const {
        double sum = 0.0;
        int n = 0;
        for (const auto& r : rows) {
            if (r.axis_value == value && r.policy == p && (r.*field).has_value()) {
                sum += *(r.*field);
                ++n;
            }
        }
        return n ? sum / n : std::nan("");
    }
    double fsr(const std::string& value, Policy p) const { return mean(value, p, &TrialRow::fsr); }
};

SweepTable sweep(const char* preset, const char* axis, std::vector<std::string> values) {
    SweepSpec spec;
    spec.axis = axis;
    spec.values = std::move(values);
    spec.policies.assign(kPolicies.begin(), kPolicies.end());
    spec.seeds = kSeeds;
    return SweepTable{run_sweep(builtin(preset), spec, worker_threads())};
}

std::string policy_list(const std::map<Policy, double>& v, const char* f = "%.3f") {
    std::string out;
    for (Policy p : kPolicies) {
        if (!out.empty()) out += ' ';
        out += std::string(policy_name(p)) + '=' + fmt(f, v.at(p));
    }
    return out;
}

bool criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> counts{1902, 998, 2045};
    const double j = *fairness(std::span<const double>(counts));
    bool ok = std::abs(j - 0.9267) <= 0.0005;

    constexpr std::array<double, 4> bw{62.5, 125.0, 250.0, 500.0};
    constexpr std::array<std::array<TimeMs, 6>, 4> table{{
        {308, 543, 903, 1642, 2957, 5587},
        {154, 267, 452, 821, 1479, 2793},
        {77, 133, 226, 411, 739, 1397},
        {38, 67, 113, 205, 370, 698},
    }};
    int exact = 0;
    for (std::size_t b = 0; b < bw.size(); ++b) {
        for (int sf = 7; sf <= 12; ++sf) exact += time_on_air_ms(bw[b], sf, 50) == table[b][sf - 7];
    }
    ok &= exact == 24;

    TowState pair(2, TowParams{});
    pair.mutable_arms()[0] = TowArm{0.0, 10.0, 8.0};
    pair.mutable_arms()[1] = TowArm{0.0, 10.0, 6.0};
    const double w = pair.omega();
    ok &= std::abs(w - 7.0 / 3.0) <= 1e-12;

    TowState s(2, TowParams{0.9, 0.9, 0.5, 1e6});
    for (int i = 0; i < 400; ++i) s.feedback(0, true);
    const double n = s.arms()[0].n;
    ok &= std::abs(n - 10.0) <= 1e-6;

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ok &= secs < 1.0;
    return report(1, ok,
                  "fairness=" + fmt("%.4f", j) + " airtimes=" + std::to_string(exact) + "/24 omega=" +
                      fmt("%.15f", w) + " N*=" + fmt("%.9f", n) + " time=" + fmt("%.3fs", secs));
}

bool criterion2() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::array<double, 5> p{0.9, 0.5, 0.5, 0.5, 0.5};
    std::map<Policy, double> rate;
    for (Policy pol : kPolicies) {
        int best = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            JointSelector sel(pol, 5, 1, PolicyParams{TowParams{0.9, 0.9, 0.5, 1e6}, 0.1});
            Rng rng(derive_seed(seed, 0));
            Rng env(derive_seed(seed, 1));
            for (int step = 1; step <= 1000; ++step) {
                const auto pair = sel.decide(rng);
                if (step > 900 && pair.channel == 0) ++best;
                sel.feedback(pair, uniform01(env) < p[pair.channel]);
            }
        }
        rate[pol] = best / 10000.0;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = rate[Policy::Tow] >= 0.80 && rate[Policy::EpsilonGreedy] >= 0.70 &&
                    rate[Policy::Ucb1Tuned] >= 0.70 && std::abs(rate[Policy::Random] - 0.20) <= 0.03 &&
                    secs < 10.0;
    return report(2, ok, "best-arm rate " + policy_list(rate) + " time=" + fmt("%.2fs", secs));
}

std::map<Policy, double> criterion3(bool& ok) {
    const std::vector<std::string> ms{"2", "5", "10", "15", "20", "25", "30"};
    const auto t = sweep("ch-static", "devices", ms);
    ok = true;
    for (Policy p : kPolicies) {
        for (std::size_t i = 1; i < ms.size(); ++i) ok &= t.fsr(ms[i], p) <= t.fsr(ms[i - 1], p) + 0.01;
    }
    std::map<Policy, double> at30;
    for (Policy p : kPolicies) at30[p] = t.fsr("30", p);
    for (Policy p : {Policy::Ucb1Tuned, Policy::EpsilonGreedy, Policy::Random}) {
        ok &= at30[Policy::Tow] >= at30[p] + 0.02;
    }
    for (Policy p : {Policy::Tow, Policy::Ucb1Tuned, Policy::EpsilonGreedy}) {
        ok &= at30[p] >= at30[Policy::Random] + 0.05;
    }
    report(3, ok, "FSR at M=30 " + policy_list(at30));
    return at30;
}

void criterion4(const std::map<Policy, double>& at30) {
    const auto t = sweep("ch-dynamic", "devices", {"30"});
    std::map<Policy, double> f, lat;
    for (Policy p : kPolicies) {
        f[p] = t.fsr("30", p);
        lat[p] = t.mean("30", p, &TrialRow::mean_switch_latency);
    }
    bool ok = lat[Policy::Tow] <= lat[Policy::Ucb1Tuned] && lat[Policy::Tow] <= lat[Policy::EpsilonGreedy];
    for (Policy p : kPolicies) ok &= f[p] < at30.at(p);
    for (Policy p : {Policy::Ucb1Tuned, Policy::EpsilonGreedy, Policy::Random}) ok &= f[Policy::Tow] > f[p];
    report(4, ok, "FSR " + policy_list(f) + "; switch latency " + policy_list(lat, "%.2f"));
}

std::map<std::pair<Policy, int>, double> chsf(const char* preset) {
    const auto t = sweep(preset, "setting", {"1", "2", "3", "4", "5"});
    std::map<std::pair<Policy, int>, double> f;
    for (Policy p : kPolicies) {
        for (int s = 1; s <= 5; ++s) f[{p, s}] = t.fsr(std::to_string(s), p);
    }
    return f;
}

std::string chsf_detail(const std::map<std::pair<Policy, int>, double>& f) {
    std::string out;
    for (Policy p : kPolicies) {
        out += (out.empty() ? "" : "; ") + std::string(policy_name(p)) + ':';
        for (int s = 1; s <= 5; ++s) out += fmt(" %.3f", f.at({p, s}));
    }
    return out;
}

bool sf_ordering(const std::map<std::pair<Policy, int>, double>& f) {
    bool ok = true;
    for (Policy p : kPolicies) ok &= f.at({p, 1}) >= f.at({p, 2}) + 0.01 && f.at({p, 2}) >= f.at({p, 3}) + 0.01;
    return ok;
}

bool tow_best_joint(const std::map<std::pair<Policy, int>, double>& f) {
    bool ok = true;
    for (Policy p : kPolicies) ok &= f.at({Policy::Tow, 5}) >= f.at({p, 5});
    return ok;
}

void criterion5() {
    const auto f = chsf("chsf-static");
    const bool ok = sf_ordering(f) && f.at({Policy::Tow, 5}) >= f.at({Policy::Tow, 4}) &&
                    f.at({Policy::Tow, 5}) >= f.at({Policy::Tow, 1}) - 0.03 && tow_best_joint(f);
    report(5, ok, "FSR by setting 1..5 " + chsf_detail(f));
}

void criterion6() {
    const auto f = chsf("chsf-wisun");
    report(6, sf_ordering(f) && tow_best_joint(f), "FSR by setting 1..5 " + chsf_detail(f));
}

void criterion7() {
    const auto a1 = sweep("adjacent-1", "devices", {"30"});
    const auto a2 = sweep("adjacent-2", "devices", {"30"});
    const double f1 = a1.fsr("30", Policy::Tow), f2 = a2.fsr("30", Policy::Tow);
    const double j1 = a1.mean("30", Policy::Tow, &TrialRow::fairness);
    const double j2 = a2.mean("30", Policy::Tow, &TrialRow::fairness);
    const double gap = a2.fsr("30", Policy::Random) - a1.fsr("30", Policy::Random);
    std::map<int, std::uint64_t> received;
    for (const auto& r : a1.rows) {
        if (r.policy != Policy::Tow) continue;
        for (auto [ch, n] : r.received_per_channel) received[ch] += n;
    }
    bool middle_min = true;
    for (auto [ch, n] : received) middle_min &= received.at(4) <= n;
    const bool ok = f2 > f1 && j2 > j1 && gap >= 0.02 && gap <= 0.04 && middle_min;
    report(7, ok,
           "tow FSR " + fmt("%.3f", f1) + "->" + fmt("%.3f", f2) + " fairness " + fmt("%.3f", j1) + "->" +
               fmt("%.3f", j2) + " random gap " + fmt("%.3f", gap) + " received {2,4,6}=" +
               std::to_string(received[2]) + "/" + std::to_string(received[4]) + "/" + std::to_string(received[6]));
}

bool criterion8() {
    bool ok = true;
    std::string detail;
    for (const char* preset : {"ch-dynamic", "chsf-wisun", "adjacent-1"}) {
        auto cfg = builtin(preset);
        cfg.trials = 4;
        const auto rep = make_run_report(cfg, 17, worker_threads());
        const auto text = report_json(rep);
        const auto parsed = parse_report_json(text);
        const bool replayed = replay_mismatch(parsed, worker_threads()).empty();
        const bool rerun = report_json(make_run_report(parsed.config, parsed.master_seed, 1)) == text;
        ok &= replayed && rerun;
        detail += std::string(detail.empty() ? "" : " ") + preset + (replayed && rerun ? "=identical" : "=differs");
    }
    return report(8, ok, detail);
}

bool criterion9() {
    const JointSelector sel(Policy::Tow, 5, 3);
    const auto n = sel.stored_scalars();
    return report(9, n == 24, "stored per-arm scalars for I=5 S=3: " + std::to_string(n));
}

}  // namespace

int main() {
    bool hard = true;
    hard &= criterion1();
    hard &= criterion2();
    bool c3 = false;
    const auto at30 = criterion3(c3);
    criterion4(at30);
    criterion5();
    criterion6();
    criterion7();
    hard &= criterion8();
    hard &= criterion9();
    return hard ? 0 : 1;
}
