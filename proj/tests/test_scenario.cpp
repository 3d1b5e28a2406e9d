#include <algorithm>
#include <string>

#include "doctest.h"
#include "lorasim/scenario.hpp"

using namespace lorasim;

namespace {

constexpr const char* kMinimal = R"({
  "devices": [{"count": 4, "channels": [1, 3, 5]}],
  "gateway": {"channels": [1, 3, 5]},
  "horizon": {"wall_ms": 600000}
})";

std::vector<std::string> problems_of(const std::string& text) {
    try {
        (void)load_config_text(text);
    } catch (const ConfigError& e) {
        return e.problems();
    }
    return {};
}

bool mentions(const std::vector<std::string>& problems, const std::string& needle) {
    return std::any_of(problems.begin(), problems.end(),
                       [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("minimal config takes defaults") {
    const auto cfg = load_config_text(kMinimal);
    CHECK(cfg.policy.kind == Policy::Tow);
    CHECK(cfg.policy.alpha == 0.9);
    CHECK(cfg.policy.beta == 0.9);
    CHECK(cfg.policy.amp == 0.5);
    CHECK(cfg.policy.epsilon == 0.1);
    CHECK(cfg.device_count() == 4);
    CHECK(cfg.devices[0].tr == 3);
    CHECK(cfg.devices[0].ti_ms == 10'000);
    CHECK(cfg.bandwidth_khz == 125.0);
    CHECK(cfg.mac.cca == CcaMode::Energy);
    CHECK(cfg.interference.g1 == 0.8);
    CHECK(cfg.interference.g2 == 0.33);
    CHECK(cfg.demodulators().size() == 3);
    REQUIRE(cfg.availability().size() == 1);
    CHECK(cfg.availability()[0].channels == std::vector<int>{1, 3, 5});
}

TEST_CASE("invalid values are named") {
    std::string text = kMinimal;
    text.insert(text.rfind('}'), R"(, "policy": {"epsilon": 1.5})");
    CHECK(mentions(problems_of(text), "policy.epsilon"));

    CHECK(mentions(problems_of(R"({"devices": [{"channels": []}], "gateway": {"channels": [1]},
                                  "horizon": {"wall_ms": 1}})"),
                   "devices[0].channels"));
}

TEST_CASE("parse errors carry a position") {
    const auto p = problems_of("{\n  \"devices\": [\n  oops\n}");
    REQUIRE(p.size() == 1);
    CHECK(p[0].find("line 3") != std::string::npos);
    CHECK(p[0].find("column") != std::string::npos);
}

TEST_CASE("unknown keys are rejected") {
    std::string text = kMinimal;
    text.insert(text.rfind('}'), R"(, "colour": "blue")");
    CHECK(mentions(problems_of(text), "colour"));
    std::string nested = kMinimal;
    nested.insert(nested.rfind('}'), R"(, "mac": {"ack_wait": 5})");
    CHECK(mentions(problems_of(nested), "mac.ack_wait"));
}

TEST_CASE("every violation is reported") {
    const auto p = problems_of(R"({
      "bandwidth_khz": 100,
      "devices": [{"channels": [1], "sfs": [13], "payload": 20}],
      "gateway": {"channels": [1]},
      "policy": {"alpha": 2, "beta": -1},
      "horizon": {"wall_ms": 1000}
    })");
    CHECK(p.size() >= 5);
    CHECK(mentions(p, "bandwidth_khz"));
    CHECK(mentions(p, "devices[0].sfs"));
    CHECK(mentions(p, "devices[0].payload"));
    CHECK(mentions(p, "policy.alpha"));
    CHECK(mentions(p, "policy.beta"));
}

TEST_CASE("horizon needs exactly one bound") {
    CHECK(mentions(problems_of(R"({"devices": [{"channels": [1]}], "gateway": {"channels": [1]},
                                  "horizon": {}})"),
                   "horizon"));
    CHECK(mentions(problems_of(R"({"devices": [{"channels": [1]}], "gateway": {"channels": [1]},
                                  "horizon": {"wall_ms": 5, "attempts": 3}})"),
                   "horizon"));
}

TEST_CASE("builtins validate and round trip") {
    const auto names = builtin_names();
    CHECK(names.size() == 11);
    for (const auto& name : names) {
        CAPTURE(name);
        const auto cfg = builtin(name);
        CHECK(validate(cfg).empty());
        const auto text = dump_config(cfg);
        const auto back = load_config_text(text);
        CHECK(back == cfg);
        CHECK(dump_config(back) == text);
    }
}

TEST_CASE("preset contents") {
    const auto dyn = builtin("ch-dynamic");
    const TimeMs minute15 = 15 * kMinute;
    const auto windows = dyn.availability();
    const auto it = std::find_if(windows.begin(), windows.end(), [&](const AvailabilityWindow& w) {
        return w.from_ms <= minute15 && minute15 < w.to_ms;
    });
    REQUIRE(it != windows.end());
    CHECK(it->channels == std::vector<int>{1, 3});
    CHECK(dyn.horizon_ms() == 40 * kMinute);

    const auto chsf = builtin("chsf-static");
    CHECK(chsf.devices[0].tr == 0);
    CHECK(chsf.devices[0].ti_ms == 20'000);
    CHECK(chsf.devices[0].sfs == std::vector<int>{7, 8, 9});

    const auto adj = builtin("adjacent-1");
    CHECK(adj.gateway.channels == std::vector<int>{2, 4, 6});
    CHECK(builtin("adjacent-2").gateway.channels == std::vector<int>{2, 5, 8});
    CHECK(builtin("chsf-wisun").wisun.has_value());
}

TEST_CASE("unknown preset lists the known ones") {
    try {
        (void)builtin("nope");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        CHECK(what.find("nope") != std::string::npos);
        CHECK(what.find("ch-static") != std::string::npos);
        CHECK(what.find("adjacent-wisun") != std::string::npos);
    }
}

TEST_CASE("chsf settings") {
    auto base = builtin("chsf-static");
    for (int setting = 1; setting <= 3; ++setting) {
        auto cfg = base;
        apply_chsf_setting(cfg, setting);
        REQUIRE(cfg.devices.size() == 1);
        CHECK(cfg.devices[0].sfs == std::vector<int>{6 + setting});
        CHECK(cfg.device_count() == 30);
    }
    auto mixed = base;
    apply_chsf_setting(mixed, 4);
    REQUIRE(mixed.devices.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(mixed.devices[i].count == 10);
        CHECK(mixed.devices[i].sfs == std::vector<int>{7 + i});
    }
    auto joint = mixed;
    apply_chsf_setting(joint, 5);
    REQUIRE(joint.devices.size() == 1);
    CHECK(joint.devices[0].sfs == std::vector<int>{7, 8, 9});
    CHECK(joint.device_count() == 30);
    CHECK_THROWS_AS(apply_chsf_setting(joint, 6), ConfigError);
}

TEST_CASE("device count resplits groups") {
    auto cfg = builtin("chsf-mixed");
    set_device_count(cfg, 7);
    CHECK(cfg.devices[0].count == 3);
    CHECK(cfg.devices[1].count == 2);
    CHECK(cfg.devices[2].count == 2);
    CHECK(cfg.device_count() == 7);
}
