#include <cmath>
#include <vector>

#include "doctest.h"
#include "lorasim/metrics.hpp"
#include "lorasim/rng.hpp"

using namespace lorasim;

namespace {

std::optional<double> jain(std::vector<double> v) { return fairness(std::span<const double>(v)); }

DecisionRecord at(TimeMs t, int ch) { return DecisionRecord{t, ch, 7, true}; }

}  // namespace

TEST_CASE("fsr examples") {
    CHECK(fsr(8, 10) == doctest::Approx(0.8));
    CHECK_FALSE(fsr(0, 0).has_value());
    for (std::uint64_t n : {1u, 7u, 1000u}) CHECK(fsr(n, n) == 1.0);
}

TEST_CASE("fairness examples") {
    const auto table_row = jain({1902, 998, 2045});
    REQUIRE(table_row.has_value());
    // (4945)^2 / (3 * (1902^2 + 998^2 + 2045^2))
    const double expected = 4945.0 * 4945.0 / (3.0 * (1902.0 * 1902 + 998.0 * 998 + 2045.0 * 2045));
    CHECK(*table_row == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::abs(*table_row - 0.9267) <= 0.0005);
    CHECK(jain({100, 100, 100}) == doctest::Approx(1.0));
    CHECK(jain({1, 0, 0}) == doctest::Approx(1.0 / 3.0));
    CHECK_FALSE(jain({0, 0, 0}).has_value());
    std::vector<std::uint64_t> ints{1902, 998, 2045};
    CHECK(fairness(std::span<const std::uint64_t>(ints)) == table_row);
}

TEST_CASE("fairness properties") {
    Rng rng(9);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + uniform_index(rng, 8);
        std::vector<double> v(n);
        for (auto& x : v) x = static_cast<double>(uniform_index(rng, 50));
        v[uniform_index(rng, n)] += 1.0;
        const double c = 0.01 + uniform01(rng) * 100.0;
        std::vector<double> scaled(v);
        for (auto& x : scaled) x *= c;
        const double f = *jain(v);
        CHECK(*jain(scaled) == doctest::Approx(f).epsilon(1e-12));
        CHECK(f >= 1.0 / static_cast<double>(n) - 1e-12);
        CHECK(f <= 1.0 + 1e-12);
    }
}

TEST_CASE("record fairness covers every gateway channel") {
    MetricsRecord r;
    r.fairness_channels = {1, 3, 5};
    r.received_per_channel = {{1, 10}};
    CHECK(r.channel_counts() == std::vector<std::uint64_t>{10, 0, 0});
    CHECK(r.fairness() == doctest::Approx(1.0 / 3.0));
    MetricsRecord empty;
    empty.fairness_channels = {1, 3};
    CHECK_FALSE(empty.fairness().has_value());
    CHECK_FALSE(empty.fsr().has_value());
    CHECK_FALSE(empty.mean_switch_latency().has_value());
}

TEST_CASE("switch latency examples") {
    const std::vector<AvailabilityWindow> schedule{
        {0, 100, {1, 3, 5}},
        {100, 200, {1, 3}},
    };
    SUBCASE("already compliant") {
        std::vector<std::vector<DecisionRecord>> logs{{at(10, 1), at(110, 1), at(120, 1), at(130, 3),
                                                       at(140, 1), at(150, 1), at(160, 1)}};
        const auto out = switch_latency(logs, schedule);
        REQUIRE(out.size() == 1);
        CHECK(out[0].device == 1);
        CHECK(out[0].change_ms == 100);
        CHECK(out[0].decisions == 0);
        CHECK_FALSE(out[0].censored);
    }
    SUBCASE("switches on the third decision") {
        std::vector<std::vector<DecisionRecord>> logs{{at(50, 5), at(110, 5), at(120, 5), at(130, 5),
                                                       at(140, 1), at(150, 3), at(160, 1), at(170, 1),
                                                       at(180, 3), at(190, 5)}};
        const auto out = switch_latency(logs, schedule);
        REQUIRE(out.size() == 1);
        CHECK(out[0].decisions == 3);
        CHECK_FALSE(out[0].censored);
    }
    SUBCASE("never switches") {
        std::vector<std::vector<DecisionRecord>> logs{{at(110, 5), at(120, 5), at(130, 5), at(140, 5)}};
        const auto out = switch_latency(logs, schedule);
        REQUIRE(out.size() == 1);
        CHECK(out[0].decisions == 4);
        CHECK(out[0].censored);
    }
    SUBCASE("short compliant tail at the window end") {
        std::vector<std::vector<DecisionRecord>> logs{{at(110, 5), at(120, 5), at(180, 1), at(190, 3)}};
        const auto out = switch_latency(logs, schedule);
        REQUIRE(out.size() == 1);
        CHECK(out[0].decisions == 2);
        CHECK_FALSE(out[0].censored);
    }
    SUBCASE("unchanged windows report nothing") {
        const std::vector<AvailabilityWindow> flat{{0, 100, {1}}, {100, 200, {1}}};
        std::vector<std::vector<DecisionRecord>> logs{{at(10, 1), at(110, 1)}};
        CHECK(switch_latency(logs, flat).empty());
    }
}

TEST_CASE("describe and aggregate") {
    const std::vector<double> two{0.7, 0.8};
    const Stat s = describe(two);
    CHECK(s.mean == doctest::Approx(0.75));
    CHECK(s.stddev == doctest::Approx(std::sqrt(0.005)));
    CHECK(s.stddev == doctest::Approx(0.0707).epsilon(1e-3));
    CHECK(s.ci95 == doctest::Approx(1.959963984540054 * s.stddev / std::sqrt(2.0)));
    CHECK(s.n == 2);

    MetricsRecord r;
    r.attempts = 10;
    r.successes = 7;
    r.fairness_channels = {1, 2};
    r.received_per_channel = {{1, 4}, {2, 3}};
    const std::vector<MetricsRecord> same{r, r, r};
    const auto agg = aggregate_trials(same);
    REQUIRE(agg.fsr.has_value());
    CHECK(agg.fsr->stddev == 0.0);
    CHECK(agg.fsr->ci95 == 0.0);
    CHECK(agg.fsr->mean == doctest::Approx(0.7));
    CHECK_FALSE(agg.mean_switch_latency.has_value());
    CHECK(aggregate_trials(same) == agg);
}
