#include "lorasim/airtime.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <string>

namespace lorasim {

namespace {

struct Row {
    double bandwidth_khz;
    std::array<std::int64_t, 6> ms;  // SF7..SF12
};

constexpr std::array<Row, 4> kTable{{
    {62.5, {308, 543, 903, 1642, 2957, 5587}},
    {125.0, {154, 267, 452, 821, 1479, 2793}},
    {250.0, {77, 133, 226, 411, 739, 1397}},
    {500.0, {38, 67, 113, 205, 370, 698}},
}};

const Row* find_row(double bandwidth_khz) {
    for (const auto& row : kTable) {
        if (row.bandwidth_khz == bandwidth_khz) return &row;
    }
    return nullptr;
}

}  // namespace

bool is_tabulated_bandwidth(double bandwidth_khz) { return find_row(bandwidth_khz) != nullptr; }

std::int64_t time_on_air_ms(double bandwidth_khz, int sf, unsigned payload_bytes) {
    const Row* row = find_row(bandwidth_khz);
    if (row == nullptr) {
        throw UnsupportedAirtime("unsupported bandwidth " + std::to_string(bandwidth_khz) +
                                 " kHz (expected 62.5, 125, 250 or 500)");
    }
    if (sf < kMinSf || sf > kMaxSf) {
        throw UnsupportedAirtime("unsupported SF " + std::to_string(sf) + " (expected 7..12)");
    }
    if (payload_bytes != kTabulatedPayload) {
        throw UnsupportedAirtime("unsupported payload " + std::to_string(payload_bytes) +
                                 " B (only 50 B is tabulated)");
    }
    return row->ms[static_cast<std::size_t>(sf - kMinSf)];
}

double preamble_ms(double bandwidth_khz, int sf, double symbols) {
    return symbols * std::ldexp(1.0, sf) / bandwidth_khz;
}

namespace {

std::vector<double> short_table(unsigned radius, double g1, double g2) {
    if (radius > 2) throw std::invalid_argument("kernel radius above 2 needs an explicit table");
    std::vector<double> table{1.0, g1, g2};
    table.resize(radius + 1);
    return table;
}

}  // namespace

InterferenceKernel::InterferenceKernel(unsigned radius, double g1, double g2)
    : InterferenceKernel(short_table(radius, g1, g2)) {}

InterferenceKernel::InterferenceKernel(std::vector<double> coupling) : coupling_(std::move(coupling)) {
    if (coupling_.empty() || coupling_.front() != 1.0) {
        throw std::invalid_argument("kernel must start with g(0) = 1");
    }
    for (std::size_t d = 1; d < coupling_.size(); ++d) {
        if (coupling_[d] < 0.0 || coupling_[d] > coupling_[d - 1]) {
            throw std::invalid_argument("kernel must be non-increasing in [0, 1]");
        }
    }
}

double InterferenceKernel::coupling(int ch_a, int ch_b) const {
    const auto d = static_cast<std::size_t>(std::abs(ch_a - ch_b));
    return d < coupling_.size() ? coupling_[d] : 0.0;
}

}  // namespace lorasim
