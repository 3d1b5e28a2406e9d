#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace lorasim {

class UnsupportedAirtime : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr int kMinSf = 7;
inline constexpr int kMaxSf = 12;
inline constexpr unsigned kTabulatedPayload = 50;

// Measured time on air of a 50-byte frame for the module's LoRa variant.
// Looked up, not computed: the standard LoRa airtime formula does not
// reproduce these values.
std::int64_t time_on_air_ms(double bandwidth_khz, int sf, unsigned payload_bytes);

bool is_tabulated_bandwidth(double bandwidth_khz);

// Duration of the LoRa preamble (8 + 4.25 symbols by default).
double preamble_ms(double bandwidth_khz, int sf, double symbols = 12.25);

// Coupling between two channels as a function of their index distance:
// g(0) = 1, g(d) for 1 <= d <= radius, 0 beyond.
class InterferenceKernel {
public:
    InterferenceKernel() : InterferenceKernel(2, 0.8, 0.33) {}
    InterferenceKernel(unsigned radius, double g1, double g2);
    explicit InterferenceKernel(std::vector<double> coupling);

    double coupling(int ch_a, int ch_b) const;
    unsigned radius() const { return static_cast<unsigned>(coupling_.size() - 1); }
    const std::vector<double>& table() const { return coupling_; }

private:
    std::vector<double> coupling_;
};

}  // namespace lorasim
