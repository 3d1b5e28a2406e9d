#pragma once

// Decentralized arm-selection policies for one LoRa device.
//
// Arm indices are zero-based in this API. Reports convert them to the
// channel numbers and SF values the arms stand for.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "lorasim/rng.hpp"

namespace lorasim {

class ArmIndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

enum class Policy { Tow, Ucb1Tuned, EpsilonGreedy, Random };

std::string_view policy_name(Policy p);
std::optional<Policy> parse_policy(std::string_view name);

// ---------------------------------------------------------------------------
// Tug-of-war dynamics

struct TowParams {
    double alpha = 0.9;      // discount applied to every Q each decision
    double beta = 0.9;       // forgetting factor for N and R
    double amplitude = 0.5;  // oscillation amplitude
    double omega_max = 1e6;  // clamp for the failure penalty
};

struct TowArm {
    double q = 0.0;
    double n = 0.0;  // discounted pull count
    double r = 0.0;  // discounted success count
};

// Phase-shifted oscillation added to arm `arm` at decision `t` over `arms`
// arms: amplitude * cos(2*pi*(t + arm) / arms).
double oscillation(std::size_t arm, std::uint64_t t, std::size_t arms, double amplitude);

class TowState {
public:
    TowState(std::size_t arms, TowParams params);

    // Argmax of score(); ties broken uniformly with `rng`.
    std::size_t select(Rng& rng) const;

    // Q_k - mean of the other Q values + oscillation(k, t).
    double score(std::size_t arm) const;

    // (p1 + p2) / (2 - p1 - p2) for the two best empirical success rates,
    // clamped to [0, omega_max].
    double omega() const;

    void feedback(std::size_t chosen, bool success);

    const std::vector<TowArm>& arms() const { return arms_; }
    std::vector<TowArm>& mutable_arms() { return arms_; }
    const TowParams& params() const { return params_; }
    std::uint64_t decisions() const { return t_; }
    void set_decisions(std::uint64_t t) { t_ = t; }

    // Arm visits performed by select/feedback, for cost accounting.
    std::uint64_t arm_visits() const { return visits_; }

private:
    std::vector<TowArm> arms_;
    TowParams params_;
    std::uint64_t t_ = 0;
    mutable std::uint64_t visits_ = 0;
};

// ---------------------------------------------------------------------------
// Sample-mean baselines (UCB1-tuned, epsilon-greedy, random)

struct BaselineArm {
    std::uint64_t pulls = 0;
    std::uint64_t successes = 0;
    double sum_sq = 0.0;  // sum of squared rewards

    double mean() const;
    // Population variance of the observed {0,1} rewards.
    double variance() const;
};

class BaselineState {
public:
    explicit BaselineState(std::size_t arms, double epsilon = 0.1);

    void feedback(std::size_t chosen, bool success);

    const std::vector<BaselineArm>& arms() const { return arms_; }
    std::vector<BaselineArm>& mutable_arms() { return arms_; }
    std::uint64_t decisions() const { return t_; }
    void set_decisions(std::uint64_t t) { t_ = t; }
    double epsilon() const { return epsilon_; }

    std::uint64_t arm_visits() const { return visits_; }
    void count_visits(std::uint64_t n) const { visits_ += n; }

private:
    std::vector<BaselineArm> arms_;
    std::uint64_t t_ = 0;
    double epsilon_;
    mutable std::uint64_t visits_ = 0;
};

// Unpulled arms first (lowest index); otherwise the tuned upper confidence
// bound with ln of the 1-based decision number. Ties go to the lowest index.
std::size_t ucb1_tuned_select(const BaselineState& state);
double ucb1_tuned_index(const BaselineArm& arm, std::uint64_t decision);

std::size_t epsilon_greedy_select(const BaselineState& state, Rng& rng);
// Same rule with the explore/exploit draw supplied by the caller.
std::size_t epsilon_greedy_select(const BaselineState& state, double draw, Rng& rng);

std::size_t random_select(std::size_t arms, Rng& rng);

// ---------------------------------------------------------------------------

struct PolicyParams {
    TowParams tow;
    double epsilon = 0.1;
};

using ArmState = std::variant<TowState, BaselineState>;

// Chosen arms, one per decision dimension.
struct ArmPair {
    std::size_t channel = 0;
    std::size_t sf = 0;
    bool operator==(const ArmPair&) const = default;
};

// Two independent bandits, one over channels and one over spreading factors,
// driven by the same success signal.
class JointSelector {
public:
    JointSelector(Policy policy, std::size_t channels, std::size_t sfs, PolicyParams params = {});

    ArmPair decide(Rng& rng) const;
    void feedback(ArmPair chosen, bool success);

    Policy policy() const { return policy_; }
    const ArmState& channel_state() const { return channel_; }
    const ArmState& sf_state() const { return sf_; }
    ArmState& channel_state() { return channel_; }
    ArmState& sf_state() { return sf_; }

    // Per-arm scalars held across both dimensions.
    std::size_t stored_scalars() const;
    std::uint64_t arm_visits() const;

private:
    Policy policy_;
    ArmState channel_;
    ArmState sf_;
};

}  // namespace lorasim
