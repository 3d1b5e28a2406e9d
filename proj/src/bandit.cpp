#include "lorasim/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lorasim {

namespace {

void check_arm(std::size_t chosen, std::size_t arms) {
    if (chosen >= arms) {
        throw ArmIndexError("arm index " + std::to_string(chosen) + " outside 0.." +
                            std::to_string(arms - 1));
    }
}

// Uniform choice among the indices whose value equals the maximum.
template <typename Values>
std::size_t argmax_random_ties(const Values& values, Rng& rng) {
    auto best = *std::max_element(values.begin(), values.end());
    std::vector<std::size_t> ties;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (values[k] == best) ties.push_back(k);
    }
    return ties.size() == 1 ? ties.front() : ties[uniform_index(rng, ties.size())];
}

}  // namespace

std::string_view policy_name(Policy p) {
    switch (p) {
        case Policy::Tow: return "tow";
        case Policy::Ucb1Tuned: return "ucb1tuned";
        case Policy::EpsilonGreedy: return "egreedy";
        case Policy::Random: return "random";
    }
    return "unknown";
}

std::optional<Policy> parse_policy(std::string_view name) {
    for (auto p : {Policy::Tow, Policy::Ucb1Tuned, Policy::EpsilonGreedy, Policy::Random}) {
        if (policy_name(p) == name) return p;
    }
    return std::nullopt;
}

double oscillation(std::size_t arm, std::uint64_t t, std::size_t arms, double amplitude) {
    // Reduce the phase first so large t keeps full precision.
    const auto phase = static_cast<double>((t + arm) % arms);
    return amplitude * std::cos(2.0 * std::numbers::pi * phase / static_cast<double>(arms));
}

// ---------------------------------------------------------------------------

TowState::TowState(std::size_t arms, TowParams params) : arms_(arms), params_(params) {
    if (arms == 0) throw std::invalid_argument("TowState needs at least one arm");
}

double TowState::score(std::size_t arm) const {
    const std::size_t d = arms_.size();
    if (d == 1) return arms_[0].q + oscillation(0, t_, 1, params_.amplitude);
    double others = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        if (k != arm) others += arms_[k].q;
    }
    return arms_[arm].q - others / static_cast<double>(d - 1) +
           oscillation(arm, t_, d, params_.amplitude);
}

std::size_t TowState::select(Rng& rng) const {
    const std::size_t d = arms_.size();
    if (d == 1) return 0;
    // X_k = Q_k - (S - Q_k)/(D-1) + osc_k, one pass for S.
    double total = 0.0;
    for (const auto& a : arms_) total += a.q;
    std::vector<double> x(d);
    for (std::size_t k = 0; k < d; ++k) {
        x[k] = arms_[k].q - (total - arms_[k].q) / static_cast<double>(d - 1) +
               oscillation(k, t_, d, params_.amplitude);
    }
    visits_ += 2 * d;
    return argmax_random_ties(x, rng);
}

double TowState::omega() const {
    double first = 0.0;
    double second = 0.0;
    bool have_first = false;
    for (const auto& a : arms_) {
        const double p = a.n > 0.0 ? a.r / a.n : 0.0;
        if (!have_first || p > first) {
            if (have_first) second = first;
            first = p;
            have_first = true;
        } else if (p > second) {
            second = p;
        }
    }
    visits_ += arms_.size();
    if (arms_.size() < 2) second = 0.0;
    const double denom = 2.0 - first - second;
    if (denom < 1e-9) return params_.omega_max;
    return std::clamp((first + second) / denom, 0.0, params_.omega_max);
}

void TowState::feedback(std::size_t chosen, bool success) {
    check_arm(chosen, arms_.size());
    for (std::size_t k = 0; k < arms_.size(); ++k) {
        auto& a = arms_[k];
        a.n *= params_.beta;
        a.r *= params_.beta;
        if (k == chosen) {
            a.n += 1.0;
            if (success) a.r += 1.0;
        }
    }
    visits_ += arms_.size();
    const double delta = success ? 1.0 : -omega();
    for (auto& a : arms_) a.q *= params_.alpha;
    visits_ += arms_.size();
    arms_[chosen].q += delta;
    ++t_;
}

// ---------------------------------------------------------------------------

double BaselineArm::mean() const {
    return pulls == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(pulls);
}

double BaselineArm::variance() const {
    if (pulls == 0) return 0.0;
    const double m = mean();
    return std::max(0.0, sum_sq / static_cast<double>(pulls) - m * m);
}

BaselineState::BaselineState(std::size_t arms, double epsilon) : arms_(arms), epsilon_(epsilon) {
    if (arms == 0) throw std::invalid_argument("BaselineState needs at least one arm");
}

void BaselineState::feedback(std::size_t chosen, bool success) {
    check_arm(chosen, arms_.size());
    auto& a = arms_[chosen];
    ++a.pulls;
    if (success) {
        ++a.successes;
        a.sum_sq += 1.0;
    }
    ++visits_;
    ++t_;
}

double ucb1_tuned_index(const BaselineArm& arm, std::uint64_t decision) {
    const double n = static_cast<double>(arm.pulls);
    const double log_t = std::log(static_cast<double>(decision));
    const double v = arm.variance() + std::sqrt(2.0 * log_t / n);
    return arm.mean() + std::sqrt(log_t / n * std::min(0.25, v));
}

std::size_t ucb1_tuned_select(const BaselineState& state) {
    const auto& arms = state.arms();
    state.count_visits(arms.size());
    for (std::size_t k = 0; k < arms.size(); ++k) {
        if (arms[k].pulls == 0) return k;
    }
    const std::uint64_t decision = state.decisions() + 1;
    std::size_t best = 0;
    double best_index = ucb1_tuned_index(arms[0], decision);
    for (std::size_t k = 1; k < arms.size(); ++k) {
        const double idx = ucb1_tuned_index(arms[k], decision);
        if (idx > best_index) {
            best = k;
            best_index = idx;
        }
    }
    state.count_visits(arms.size());
    return best;
}

std::size_t epsilon_greedy_select(const BaselineState& state, Rng& rng) {
    const double draw = uniform01(rng);
    return epsilon_greedy_select(state, draw, rng);
}

std::size_t epsilon_greedy_select(const BaselineState& state, double draw, Rng& rng) {
    const auto& arms = state.arms();
    if (draw < state.epsilon()) return uniform_index(rng, arms.size());
    std::vector<double> rate(arms.size());
    for (std::size_t k = 0; k < arms.size(); ++k) rate[k] = arms[k].mean();
    state.count_visits(2 * arms.size());
    return argmax_random_ties(rate, rng);
}

std::size_t random_select(std::size_t arms, Rng& rng) { return uniform_index(rng, arms); }

// ---------------------------------------------------------------------------

namespace {

ArmState make_state(Policy policy, std::size_t arms, const PolicyParams& params) {
    if (policy == Policy::Tow) return TowState(arms, params.tow);
    return BaselineState(arms, params.epsilon);
}

std::uint64_t decisions_of(const ArmState& s) {
    return std::visit([](const auto& st) { return st.decisions(); }, s);
}

std::size_t arm_count(const ArmState& s) {
    return std::visit([](const auto& st) { return st.arms().size(); }, s);
}

std::size_t select_one(Policy policy, const ArmState& s, Rng& rng) {
    if (decisions_of(s) == 0) return random_select(arm_count(s), rng);
    switch (policy) {
        case Policy::Tow: return std::get<TowState>(s).select(rng);
        case Policy::Ucb1Tuned: return ucb1_tuned_select(std::get<BaselineState>(s));
        case Policy::EpsilonGreedy: return epsilon_greedy_select(std::get<BaselineState>(s), rng);
        case Policy::Random: return random_select(arm_count(s), rng);
    }
    return 0;
}

}  // namespace

JointSelector::JointSelector(Policy policy, std::size_t channels, std::size_t sfs,
                             PolicyParams params)
    : policy_(policy),
      channel_(make_state(policy, channels, params)),
      sf_(make_state(policy, sfs, params)) {}

ArmPair JointSelector::decide(Rng& rng) const {
    ArmPair pair;
    pair.channel = select_one(policy_, channel_, rng);
    pair.sf = select_one(policy_, sf_, rng);
    return pair;
}

void JointSelector::feedback(ArmPair chosen, bool success) {
    std::visit([&](auto& st) { st.feedback(chosen.channel, success); }, channel_);
    std::visit([&](auto& st) { st.feedback(chosen.sf, success); }, sf_);
}

std::size_t JointSelector::stored_scalars() const {
    // TowArm carries (q, n, r); BaselineArm carries (pulls, successes, sum_sq).
    return 3 * (arm_count(channel_) + arm_count(sf_));
}

std::uint64_t JointSelector::arm_visits() const {
    auto visits = [](const ArmState& s) {
        return std::visit([](const auto& st) { return st.arm_visits(); }, s);
    };
    return visits(channel_) + visits(sf_);
}

}  // namespace lorasim
