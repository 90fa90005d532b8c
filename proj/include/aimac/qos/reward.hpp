#pragma once

#include "aimac/qos/features.hpp"
#include "aimac/sim/time.hpp"

#include <array>
#include <optional>
#include <span>

namespace aimac::qos
{

/// Reward shaping constants. All of them are hyperparameters.
struct RewardConfig
{
    std::array<double, 3> violation_weights{0.5, 0.25, 0.25}; ///< delay, jitter, loss
    double channel_weight = 0.0;                              ///< weight of utilization in the state reward
    double success_reward = 1.0;
    double timeout_penalty = -1.0;
    double idle_penalty_per_slot = 0.01;
    int idle_threshold_slots = 64;
    double fairness_weight = 0.5;
    double gamma = 0.9; ///< per-millisecond staleness discount for agent rewards
};

/// f: 1 - 2 * (weighted violations + channel_weight * utilization), clamped to [-1, 1].
double state_reward(const ServiceFeatures& sf, const ChannelFeatures& cf, const RewardConfig& cfg = {});

/// Jain's index (sum x)^2 / (n * sum x^2); 1 for an empty or all-zero set.
double jain_index(std::span<const double> shares);

enum class CaOutcome
{
    Success,
    AckTimeout,
    Waited,
};

/// Channel-access local reward: transmission term plus weighted fairness term,
/// where fairness is Jain's index of the airtime shares mapped to 2J - 1.
double ca_local_reward(CaOutcome outcome, int waited_slots, std::span<const double> airtime_shares,
                       const RewardConfig& cfg = {});

/// Rate-control local reward: 2 * succ_ratio - 1.
double rc_local_reward(double succ_ratio);

/// One agent's latest contribution to the total reward.
struct AgentReward
{
    sim::SimTime t_i;
    double reward = 0.0;
};

/// r_state + sum_i gamma^(t - t_i) * r_i with the lag in milliseconds. Agents
/// without an upload yet (nullopt) contribute nothing.
double total_reward(double r_state, std::span<const std::optional<AgentReward>> agents, sim::SimTime t, double gamma);

/// Fixed-length global state fed to the mixing network.
struct GlobalState
{
    static constexpr std::size_t kDim = 12;
    std::array<double, kDim> values{};
};

struct GlobalStateInputs
{
    ServiceFeatures service;
    ChannelFeatures channel;
    int last_ca_action = -1; ///< 0 transmit, 1 wait, -1 none yet
    int last_rc_mcs = -1;    ///< -1 none yet
    int max_mcs = 11;
    double episode_fraction = 0.0;
    double queue_fill = 0.0;
    double succ_ratio = 1.0;
};

/// Layout: v_delay, v_jitter, v_loss, utilization, mgmt_fraction, n_active/32
/// (capped), transmit one-hot, wait one-hot, mcs/max_mcs, episode fraction,
/// queue fill, last success ratio. Every entry lies in [0, 1].
GlobalState make_global_state(const GlobalStateInputs& in);

} // namespace aimac::qos
