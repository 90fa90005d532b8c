#include "aimac/qos/reward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aimac::qos
{

double state_reward(const ServiceFeatures& sf, const ChannelFeatures& cf, const RewardConfig& cfg)
{
    const auto& w = cfg.violation_weights;
    const double penalty =
        w[0] * sf.v_delay + w[1] * sf.v_jitter + w[2] * sf.v_loss + cfg.channel_weight * cf.utilization;
    return std::clamp(1.0 - 2.0 * penalty, -1.0, 1.0);
}

double jain_index(std::span<const double> shares)
{
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double x : shares)
    {
        sum += x;
        sum_sq += x * x;
    }
    if (shares.empty() || sum_sq <= 0.0)
    {
        return 1.0;
    }
    return (sum * sum) / (static_cast<double>(shares.size()) * sum_sq);
}

double ca_local_reward(CaOutcome outcome, int waited_slots, std::span<const double> airtime_shares,
                       const RewardConfig& cfg)
{
    double r_tx = 0.0;
    switch (outcome)
    {
    case CaOutcome::Success:
        r_tx = cfg.success_reward;
        break;
    case CaOutcome::AckTimeout:
        r_tx = cfg.timeout_penalty;
        break;
    case CaOutcome::Waited:
        r_tx = -cfg.idle_penalty_per_slot * std::max(0, waited_slots - cfg.idle_threshold_slots);
        break;
    }
    const double r_fair = 2.0 * jain_index(airtime_shares) - 1.0;
    return r_tx + cfg.fairness_weight * r_fair;
}

double rc_local_reward(double succ_ratio)
{
    if (!(succ_ratio >= 0.0 && succ_ratio <= 1.0))
    {
        throw std::invalid_argument("succ_ratio must lie in [0, 1]");
    }
    return 2.0 * succ_ratio - 1.0;
}

double total_reward(double r_state, std::span<const std::optional<AgentReward>> agents, sim::SimTime t, double gamma)
{
    if (!(gamma > 0.0 && gamma <= 1.0))
    {
        throw std::invalid_argument("gamma must lie in (0, 1]");
    }
    double total = r_state;
    for (const auto& a : agents)
    {
        if (!a)
            continue;
        if (a->t_i > t)
        {
            throw std::invalid_argument("agent upload time is in the future");
        }
        const double lag_ms = (t - a->t_i).as_ms();
        total += std::pow(gamma, lag_ms) * a->reward;
    }
    return total;
}

GlobalState make_global_state(const GlobalStateInputs& in)
{
    GlobalState g;
    auto& v = g.values;
    v[0] = in.service.v_delay;
    v[1] = in.service.v_jitter;
    v[2] = in.service.v_loss;
    v[3] = in.channel.utilization;
    v[4] = in.channel.mgmt_fraction;
    v[5] = std::min(1.0, in.channel.n_active / 32.0);
    v[6] = in.last_ca_action == 0 ? 1.0 : 0.0;
    v[7] = in.last_ca_action == 1 ? 1.0 : 0.0;
    v[8] = in.last_rc_mcs >= 0 && in.max_mcs > 0 ? static_cast<double>(in.last_rc_mcs) / in.max_mcs : 0.0;
    v[9] = std::clamp(in.episode_fraction, 0.0, 1.0);
    v[10] = std::clamp(in.queue_fill, 0.0, 1.0);
    v[11] = std::clamp(in.succ_ratio, 0.0, 1.0);
    return g;
}

} // namespace aimac::qos
