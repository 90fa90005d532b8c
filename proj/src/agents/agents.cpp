#include "aimac/agents/agents.hpp"

#include <algorithm>
#include <cmath>

namespace aimac::agents
{

namespace
{
double capped(double v, double scale, double cap = 1.0)
{
    return std::clamp(v / scale, 0.0, cap);
}
} // namespace

std::array<double, learn::kCaFeatures> CaObservation::features() const
{
    return {static_cast<double>(busy),
            capped(n_observed, 32.0),
            capped(delay_self_us, 100000.0),
            capped(delay_intf_us, 100000.0),
            capped(waited_slots, 64.0, 4.0),
            capped(qos.delay_ms, 30.0, 4.0),
            capped(qos.jitter_ms, 10.0, 4.0),
            std::clamp(qos.loss, 0.0, 1.0),
            std::clamp(episode_fraction, 0.0, 1.0)};
}

std::array<double, learn::kRcFeatures> RcObservation::features() const
{
    return {std::clamp(recent_snr_db / 40.0, -1.0, 2.0), std::clamp(succ_ratio, 0.0, 1.0),
            capped(queue_age_us, 30000.0, 4.0)};
}

CaObservation ca_trigger(const CaTriggerInputs& in)
{
    CaObservation o;
    o.busy = in.busy_since_last_trigger ? 1 : 0;
    o.n_observed = in.n_observed;
    o.delay_self_us = static_cast<double>((in.now - in.last_self_success.value_or(sim::SimTime{0})).micros);
    o.delay_intf_us = static_cast<double>((in.now - in.last_intf_success.value_or(sim::SimTime{0})).micros);
    o.waited_slots = in.waited_slots;
    o.qos = in.qos;
    o.episode_fraction = in.episode_fraction;
    return o;
}

std::vector<double> ObservationStack::push(std::span<const double> features)
{
    auto out = peek(features);
    history_.emplace_front(features.begin(), features.end());
    while (history_.size() > depth_ - 1)
    {
        history_.pop_back();
    }
    return out;
}

std::vector<double> ObservationStack::peek(std::span<const double> features) const
{
    std::vector<double> out(dim_ * depth_, 0.0);
    std::copy_n(features.begin(), std::min(dim_, features.size()), out.begin());
    std::size_t slot = 1;
    for (const auto& h : history_)
    {
        if (slot >= depth_)
            break;
        std::copy_n(h.begin(), std::min(dim_, h.size()), out.begin() + static_cast<std::ptrdiff_t>(slot * dim_));
        ++slot;
    }
    return out;
}

int epsilon_greedy(std::span<const double> q, double epsilon, sim::RngStream& stream, int tie_action)
{
    if (q.empty())
    {
        throw learn::DimensionError("epsilon_greedy over an empty action set");
    }
    if (stream.next_uniform() < epsilon)
    {
        return static_cast<int>(stream.next_below_inclusive(q.size() - 1));
    }
    const double best = *std::max_element(q.begin(), q.end());
    if (tie_action >= 0 && static_cast<std::size_t>(tie_action) < q.size() &&
        q[static_cast<std::size_t>(tie_action)] == best)
    {
        return tie_action;
    }
    return static_cast<int>(std::find(q.begin(), q.end(), best) - q.begin());
}

AgentNet ca_net(const learn::QmixModel& model)
{
    return AgentNet{&model.ca(), model.params().values()};
}

AgentNet rc_net(const learn::QmixModel& model)
{
    return AgentNet{&model.rc(), model.params().values()};
}

CaAction ca_act(std::span<const double> stacked_obs, const AgentNet& net, double epsilon, sim::RngStream& stream)
{
    const auto q = learn::qnet_forward(*net.layout, net.params, stacked_obs);
    return static_cast<CaAction>(epsilon_greedy(q, epsilon, stream, static_cast<int>(CaAction::Wait)));
}

int rc_trigger_and_act(std::span<const double> stacked_obs, const AgentNet& net, double epsilon,
                       sim::RngStream& stream)
{
    const auto q = learn::qnet_forward(*net.layout, net.params, stacked_obs);
    return epsilon_greedy(q, epsilon, stream, -1);
}

std::optional<Experience> DeviceAgent::ingest(const Upload& upload, const qos::GlobalState& state, double r_state,
                                              std::span<const double> rc_obs_now)
{
    if (upload.agent == AgentId::Rc)
    {
        latest_rc_ = upload;
        return std::nullopt;
    }

    std::optional<Experience> out;
    if (!latest_rc_)
    {
        ++warmup_skips_;
    }
    else if (pending_)
    {
        Experience e;
        e.global_state = pending_->state;
        e.ca_obs = pending_->ca_obs;
        e.a_ca = pending_->a_ca;
        e.rc_obs = latest_rc_->observation;
        e.a_rc = latest_rc_->action;
        e.t = upload.t_i;
        e.r_state = r_state;
        e.ca_term = qos::AgentReward{upload.t_i, upload.r_local};
        e.rc_term = qos::AgentReward{latest_rc_->t_i, latest_rc_->r_local};
        e.gamma = gamma_;
        const std::optional<qos::AgentReward> terms[2] = {e.ca_term, e.rc_term};
        e.r_tot = qos::total_reward(r_state, terms, upload.t_i, gamma_);
        e.next_global_state = state;
        e.next_ca_obs = upload.observation;
        e.next_rc_obs.assign(rc_obs_now.begin(), rc_obs_now.end());
        e.done = false;
        ++emitted_;
        out = std::move(e);
    }
    latest_ca_ = upload;
    pending_ = Pending{state, upload.observation, upload.action};
    return out;
}

} // namespace aimac::agents
