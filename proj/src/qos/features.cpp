#include "aimac/qos/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace aimac::qos
{

void QosRequirement::validate() const
{
    if (!(delay_bound_ms > 0.0 && jitter_bound_ms > 0.0 && loss_bound > 0.0))
    {
        throw std::invalid_argument("QoS bounds must be positive");
    }
    for (double theta : decay_rates)
    {
        if (!(theta > 0.0))
        {
            throw std::invalid_argument("QoS decay rates must be positive");
        }
    }
}

ServiceFeatures extract_service_features(std::span<const DelaySample> delays, std::span<const sim::SimTime> losses,
                                         const QosRequirement& req, sim::SimTime now)
{
    const double th_delay = req.decay_rates[0];
    const double th_jitter = req.decay_rates[1];
    const double th_loss = req.decay_rates[2];
    auto weight = [&](double theta, sim::SimTime t) { return std::exp(-theta * (now - t).as_seconds()); };

    double wd = 0, vd = 0, wj = 0, vj = 0, wl = 0, vl = 0;
    double running_sum = 0.0;
    for (std::size_t j = 0; j < delays.size(); ++j)
    {
        const auto& s = delays[j];
        running_sum += s.delay_ms;
        const double running_mean = running_sum / static_cast<double>(j + 1);

        const double a = weight(th_delay, s.t);
        wd += a;
        if (s.delay_ms > req.delay_bound_ms)
            vd += a;

        const double b = weight(th_jitter, s.t);
        wj += b;
        if (std::abs(s.delay_ms - running_mean) > req.jitter_bound_ms)
            vj += b;

        wl += weight(th_loss, s.t);
    }
    for (auto t : losses)
    {
        const double c = weight(th_loss, t);
        wl += c;
        vl += c;
    }

    ServiceFeatures f;
    f.v_delay = wd > 0 ? vd / wd : 0.0;
    f.v_jitter = wj > 0 ? vj / wj : 0.0;
    f.v_loss = wl > 0 ? vl / wl : 0.0;
    return f;
}

void ChannelHistory::set_busy(sim::SimTime t)
{
    if (!busy_since_)
    {
        busy_since_ = t;
    }
}

void ChannelHistory::set_idle(sim::SimTime t)
{
    if (busy_since_)
    {
        if (t > *busy_since_)
        {
            busy_.emplace_back(*busy_since_, t);
        }
        busy_since_.reset();
    }
}

void ChannelHistory::record_frame(const ObservedFrame& f)
{
    frames_.push_back(f);
}

void ChannelHistory::prune(sim::SimTime now)
{
    const sim::SimTime horizon = now - retention_;
    while (!busy_.empty() && busy_.front().second < horizon)
    {
        busy_.pop_front();
    }
    while (!frames_.empty() && frames_.front().end < horizon)
    {
        frames_.pop_front();
    }
}

std::int64_t ChannelHistory::busy_us(sim::SimTime from, sim::SimTime to) const
{
    std::int64_t total = 0;
    auto add = [&](sim::SimTime a, sim::SimTime b) {
        const auto lo = std::max(a, from);
        const auto hi = std::min(b, to);
        if (hi > lo)
            total += (hi - lo).micros;
    };
    for (const auto& [a, b] : busy_)
    {
        add(a, b);
    }
    if (busy_since_)
    {
        add(*busy_since_, to);
    }
    return total;
}

namespace
{
std::int64_t overlap_us(const ObservedFrame& f, sim::SimTime from, sim::SimTime to)
{
    const auto lo = std::max(f.start, from);
    const auto hi = std::min(f.end, to);
    return hi > lo ? (hi - lo).micros : 0;
}
} // namespace

ChannelFeatures sense_channel(const ChannelHistory& history, sim::SimTime now, sim::SimTime window, int exclude_src)
{
    ChannelFeatures cf;
    if (window.micros <= 0)
    {
        return cf;
    }
    const sim::SimTime from = now - window;
    cf.utilization = std::clamp(static_cast<double>(history.busy_us(from, now)) / static_cast<double>(window.micros), 0.0, 1.0);

    std::int64_t decoded = 0;
    std::int64_t mgmt = 0;
    std::set<int> sources;
    for (const auto& f : history.frames())
    {
        const auto us = overlap_us(f, from, now);
        if (us <= 0)
            continue;
        decoded += us;
        if (f.kind != phy::FrameKind::Data)
            mgmt += us;
        if (f.src != exclude_src)
            sources.insert(f.src);
    }
    cf.mgmt_fraction = decoded > 0 ? static_cast<double>(mgmt) / static_cast<double>(decoded) : 0.0;
    cf.n_active = static_cast<int>(sources.size());
    return cf;
}

std::vector<double> airtime_shares(const ChannelHistory& history, sim::SimTime now, sim::SimTime window, int self)
{
    const sim::SimTime from = now - window;
    std::map<int, double> per_src;
    per_src[self] = 0.0;
    for (const auto& f : history.frames())
    {
        const auto us = overlap_us(f, from, now);
        if (us > 0)
            per_src[f.src] += static_cast<double>(us);
    }
    std::vector<double> out;
    out.reserve(per_src.size());
    for (const auto& [src, us] : per_src)
    {
        out.push_back(us);
    }
    return out;
}

} // namespace aimac::qos
