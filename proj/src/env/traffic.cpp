#include "aimac/env/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace aimac::env
{

std::string_view to_string(TrafficKind kind) noexcept
{
    switch (kind)
    {
    case TrafficKind::Gaming:
        return "gaming";
    case TrafficKind::Bulk:
        return "bulk";
    case TrafficKind::ProbeMgmt:
        return "probe_mgmt";
    }
    return "unknown";
}

std::string_view to_string(Direction dir) noexcept
{
    switch (dir)
    {
    case Direction::Uplink:
        return "uplink";
    case Direction::Downlink:
        return "downlink";
    case Direction::Both:
        return "both";
    }
    return "unknown";
}

TrafficKind traffic_kind_from_string(std::string_view s)
{
    if (s == "gaming")
        return TrafficKind::Gaming;
    if (s == "bulk")
        return TrafficKind::Bulk;
    if (s == "probe_mgmt")
        return TrafficKind::ProbeMgmt;
    throw std::invalid_argument("unknown traffic kind: " + std::string(s));
}

Direction direction_from_string(std::string_view s)
{
    if (s == "uplink")
        return Direction::Uplink;
    if (s == "downlink")
        return Direction::Downlink;
    if (s == "both")
        return Direction::Both;
    throw std::invalid_argument("unknown direction: " + std::string(s));
}

TrafficProfile TrafficProfile::gaming()
{
    return TrafficProfile{};
}

TrafficProfile TrafficProfile::probe()
{
    TrafficProfile p;
    p.kind = TrafficKind::ProbeMgmt;
    p.direction = Direction::Uplink;
    p.size_mu = 120.0;
    p.size_beta = 1e-3;
    p.interval_mu = 500.0;
    p.interval_beta = 100.0;
    p.burst_frames = 3;
    return p;
}

void TrafficProfile::validate() const
{
    if (!(size_beta > 0.0) || !(interval_beta > 0.0))
    {
        throw std::invalid_argument("traffic profile scales must be positive");
    }
    if (!std::isfinite(size_mu) || !std::isfinite(interval_mu))
    {
        throw std::invalid_argument("traffic profile locations must be finite");
    }
    if (burst_frames < 1)
    {
        throw std::invalid_argument("traffic profile burst_frames must be >= 1");
    }
}

double TrafficProfile::mean_size_bytes() const noexcept
{
    return size_mu + kEulerGamma * size_beta;
}

double TrafficProfile::mean_interval_ms() const noexcept
{
    return interval_mu + kEulerGamma * interval_beta;
}

double sample_gumbel(double mu, double beta, sim::RngStream& stream)
{
    if (!(beta > 0.0))
    {
        throw std::invalid_argument("sample_gumbel requires beta > 0");
    }
    double u = 0.0;
    do
    {
        u = stream.next_uniform();
    } while (u <= 0.0 || u >= 1.0);
    return mu - beta * std::log(-std::log(u));
}

int clamp_packet_bytes(double sampled) noexcept
{
    const long rounded = std::lround(std::clamp(sampled, -1e9, 1e9));
    return static_cast<int>(std::clamp<long>(rounded, kMinPacketBytes, kMaxPacketBytes));
}

double clamp_interval_ms(double sampled) noexcept
{
    return std::max(sampled, kMinIntervalMs);
}

PacketDraw next_packet(const TrafficProfile& profile, sim::SimTime now, sim::RngStream& stream)
{
    const double interval_ms = clamp_interval_ms(sample_gumbel(profile.interval_mu, profile.interval_beta, stream));
    const double size = sample_gumbel(profile.size_mu, profile.size_beta, stream);
    PacketDraw d;
    d.arrival = now + std::max(sim::from_ms(interval_ms), sim::microseconds(100));
    d.bytes = clamp_packet_bytes(size);
    return d;
}

} // namespace aimac::env
