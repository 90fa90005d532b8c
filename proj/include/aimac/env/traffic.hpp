#pragma once

#include "aimac/sim/rng.hpp"
#include "aimac/sim/time.hpp"

#include <string_view>

namespace aimac::env
{

enum class TrafficKind
{
    Gaming,
    Bulk,
    ProbeMgmt,
};

enum class Direction
{
    Uplink,
    Downlink,
    Both,
};

std::string_view to_string(TrafficKind kind) noexcept;
std::string_view to_string(Direction dir) noexcept;
TrafficKind traffic_kind_from_string(std::string_view s);
Direction direction_from_string(std::string_view s);

inline constexpr int kMinPacketBytes = 1;
inline constexpr int kMaxPacketBytes = 2000;
inline constexpr double kMinIntervalMs = 0.1;

/// Packet size and inter-arrival statistics, both Gumbel (largest extreme value).
struct TrafficProfile
{
    TrafficKind kind = TrafficKind::Gaming;
    Direction direction = Direction::Both;
    double size_mu = 80.0;      ///< bytes
    double size_beta = 20.0;    ///< bytes
    double interval_mu = 15.0;  ///< ms
    double interval_beta = 3.0; ///< ms
    int burst_frames = 1;       ///< packets emitted per arrival (probe bursts)

    static TrafficProfile gaming();
    static TrafficProfile probe();

    /// Throws std::invalid_argument on non-positive scales or burst size.
    void validate() const;

    double mean_size_bytes() const noexcept;
    double mean_interval_ms() const noexcept;
};

inline constexpr double kEulerGamma = 0.57721566490153286;

/// mu - beta * ln(-ln(u)), u ~ U(0,1) with endpoints re-drawn.
double sample_gumbel(double mu, double beta, sim::RngStream& stream);

/// Rounds and clamps a sampled size into [kMinPacketBytes, kMaxPacketBytes].
int clamp_packet_bytes(double sampled) noexcept;

/// Clamps a sampled inter-arrival time to at least kMinIntervalMs.
double clamp_interval_ms(double sampled) noexcept;

struct PacketDraw
{
    sim::SimTime arrival;
    int bytes = 1;
};

/// Next arrival after `now` with clamped interval and size.
PacketDraw next_packet(const TrafficProfile& profile, sim::SimTime now, sim::RngStream& stream);

} // namespace aimac::env
