#pragma once

#include "aimac/phy/medium.hpp"
#include "aimac/sim/time.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <deque>
#include <span>
#include <vector>

namespace aimac::qos
{

/// Bounds a service must honour plus the per-feature decay rates (1/s) used to
/// weight recent evidence more heavily than old evidence.
struct QosRequirement
{
    double delay_bound_ms = 30.0;
    double jitter_bound_ms = 10.0;
    double loss_bound = 0.01;
    std::array<double, 3> decay_rates{1.0, 1.0, 1.0}; ///< delay, jitter, loss

    static QosRequirement gaming() { return QosRequirement{}; }
    void validate() const;
};

struct DelaySample
{
    sim::SimTime t;
    double delay_ms = 0.0;
};

/// Decay-weighted violation probabilities, each in [0, 1].
struct ServiceFeatures
{
    double v_delay = 0.0;
    double v_jitter = 0.0;
    double v_loss = 0.0;
};

/// Service feature extraction over a chronologically ordered sample set.
///
/// Each feature is sum_j w_j * violation_j / sum_j w_j with
/// w_j = exp(-theta_k * (now - t_j)). A delay sample violates the delay bound
/// when it exceeds delay_bound; it violates the jitter bound when it deviates
/// from the running mean of samples 1..j by more than jitter_bound. For the
/// loss feature each delivered sample is a non-violation and each loss event a
/// violation. With no evidence a feature is 0.
ServiceFeatures extract_service_features(std::span<const DelaySample> delays, std::span<const sim::SimTime> losses,
                                         const QosRequirement& req, sim::SimTime now);

struct ObservedFrame
{
    int src = 0;
    sim::SimTime start;
    sim::SimTime end;
    phy::FrameKind kind = phy::FrameKind::Data;
};

struct ChannelFeatures
{
    double utilization = 0.0;
    double mgmt_fraction = 0.0;
    int n_active = 0;
};

/// What one device has heard: its carrier-sense busy intervals and the frames
/// it could decode. Old entries are pruned past `retention`.
class ChannelHistory
{
  public:
    explicit ChannelHistory(sim::SimTime retention = sim::seconds(1)) : retention_(retention) {}

    void set_busy(sim::SimTime t);
    void set_idle(sim::SimTime t);
    bool busy() const noexcept { return busy_since_.has_value(); }

    void record_frame(const ObservedFrame& f);
    void prune(sim::SimTime now);

    /// Busy microseconds overlapping [from, to].
    std::int64_t busy_us(sim::SimTime from, sim::SimTime to) const;

    const std::deque<ObservedFrame>& frames() const noexcept { return frames_; }

  private:
    sim::SimTime retention_;
    std::optional<sim::SimTime> busy_since_;
    std::deque<std::pair<sim::SimTime, sim::SimTime>> busy_;
    std::deque<ObservedFrame> frames_;
};

/// Channel sensing over the trailing window: busy share, share of decoded
/// airtime that was management or control traffic, distinct decoded sources.
ChannelFeatures sense_channel(const ChannelHistory& history, sim::SimTime now,
                              sim::SimTime window = sim::milliseconds(50), int exclude_src = -1);

/// Decoded airtime per distinct source within the window. `self` is always
/// present (possibly with a zero share).
std::vector<double> airtime_shares(const ChannelHistory& history, sim::SimTime now, sim::SimTime window, int self);

} // namespace aimac::qos
