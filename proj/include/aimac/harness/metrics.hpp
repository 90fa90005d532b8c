#pragma once

#include "aimac/harness/network.hpp"
#include "aimac/mac/dcf.hpp"

#include <cstdint>
#include <span>

namespace aimac::harness
{

inline constexpr double kDefaultTailThresholdMs = 30.0;

/// Latency statistics of one packet population.
struct MetricSet
{
    bool empty = true; ///< no packets generated; the statistics are all zero
    double latency_ms = 0.0;
    double jitter_ms = 0.0; ///< population standard deviation of the delays
    double loss_rate = 0.0;
    double tail_prob = 0.0;
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
};

/// Mean delay, population standard deviation, (generated - delivered) /
/// generated, and the share of delays strictly above the tail threshold.
/// Throws std::invalid_argument if the delay count differs from `delivered` or
/// delivered exceeds generated.
MetricSet compute_metrics(std::span<const double> delays_ms, std::uint64_t generated, std::uint64_t delivered,
                          double tail_threshold_ms = kDefaultTailThresholdMs);

struct EpisodeMetrics
{
    MetricSet overall; ///< both directions of the device-under-test flows
    MetricSet uplink;
    MetricSet downlink;
    mac::MacCounters counters; ///< device under test
    std::uint64_t dropped = 0;
    std::uint64_t queued = 0;
};

/// Metrics over the device-under-test flows. Packets still queued when the
/// episode ends are excluded from the loss denominator.
EpisodeMetrics metrics_from_log(const EpisodeLog& log, double tail_threshold_ms = kDefaultTailThresholdMs);

} // namespace aimac::harness
