#include "aimac/harness/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace aimac::harness
{

MetricSet compute_metrics(std::span<const double> delays_ms, std::uint64_t generated, std::uint64_t delivered,
                          double tail_threshold_ms)
{
    if (delays_ms.size() != delivered)
    {
        throw std::invalid_argument("compute_metrics: delay count must equal delivered count");
    }
    if (delivered > generated)
    {
        throw std::invalid_argument("compute_metrics: more packets delivered than generated");
    }
    MetricSet m;
    m.generated = generated;
    m.delivered = delivered;
    if (generated == 0)
    {
        return m;
    }
    m.empty = false;
    m.loss_rate = static_cast<double>(generated - delivered) / static_cast<double>(generated);
    if (delivered == 0)
    {
        return m;
    }
    const double n = static_cast<double>(delivered);
    double sum = 0.0;
    std::uint64_t tail = 0;
    for (double d : delays_ms)
    {
        sum += d;
        if (d > tail_threshold_ms)
            ++tail;
    }
    m.latency_ms = sum / n;
    double sq = 0.0;
    for (double d : delays_ms)
        sq += (d - m.latency_ms) * (d - m.latency_ms);
    m.jitter_ms = std::sqrt(sq / n);
    m.tail_prob = static_cast<double>(tail) / n;
    return m;
}

namespace
{
MetricSet flow_metrics(const FlowLog& f, double tail)
{
    return compute_metrics(f.delays_ms, f.delivered + f.dropped, f.delivered, tail);
}
} // namespace

EpisodeMetrics metrics_from_log(const EpisodeLog& log, double tail_threshold_ms)
{
    EpisodeMetrics m;
    m.uplink = flow_metrics(log.uplink, tail_threshold_ms);
    m.downlink = flow_metrics(log.downlink, tail_threshold_ms);
    std::vector<double> both(log.uplink.delays_ms);
    both.insert(both.end(), log.downlink.delays_ms.begin(), log.downlink.delays_ms.end());
    const auto delivered = log.uplink.delivered + log.downlink.delivered;
    m.dropped = log.uplink.dropped + log.downlink.dropped;
    m.queued = log.uplink.queued + log.downlink.queued;
    m.overall = compute_metrics(both, delivered + m.dropped, delivered, tail_threshold_ms);
    m.counters = log.dut_counters;
    return m;
}

} // namespace aimac::harness
