#include "aimac/phy/medium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aimac::phy
{

std::string_view to_string(FrameKind kind) noexcept
{
    switch (kind)
    {
    case FrameKind::Data:
        return "data";
    case FrameKind::Ack:
        return "ack";
    case FrameKind::Mgmt:
        return "mgmt";
    }
    return "unknown";
}

double sinr_db(double signal_dbm, std::span<const double> interferer_dbm, double noise_dbm)
{
    double denom = dbm_to_mw(noise_dbm);
    for (double p : interferer_dbm)
    {
        denom += dbm_to_mw(p);
    }
    return signal_dbm - mw_to_dbm(denom);
}

ReceptionDecision decide_reception(double signal_dbm, std::span<const double> interferer_dbm, const McsEntry& mcs,
                                   const PhyConfig& cfg, sim::RngStream& rng)
{
    ReceptionDecision d;
    d.sinr_db = sinr_db(signal_dbm, interferer_dbm, cfg.noise_dbm);
    if (!interferer_dbm.empty() && d.sinr_db < cfg.capture_threshold_db)
    {
        d.outcome = Reception::Corrupted;
        return d;
    }
    const double success = 1.0 - packet_error_rate(mcs, d.sinr_db, cfg.per_sigma_db);
    d.outcome = rng.next_bernoulli(success) ? Reception::Delivered : Reception::Corrupted;
    return d;
}

Medium::Medium(PhyConfig cfg, std::vector<Position> positions, std::vector<double> tx_power_dbm)
    : cfg_(std::move(cfg)), positions_(std::move(positions)), tx_power_dbm_(std::move(tx_power_dbm)),
      cca_threshold_mw_(dbm_to_mw(cfg_.cca_threshold_dbm))
{
    if (positions_.size() != tx_power_dbm_.size())
    {
        throw std::invalid_argument("medium: positions and tx powers differ in length");
    }
    const std::size_t n = positions_.size();
    path_loss_.resize(n * n);
    default_rx_mw_.resize(n * n);
    for (std::size_t a = 0; a < n; ++a)
    {
        for (std::size_t b = 0; b < n; ++b)
        {
            const double pl = path_loss_db(distance(positions_[a], positions_[b]), cfg_);
            path_loss_[a * n + b] = pl;
            default_rx_mw_[a * n + b] = dbm_to_mw(tx_power_dbm_[a] - pl);
        }
    }
}

double Medium::path_loss_between(int a, int b) const
{
    return path_loss_[idx(a, b)];
}

double Medium::rx_power_dbm(const Frame& frame, int receiver) const
{
    return frame.tx_vector.tx_power_dbm - path_loss_[idx(frame.src, receiver)];
}

double Medium::rx_power_mw(const Frame& frame, int receiver) const
{
    if (frame.tx_vector.tx_power_dbm == tx_power_dbm_[static_cast<std::size_t>(frame.src)])
    {
        return default_rx_mw_[idx(frame.src, receiver)];
    }
    return dbm_to_mw(rx_power_dbm(frame, receiver));
}

void Medium::begin(const Frame& frame)
{
    ActiveFrame incoming{frame, {}};
    for (auto& a : active_)
    {
        a.overlaps.push_back(frame);
        incoming.overlaps.push_back(a.frame);
    }
    active_.push_back(std::move(incoming));
}

Medium::EndedFrame Medium::end(std::uint64_t frame_id)
{
    auto it = std::find_if(active_.begin(), active_.end(), [&](const ActiveFrame& a) { return a.frame.id == frame_id; });
    if (it == active_.end())
    {
        throw std::logic_error("medium: ending a frame that is not in flight");
    }
    EndedFrame out{std::move(it->frame), std::move(it->overlaps)};
    active_.erase(it);
    return out;
}

bool Medium::in_flight(std::uint64_t frame_id) const
{
    return std::any_of(active_.begin(), active_.end(), [&](const ActiveFrame& a) { return a.frame.id == frame_id; });
}

double Medium::aggregate_rx_mw(int device) const
{
    double total = 0.0;
    for (const auto& a : active_)
    {
        if (a.frame.src != device)
        {
            total += rx_power_mw(a.frame, device);
        }
    }
    return total;
}

bool Medium::cca_busy(int device) const
{
    return aggregate_rx_mw(device) > cca_threshold_mw_;
}

ReceptionDecision Medium::deliver(const Frame& frame, int receiver, std::span<const Frame> overlaps,
                                  sim::RngStream& rng) const
{
    std::vector<double> interferers;
    interferers.reserve(overlaps.size());
    for (const auto& o : overlaps)
    {
        if (o.src == receiver)
        {
            return ReceptionDecision{Reception::Corrupted, -std::numeric_limits<double>::infinity()};
        }
        interferers.push_back(rx_power_dbm(o, receiver));
    }
    return decide_reception(rx_power_dbm(frame, receiver), interferers, cfg_.mcs(frame.tx_vector.mcs), cfg_, rng);
}

bool Medium::decodable_by(const Frame& frame, int observer, std::span<const Frame> overlaps) const
{
    const double signal = rx_power_dbm(frame, observer);
    if (signal < cfg_.cca_threshold_dbm)
    {
        return false;
    }
    if (overlaps.empty())
    {
        return true;
    }
    std::vector<double> interferers;
    interferers.reserve(overlaps.size());
    for (const auto& o : overlaps)
    {
        if (o.src == observer)
        {
            return false;
        }
        interferers.push_back(rx_power_dbm(o, observer));
    }
    return sinr_db(signal, interferers, cfg_.noise_dbm) >= cfg_.capture_threshold_db;
}

} // namespace aimac::phy
