#pragma once

#include "aimac/phy/phy.hpp"
#include "aimac/sim/rng.hpp"
#include "aimac/sim/time.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace aimac::phy
{

enum class FrameKind : std::uint8_t
{
    Data,
    Ack,
    Mgmt,
};

std::string_view to_string(FrameKind kind) noexcept;

struct TxVector
{
    int mcs = 0;
    double tx_power_dbm = 0.0;
};

inline constexpr int kBroadcast = -1;

struct Frame
{
    std::uint64_t id = 0;
    int src = 0;
    int dst = kBroadcast;
    FrameKind kind = FrameKind::Data;
    int payload_bytes = 1;
    TxVector tx_vector;
    sim::SimTime start;
    sim::SimTime end;
};

enum class Reception : std::uint8_t
{
    Delivered,
    Corrupted,
};

/// Reception decision for a frame given its received power and the powers of
/// every frame that overlapped it at the receiver. With any overlap the SINR
/// must clear the capture threshold; the frame then survives a Bernoulli draw
/// against the PER curve evaluated at the SINR.
struct ReceptionDecision
{
    Reception outcome = Reception::Corrupted;
    double sinr_db = 0.0;
};

ReceptionDecision decide_reception(double signal_dbm, std::span<const double> interferer_dbm, const McsEntry& mcs,
                                   const PhyConfig& cfg, sim::RngStream& rng);

/// Signal to interference-plus-noise ratio in dB.
double sinr_db(double signal_dbm, std::span<const double> interferer_dbm, double noise_dbm);

/// The single shared channel: static link budgets, in-flight frames, and
/// overlap bookkeeping used for carrier sense and reception.
class Medium
{
  public:
    struct ActiveFrame
    {
        Frame frame;
        std::vector<Frame> overlaps;
    };

    struct EndedFrame
    {
        Frame frame;
        std::vector<Frame> overlaps;
    };

    Medium(PhyConfig cfg, std::vector<Position> positions, std::vector<double> tx_power_dbm);

    const PhyConfig& config() const noexcept { return cfg_; }
    std::size_t device_count() const noexcept { return positions_.size(); }
    Position position(int device) const { return positions_.at(static_cast<std::size_t>(device)); }
    double tx_power_dbm(int device) const { return tx_power_dbm_.at(static_cast<std::size_t>(device)); }

    double path_loss_between(int a, int b) const;
    double rx_power_dbm(const Frame& frame, int receiver) const;
    double rx_power_mw(const Frame& frame, int receiver) const;

    void begin(const Frame& frame);
    EndedFrame end(std::uint64_t frame_id);

    /// Aggregate received power from in-flight frames not sent by `device`.
    double aggregate_rx_mw(int device) const;
    bool cca_busy(int device) const;

    bool in_flight(std::uint64_t frame_id) const;
    const std::vector<ActiveFrame>& active() const noexcept { return active_; }

    /// Outcome of `frame` at `receiver` given the frames that overlapped it.
    /// A receiver that transmitted during the frame cannot decode it.
    ReceptionDecision deliver(const Frame& frame, int receiver, std::span<const Frame> overlaps,
                              sim::RngStream& rng) const;

    /// Deterministic decodability used by passive observers (no PER draw):
    /// received above the CCA threshold and, if overlapped, above capture.
    bool decodable_by(const Frame& frame, int observer, std::span<const Frame> overlaps) const;

  private:
    std::size_t idx(int a, int b) const noexcept
    {
        return static_cast<std::size_t>(a) * positions_.size() + static_cast<std::size_t>(b);
    }

    PhyConfig cfg_;
    std::vector<Position> positions_;
    std::vector<double> tx_power_dbm_;
    std::vector<double> path_loss_;
    std::vector<double> default_rx_mw_;
    double cca_threshold_mw_;
    std::vector<ActiveFrame> active_;
};

} // namespace aimac::phy
