#pragma once

#include "aimac/sim/rng.hpp"
#include "aimac/sim/time.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace aimac::mac
{

struct MacTiming
{
    sim::SimTime slot = sim::microseconds(9);
    sim::SimTime sifs = sim::microseconds(16);
    sim::SimTime difs = sim::microseconds(34);
    sim::SimTime ack_slack = sim::microseconds(9);
};

struct DcfParams
{
    int cw_min = 15;
    int cw_max = 1023;
    int retry_limit = 7;
    std::size_t queue_cap = 256;
};

enum class Flow : std::uint8_t
{
    Uplink,
    Downlink,
    Broadcast,
};

std::string_view to_string(Flow flow) noexcept;

struct Packet
{
    std::uint64_t id = 0;
    int bytes = 1;
    sim::SimTime created_at;
    std::optional<sim::SimTime> delivered_at;
    Flow flow = Flow::Uplink;
    int src = 0;
    int dst = -1;
    bool mgmt = false;
    bool tracked = false; ///< belongs to a device-under-test flow
};

enum class OutcomeKind : std::uint8_t
{
    Success,
    AckTimeout,
    DropAfterRetry,
};

std::string_view to_string(OutcomeKind kind) noexcept;

/// Result of one transmission attempt (one PPDU).
struct TxOutcome
{
    OutcomeKind kind = OutcomeKind::Success;
    int frames_attempted = 1;
    int frames_acked = 0;

    double success_ratio() const noexcept
    {
        return frames_attempted > 0 ? static_cast<double>(frames_acked) / frames_attempted : 0.0;
    }
};

/// The head-of-line transmission awaiting its ACK: the first `packet_count`
/// packets of the queue travel in this frame.
struct PendingFrame
{
    std::uint64_t frame_id = 0;
    std::size_t packet_count = 1;
    bool expects_ack = true;
};

struct DcfState
{
    int cw = 15;
    int backoff = -1; ///< remaining slots; -1 means "draw on next contention"
    int retries = 0;
    std::deque<Packet> tx_queue;
    std::optional<PendingFrame> pending_frame;

    explicit DcfState(const DcfParams& p = {}) : cw(p.cw_min) {}
};

class MacError : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

/// Uniform integer in [0, cw]. Requires cw >= 1.
int backoff_draw(int cw, sim::RngStream& stream);

enum class SlotAction : std::uint8_t
{
    Freeze,
    Decrement,
    Transmit,
};

/// One slot boundary of the classical countdown. The caller guarantees the
/// device is idle-waiting with a non-empty queue and a drawn backoff.
SlotAction dcf_on_slot_edge(DcfState& state, bool busy);

/// What on_tx_complete did with the packets of the finished attempt.
struct CompletionResult
{
    OutcomeKind kind = OutcomeKind::Success;
    std::vector<Packet> finished; ///< acked (Success) or dropped (DropAfterRetry)
};

/// Standard DCF reaction to an attempt result. `attempt` is Success or
/// AckTimeout; a timeout that pushes retries past the limit drops the packets
/// and reports DropAfterRetry. Throws MacError if no frame is pending.
CompletionResult on_tx_complete(DcfState& state, OutcomeKind attempt, const DcfParams& params,
                                sim::RngStream& stream);

/// Contention window after k consecutive failures starting from CWmin, as a
/// closed form: min(2^k * (CWmin + 1) - 1, CWmax).
int cw_after_failures(int k, const DcfParams& params = {});

/// Success/failure-driven rate control: start at MCS3, step up after
/// `up_after` consecutive successes, step down after `down_after` consecutive
/// failures.
class RateAdapter
{
  public:
    explicit RateAdapter(int max_mcs = 11, int initial = 3, int up_after = 10, int down_after = 2)
        : max_mcs_(max_mcs), mcs_(initial), up_after_(up_after), down_after_(down_after)
    {
    }

    int current() const noexcept { return mcs_; }
    void record(OutcomeKind outcome) noexcept;

  private:
    int max_mcs_;
    int mcs_;
    int up_after_;
    int down_after_;
    int successes_ = 0;
    int failures_ = 0;
};

/// Replays an outcome history through a fresh RateAdapter.
int baseline_rate_adapt(std::span<const OutcomeKind> history, int max_mcs = 11);

struct MacCounters
{
    std::uint64_t tx_attempts = 0;
    std::uint64_t successes = 0;
    std::uint64_t ack_timeouts = 0;
    std::uint64_t drops = 0;
    std::uint64_t queue_overflows = 0;
    std::int64_t airtime_us = 0;
};

} // namespace aimac::mac
