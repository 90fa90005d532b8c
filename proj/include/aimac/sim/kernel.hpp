#pragma once

#include "aimac/sim/time.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace aimac::sim
{

enum class EventKind : std::uint8_t
{
    TxStart,
    TxEnd,
    PacketArrival,
    SlotEdge,
    Timer,
};

std::string_view to_string(EventKind kind) noexcept;

struct EventHandle
{
    std::uint64_t seq = 0;
    bool valid() const noexcept { return seq != 0; }
};

struct SimEvent
{
    SimTime fire_at;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::Timer;
    int device_id = -1;
    std::function<void()> action;
};

/// Raised when the simulator itself is used inconsistently (for example
/// scheduling in the past). These indicate bugs, not bad input.
class SimulatorError : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

/// Deterministic discrete-event engine.
///
/// Events execute in (fire_at, seq) order where seq is issued at schedule time,
/// so same-time events run in the order they were scheduled and a child scheduled
/// for "now" runs after every event already queued for "now".
class Kernel
{
  public:
    Kernel() = default;
    Kernel(const Kernel&) = delete;
    Kernel& operator=(const Kernel&) = delete;

    EventHandle schedule(SimTime fire_at, EventKind kind, int device_id, std::function<void()> action);

    /// Returns true if the event was pending and is now cancelled.
    bool cancel(EventHandle handle);

    bool is_pending(EventHandle handle) const { return handle.valid() && live_.contains(handle.seq); }

    /// Executes every event with fire_at <= t_end, then sets the clock to t_end.
    std::size_t run_until(SimTime t_end);

    SimTime now() const noexcept { return now_; }
    std::size_t pending_count() const noexcept { return live_.size(); }

    /// Event-trace sink: one `time_us,seq,kind,device_id,detail` line per executed event.
    void set_trace(std::ostream* out) noexcept { trace_ = out; }
    bool tracing() const noexcept { return trace_ != nullptr; }

    /// Appends a token to the detail field of the event currently executing.
    void annotate(std::string_view token);

  private:
    struct Later
    {
        bool operator()(const SimEvent& a, const SimEvent& b) const noexcept
        {
            if (a.fire_at != b.fire_at)
            {
                return a.fire_at > b.fire_at;
            }
            return a.seq > b.seq;
        }
    };

    std::priority_queue<SimEvent, std::vector<SimEvent>, Later> queue_;
    std::unordered_set<std::uint64_t> live_;
    SimTime now_{0};
    std::uint64_t next_seq_ = 1;
    std::ostream* trace_ = nullptr;
    std::string detail_;
};

} // namespace aimac::sim
