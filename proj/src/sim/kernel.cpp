#include "aimac/sim/kernel.hpp"

#include <ostream>

namespace aimac::sim
{

std::string_view to_string(EventKind kind) noexcept
{
    switch (kind)
    {
    case EventKind::TxStart:
        return "tx-start";
    case EventKind::TxEnd:
        return "tx-end";
    case EventKind::PacketArrival:
        return "packet-arrival";
    case EventKind::SlotEdge:
        return "slot-edge";
    case EventKind::Timer:
        return "timer";
    }
    return "unknown";
}

EventHandle Kernel::schedule(SimTime fire_at, EventKind kind, int device_id, std::function<void()> action)
{
    if (fire_at < now_)
    {
        throw SimulatorError("event scheduled in the past: fire_at=" + std::to_string(fire_at.micros) +
                             " now=" + std::to_string(now_.micros));
    }
    const std::uint64_t seq = next_seq_++;
    queue_.push(SimEvent{fire_at, seq, kind, device_id, std::move(action)});
    live_.insert(seq);
    return EventHandle{seq};
}

bool Kernel::cancel(EventHandle handle)
{
    if (!handle.valid())
    {
        return false;
    }
    return live_.erase(handle.seq) > 0;
}

std::size_t Kernel::run_until(SimTime t_end)
{
    if (t_end < now_)
    {
        throw SimulatorError("run_until target precedes current time");
    }
    std::size_t executed = 0;
    while (!queue_.empty() && queue_.top().fire_at <= t_end)
    {
        // priority_queue::top is const; the event is moved out before pop.
        SimEvent ev = std::move(const_cast<SimEvent&>(queue_.top()));
        queue_.pop();
        if (live_.erase(ev.seq) == 0)
        {
            continue; // cancelled
        }
        now_ = ev.fire_at;
        detail_.clear();
        if (ev.action)
        {
            ev.action();
        }
        ++executed;
        if (trace_ != nullptr)
        {
            *trace_ << now_.micros << ',' << ev.seq << ',' << to_string(ev.kind) << ',' << ev.device_id << ','
                    << detail_ << '\n';
        }
    }
    now_ = t_end;
    return executed;
}

void Kernel::annotate(std::string_view token)
{
    if (trace_ == nullptr)
    {
        return;
    }
    if (!detail_.empty())
    {
        detail_.push_back(' ');
    }
    detail_.append(token);
}

} // namespace aimac::sim
