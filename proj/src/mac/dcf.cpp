#include "aimac/mac/dcf.hpp"

#include <algorithm>

namespace aimac::mac
{

std::string_view to_string(Flow flow) noexcept
{
    switch (flow)
    {
    case Flow::Uplink:
        return "uplink";
    case Flow::Downlink:
        return "downlink";
    case Flow::Broadcast:
        return "broadcast";
    }
    return "unknown";
}

std::string_view to_string(OutcomeKind kind) noexcept
{
    switch (kind)
    {
    case OutcomeKind::Success:
        return "success";
    case OutcomeKind::AckTimeout:
        return "ack_timeout";
    case OutcomeKind::DropAfterRetry:
        return "drop_after_retry";
    }
    return "unknown";
}

int backoff_draw(int cw, sim::RngStream& stream)
{
    if (cw < 1)
    {
        throw MacError("backoff_draw requires cw >= 1");
    }
    return static_cast<int>(stream.next_below_inclusive(static_cast<std::uint64_t>(cw)));
}

SlotAction dcf_on_slot_edge(DcfState& state, bool busy)
{
    if (busy)
    {
        return SlotAction::Freeze;
    }
    if (state.backoff > 0)
    {
        --state.backoff;
        return SlotAction::Decrement;
    }
    return SlotAction::Transmit;
}

CompletionResult on_tx_complete(DcfState& state, OutcomeKind attempt, const DcfParams& params,
                                sim::RngStream& stream)
{
    if (!state.pending_frame)
    {
        throw MacError("tx outcome reported without a pending frame");
    }
    const std::size_t count = std::min(state.pending_frame->packet_count, state.tx_queue.size());
    state.pending_frame.reset();

    CompletionResult result;
    auto take = [&] {
        result.finished.assign(std::make_move_iterator(state.tx_queue.begin()),
                               std::make_move_iterator(state.tx_queue.begin() + static_cast<std::ptrdiff_t>(count)));
        state.tx_queue.erase(state.tx_queue.begin(), state.tx_queue.begin() + static_cast<std::ptrdiff_t>(count));
    };

    if (attempt == OutcomeKind::Success)
    {
        state.cw = params.cw_min;
        state.retries = 0;
        state.backoff = -1;
        take();
        result.kind = OutcomeKind::Success;
        return result;
    }

    state.retries += 1;
    if (state.retries > params.retry_limit)
    {
        state.cw = params.cw_min;
        state.retries = 0;
        state.backoff = -1;
        take();
        result.kind = OutcomeKind::DropAfterRetry;
        return result;
    }
    state.cw = std::min(2 * state.cw + 1, params.cw_max);
    state.backoff = backoff_draw(state.cw, stream);
    result.kind = OutcomeKind::AckTimeout;
    return result;
}

int cw_after_failures(int k, const DcfParams& params)
{
    long long cw = params.cw_min + 1;
    for (int i = 0; i < k && cw <= params.cw_max; ++i)
    {
        cw *= 2;
    }
    return static_cast<int>(std::min<long long>(cw - 1, params.cw_max));
}

void RateAdapter::record(OutcomeKind outcome) noexcept
{
    if (outcome == OutcomeKind::Success)
    {
        failures_ = 0;
        if (++successes_ >= up_after_)
        {
            mcs_ = std::min(mcs_ + 1, max_mcs_);
            successes_ = 0;
        }
        return;
    }
    successes_ = 0;
    if (++failures_ >= down_after_)
    {
        mcs_ = std::max(mcs_ - 1, 0);
        failures_ = 0;
    }
}

int baseline_rate_adapt(std::span<const OutcomeKind> history, int max_mcs)
{
    RateAdapter ra(max_mcs);
    for (auto o : history)
    {
        ra.record(o);
    }
    return ra.current();
}

} // namespace aimac::mac
