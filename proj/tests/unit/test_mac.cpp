#include "aimac/mac/dcf.hpp"
#include "aimac/sim/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <vector>

using namespace aimac;
using namespace aimac::mac;

namespace
{

DcfState with_pending(std::size_t queued, std::size_t in_frame = 1)
{
    DcfState s;
    for (std::size_t i = 0; i < queued; ++i)
    {
        Packet p;
        p.id = i + 1;
        s.tx_queue.push_back(p);
    }
    s.pending_frame = PendingFrame{1, in_frame, true};
    return s;
}

int cw_oracle(int k)
{
    long long v = 16;
    for (int i = 0; i < k; ++i)
        v = std::min<long long>(v * 2, 1 << 20);
    return static_cast<int>(std::min<long long>(v - 1, 1023));
}

} // namespace

TEST_CASE("backoff draw")
{
    sim::RngStream rng(1, "backoff/0");
    for (int i = 0; i < 1000; ++i)
    {
        const int b = backoff_draw(1, rng);
        REQUIRE((b == 0 || b == 1));
    }
    CHECK_THROWS_AS(backoff_draw(0, rng), MacError);

    const int n = 1000000;
    double sum = 0;
    int lo = 15, hi = 0;
    for (int i = 0; i < n; ++i)
    {
        const int b = backoff_draw(15, rng);
        sum += b;
        lo = std::min(lo, b);
        hi = std::max(hi, b);
    }
    CHECK(sum / n >= 7.45);
    CHECK(sum / n <= 7.55);
    CHECK(lo == 0);
    CHECK(hi == 15);
}

TEST_CASE("slot edges")
{
    DcfState s;
    s.backoff = 3;
    CHECK(dcf_on_slot_edge(s, false) == SlotAction::Decrement);
    CHECK(s.backoff == 2);
    CHECK(dcf_on_slot_edge(s, true) == SlotAction::Freeze);
    CHECK(s.backoff == 2);
    s.backoff = 0;
    CHECK(dcf_on_slot_edge(s, false) == SlotAction::Transmit);
}

TEST_CASE("contention window doubles and caps")
{
    sim::RngStream rng(2, "backoff/1");
    DcfParams p;
    auto s = with_pending(1);
    on_tx_complete(s, OutcomeKind::AckTimeout, p, rng);
    CHECK(s.cw == 31);
    CHECK(s.retries == 1);
    CHECK(s.backoff >= 0);
    CHECK(s.backoff <= 31);

    auto c = with_pending(1);
    c.cw = 1023;
    on_tx_complete(c, OutcomeKind::AckTimeout, p, rng);
    CHECK(c.cw == 1023);

    for (int k = 0; k <= 12; ++k)
        CHECK(cw_after_failures(k) == cw_oracle(k));
}

TEST_CASE("cw trajectory over consecutive failures")
{
    sim::RngStream rng(3, "backoff/2");
    DcfParams p;
    p.retry_limit = 20;
    auto s = with_pending(1);
    for (int k = 1; k <= 12; ++k)
    {
        s.pending_frame = PendingFrame{static_cast<std::uint64_t>(k), 1, true};
        on_tx_complete(s, OutcomeKind::AckTimeout, p, rng);
        REQUIRE(s.cw == cw_oracle(k));
    }
}

TEST_CASE("success resets state and releases the frame")
{
    sim::RngStream rng(4, "backoff/3");
    auto s = with_pending(5, 3);
    s.cw = 255;
    s.retries = 4;
    const auto r = on_tx_complete(s, OutcomeKind::Success, DcfParams{}, rng);
    CHECK(r.kind == OutcomeKind::Success);
    CHECK(r.finished.size() == 3);
    CHECK(s.tx_queue.size() == 2);
    CHECK(s.tx_queue.front().id == 4);
    CHECK(s.cw == 15);
    CHECK(s.retries == 0);
    CHECK_FALSE(s.pending_frame.has_value());
}

TEST_CASE("retry limit drops the packet")
{
    sim::RngStream rng(5, "backoff/4");
    DcfParams p;
    auto s = with_pending(2);
    for (int attempt = 1; attempt <= 7; ++attempt)
    {
        s.pending_frame = PendingFrame{static_cast<std::uint64_t>(attempt), 1, true};
        REQUIRE(on_tx_complete(s, OutcomeKind::AckTimeout, p, rng).kind == OutcomeKind::AckTimeout);
    }
    s.pending_frame = PendingFrame{8, 1, true};
    const auto r = on_tx_complete(s, OutcomeKind::AckTimeout, p, rng);
    CHECK(r.kind == OutcomeKind::DropAfterRetry);
    REQUIRE(r.finished.size() == 1);
    CHECK(r.finished[0].id == 1);
    CHECK(s.cw == 15);
    CHECK(s.retries == 0);
    CHECK(s.tx_queue.size() == 1);
}

TEST_CASE("outcome without a pending frame is an error")
{
    sim::RngStream rng(6, "backoff/5");
    DcfState s;
    CHECK_THROWS_AS(on_tx_complete(s, OutcomeKind::Success, DcfParams{}, rng), MacError);
}

TEST_CASE("rate adaptation")
{
    RateAdapter fresh;
    CHECK(fresh.current() == 3);

    RateAdapter top(11, 11);
    for (int i = 0; i < 10; ++i)
        top.record(OutcomeKind::Success);
    CHECK(top.current() == 11);

    RateAdapter mid(11, 5);
    mid.record(OutcomeKind::AckTimeout);
    CHECK(mid.current() == 5);
    mid.record(OutcomeKind::AckTimeout);
    CHECK(mid.current() == 4);

    RateAdapter up;
    for (int i = 0; i < 9; ++i)
        up.record(OutcomeKind::Success);
    CHECK(up.current() == 3);
    up.record(OutcomeKind::Success);
    CHECK(up.current() == 4);

    RateAdapter floor(11, 0);
    for (int i = 0; i < 6; ++i)
        floor.record(OutcomeKind::AckTimeout);
    CHECK(floor.current() == 0);

    // An interleaved success breaks a failure run.
    std::vector<OutcomeKind> h{OutcomeKind::AckTimeout, OutcomeKind::Success, OutcomeKind::AckTimeout};
    CHECK(baseline_rate_adapt(h) == 3);
}

TEST_CASE("success ratio")
{
    TxOutcome o;
    o.frames_attempted = 4;
    o.frames_acked = 3;
    CHECK(o.success_ratio() == doctest::Approx(0.75));
    o.frames_attempted = 0;
    CHECK(o.success_ratio() == 0.0);
}
