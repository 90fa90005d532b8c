#include "aimac/harness/network.hpp"

#include "aimac/agents/agents.hpp"
#include "aimac/env/traffic.hpp"
#include "aimac/phy/medium.hpp"
#include "aimac/sim/kernel.hpp"
#include "aimac/sim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace aimac::harness
{

namespace
{

using sim::SimTime;

constexpr double kSnrEwmaWeight = 0.2;
const SimTime kQosWindow = sim::seconds(1);
const SimTime kSenseWindow = sim::milliseconds(50);

struct TrafficFlow
{
    int src = 0;
    int dst = phy::kBroadcast;
    env::TrafficProfile profile;
    mac::Flow flow = mac::Flow::Uplink;
    bool tracked = false;
    sim::RngStream rng;
};

struct Device
{
    env::DeviceSpec spec;
    mac::DcfState dcf;
    mac::RateAdapter rate;
    sim::RngStream backoff_rng;
    sim::RngStream rx_rng;
    mac::MacCounters counters;
    double tx_power = 0.0;
    bool aimac = false;

    bool busy = false; // carrier sense, own frames excluded
    SimTime idle_since{0};
    bool tx_active = false;
    bool awaiting_ack = false;
    sim::EventHandle access;
    SimTime access_at{0};
    SimTime e0{0};
    sim::EventHandle ack_timeout;
};

// AI-MAC state of the device under test.
struct DutAgent
{
    agents::ObservationStack ca_stack{learn::kCaFeatures};
    agents::ObservationStack rc_stack{learn::kRcFeatures};
    agents::WaitedSlots waited;
    agents::DeviceAgent agent;
    sim::RngStream policy_rng;
    bool busy_seen = false;
    int last_ca = -1;
    int last_rc = -1;
    int prev_action = -1;
    qos::CaOutcome prev_outcome = qos::CaOutcome::Waited;
    std::optional<agents::Upload> rc_pending;

    explicit DutAgent(double gamma, sim::RngStream rng) : agent(gamma), policy_rng(std::move(rng)) {}
};

class Network
{
  public:
    Network(const env::ScenarioConfig& cfg, const EpisodeOptions& opts);
    EpisodeLog run();

  private:
    // contention
    bool contending(const Device& d) const
    {
        return !d.dcf.tx_queue.empty() && !d.tx_active && !d.awaiting_ack;
    }
    void kick(int id);
    void pause(int id);
    void on_access(int id);
    void update_cca();

    // frames
    void transmit_data(int id);
    void on_tx_end(int id, std::uint64_t frame_id);
    void send_ack(int receiver, int sender, std::uint64_t data_frame);
    void on_ack_timeout(int id);
    void complete(int id, mac::OutcomeKind attempt);
    void observe(const phy::Frame& f, std::span<const phy::Frame> overlaps);

    // traffic and accounting
    void schedule_arrival(std::size_t flow, SimTime at, int bytes);
    void on_arrival(std::size_t flow, int bytes);
    void enqueue(TrafficFlow& f, int bytes);
    void mark_delivered(const mac::Packet& p);
    void mark_dropped(const mac::Packet& p);
    FlowLog* flow_log(const mac::Packet& p);

    // agents
    void ca_trigger(int id);
    int rc_act(int id);
    agents::RcObservation rc_observation(int id) const;
    agents::QosSnapshot qos_snapshot() const;
    void prune_qos();
    double episode_fraction() const;

    void note(const std::string& token)
    {
        if (kernel_.tracing())
            kernel_.annotate(token);
    }

    const env::ScenarioConfig& cfg_;
    const EpisodeOptions& opts_;
    SimTime duration_;
    mac::MacTiming timing_;
    mac::DcfParams dcf_params_;
    sim::Kernel kernel_;
    std::unique_ptr<phy::Medium> medium_;
    std::vector<Device> devices_;
    std::vector<TrafficFlow> flows_;
    int dut_ = 1;
    std::unique_ptr<DutAgent> agent_;
    std::uint64_t next_frame_ = 1;
    std::uint64_t next_packet_ = 1;
    std::vector<char> delivered_;               // by packet id
    std::unordered_map<std::uint64_t, std::uint64_t> ack_for_; // ack frame -> data frame

    qos::ChannelHistory history_;
    std::deque<qos::DelaySample> dut_delays_;
    std::deque<SimTime> dut_losses_;
    std::optional<SimTime> last_self_success_;
    std::optional<SimTime> last_intf_success_;
    double snr_ewma_ = 10.0;
    double succ_ratio_ = 1.0;

    EpisodeLog log_;
};

Network::Network(const env::ScenarioConfig& cfg, const EpisodeOptions& opts)
    : cfg_(cfg), opts_(opts), duration_(opts.duration.value_or(cfg.duration)), history_(kQosWindow)
{
    cfg_.validate();
    opts_.qos.validate();
    if (duration_ < SimTime{0})
    {
        throw std::invalid_argument("episode duration must be non-negative");
    }
    if (opts_.policy == env::PolicyKind::Aimac && opts_.model == nullptr)
    {
        throw std::invalid_argument("aimac policy requires model parameters");
    }
    kernel_.set_trace(opts_.trace);
    dut_ = cfg_.dut();

    const std::uint64_t seed = opts_.seed;
    sim::RngStream placement(seed, "placement");
    auto positions = env::place_devices(cfg_.devices, cfg_.phy, placement);
    std::vector<double> powers;
    for (const auto& spec : cfg_.devices)
        powers.push_back(spec.tx_power_dbm(cfg_.phy));
    medium_ = std::make_unique<phy::Medium>(cfg_.phy, positions, powers);

    devices_.reserve(cfg_.devices.size());
    for (const auto& spec : cfg_.devices)
    {
        Device d;
        d.spec = spec;
        d.dcf = mac::DcfState(dcf_params_);
        d.rate = mac::RateAdapter(cfg_.phy.max_mcs());
        d.backoff_rng = sim::RngStream(seed, "backoff/" + std::to_string(spec.id));
        d.rx_rng = sim::RngStream(seed, "rx/" + std::to_string(spec.id));
        d.tx_power = spec.tx_power_dbm(cfg_.phy);
        d.aimac = spec.device_under_test && opts_.policy == env::PolicyKind::Aimac;
        devices_.push_back(std::move(d));
    }
    if (devices_[static_cast<std::size_t>(dut_)].aimac)
    {
        agent_ = std::make_unique<DutAgent>(opts_.reward.gamma, sim::RngStream(seed, "policy"));
    }

    for (const auto& spec : cfg_.devices)
    {
        for (std::size_t k = 0; k < spec.profiles.size(); ++k)
        {
            const auto& p = spec.profiles[k];
            auto add = [&](int src, int dst, mac::Flow fl) {
                const std::string name = "traffic/" + std::to_string(src) + "/" + std::to_string(dst) + "/" +
                                         std::to_string(spec.id) + "/" + std::to_string(k);
                flows_.push_back(TrafficFlow{src, dst, p, fl, spec.device_under_test, sim::RngStream(seed, name)});
            };
            if (spec.role == env::Role::UnassociatedSta)
            {
                add(spec.id, phy::kBroadcast, mac::Flow::Broadcast);
                continue;
            }
            const int ap = spec.associated_with.value();
            if (p.direction != env::Direction::Downlink)
                add(spec.id, ap, mac::Flow::Uplink);
            if (p.direction != env::Direction::Uplink)
                add(ap, spec.id, mac::Flow::Downlink);
        }
    }

    log_.counters.resize(devices_.size());
    log_.delivered_airtime_us.assign(devices_.size(), 0);
    delivered_.push_back(0);
}

double Network::episode_fraction() const
{
    if (duration_.micros <= 0)
        return 0.0;
    return std::clamp(static_cast<double>(kernel_.now().micros) / static_cast<double>(duration_.micros), 0.0, 1.0);
}

EpisodeLog Network::run()
{
    for (std::size_t i = 0; i < flows_.size(); ++i)
    {
        const auto draw = env::next_packet(flows_[i].profile, SimTime{0}, flows_[i].rng);
        schedule_arrival(i, draw.arrival, draw.bytes);
    }
    log_.events = kernel_.run_until(duration_);
    log_.duration = duration_;

    for (const auto& d : devices_)
    {
        for (const auto& p : d.dcf.tx_queue)
        {
            if (delivered_[p.id])
                continue;
            ++log_.all.queued;
            if (auto* fl = flow_log(p))
                ++fl->queued;
        }
    }
    for (std::size_t i = 0; i < devices_.size(); ++i)
        log_.counters[i] = devices_[i].counters;
    log_.dut_counters = devices_[static_cast<std::size_t>(dut_)].counters;
    if (agent_)
        log_.warmup_skips = agent_->agent.warmup_skips();
    return std::move(log_);
}

// --- traffic -----------------------------------------------------------------

void Network::schedule_arrival(std::size_t flow, SimTime at, int bytes)
{
    if (at > duration_)
        return;
    kernel_.schedule(at, sim::EventKind::PacketArrival, flows_[flow].src,
                     [this, flow, bytes] { on_arrival(flow, bytes); });
}

void Network::on_arrival(std::size_t flow, int bytes)
{
    auto& f = flows_[flow];
    enqueue(f, bytes);
    for (int b = 1; b < f.profile.burst_frames; ++b)
    {
        enqueue(f, env::clamp_packet_bytes(env::sample_gumbel(f.profile.size_mu, f.profile.size_beta, f.rng)));
    }
    const auto next = env::next_packet(f.profile, kernel_.now(), f.rng);
    schedule_arrival(flow, next.arrival, next.bytes);
    kick(f.src);
}

void Network::enqueue(TrafficFlow& f, int bytes)
{
    mac::Packet p;
    p.id = next_packet_++;
    p.bytes = bytes;
    p.created_at = kernel_.now();
    p.flow = f.flow;
    p.src = f.src;
    p.dst = f.dst;
    p.mgmt = f.flow == mac::Flow::Broadcast;
    p.tracked = f.tracked;
    delivered_.push_back(0);

    ++log_.all.generated;
    if (auto* fl = flow_log(p))
        ++fl->generated;
    if (p.tracked)
        note("dut_gen=" + std::to_string(p.id) + (p.flow == mac::Flow::Uplink ? "/ul" : "/dl"));

    auto& d = devices_[static_cast<std::size_t>(f.src)];
    if (d.dcf.tx_queue.size() >= dcf_params_.queue_cap)
    {
        ++d.counters.queue_overflows;
        mark_dropped(p);
        return;
    }
    d.dcf.tx_queue.push_back(p);
}

FlowLog* Network::flow_log(const mac::Packet& p)
{
    if (!p.tracked)
        return nullptr;
    return p.flow == mac::Flow::Uplink ? &log_.uplink : &log_.downlink;
}

void Network::mark_delivered(const mac::Packet& p)
{
    if (delivered_[p.id])
        return;
    delivered_[p.id] = 1;
    ++log_.all.delivered;
    const double delay_ms = (kernel_.now() - p.created_at).as_ms();
    log_.all.delays_ms.push_back(delay_ms);
    if (auto* fl = flow_log(p))
    {
        ++fl->delivered;
        fl->delays_ms.push_back(delay_ms);
        dut_delays_.push_back(qos::DelaySample{kernel_.now(), delay_ms});
        note("dut_deliver=" + std::to_string(p.id) + ":" + std::to_string((kernel_.now() - p.created_at).micros));
    }
}

void Network::mark_dropped(const mac::Packet& p)
{
    if (delivered_[p.id])
        return;
    ++log_.all.dropped;
    if (auto* fl = flow_log(p))
    {
        ++fl->dropped;
        dut_losses_.push_back(kernel_.now());
        note("dut_drop=" + std::to_string(p.id));
    }
}

// --- contention --------------------------------------------------------------

void Network::kick(int id)
{
    auto& d = devices_[static_cast<std::size_t>(id)];
    if (!contending(d) || d.busy || kernel_.is_pending(d.access))
        return;
    const SimTime now = kernel_.now();
    d.e0 = std::max(d.idle_since + timing_.difs, now);
    if (d.aimac)
    {
        d.access_at = d.e0;
    }
    else
    {
        if (d.dcf.backoff < 0)
            d.dcf.backoff = mac::backoff_draw(d.dcf.cw, d.backoff_rng);
        d.access_at = d.e0 + timing_.slot * d.dcf.backoff;
    }
    d.access = kernel_.schedule(d.access_at, sim::EventKind::SlotEdge, id, [this, id] { on_access(id); });
}

void Network::pause(int id)
{
    auto& d = devices_[static_cast<std::size_t>(id)];
    if (!kernel_.is_pending(d.access))
        return;
    const SimTime now = kernel_.now();
    // Busy at the very instant of access: both sides transmit.
    if (d.access_at == now)
        return;
    kernel_.cancel(d.access);
    d.access = {};
    if (!d.aimac && now > d.e0)
    {
        const auto elapsed = static_cast<int>((now - d.e0).micros / timing_.slot.micros);
        d.dcf.backoff = std::max(0, d.dcf.backoff - elapsed);
    }
}

void Network::update_cca()
{
    const SimTime now = kernel_.now();
    for (std::size_t i = 0; i < devices_.size(); ++i)
    {
        auto& d = devices_[i];
        const bool busy = medium_->cca_busy(static_cast<int>(i));
        if (busy == d.busy)
            continue;
        d.busy = busy;
        const int id = static_cast<int>(i);
        if (busy)
        {
            if (id == dut_)
            {
                history_.set_busy(now);
                if (agent_)
                    agent_->busy_seen = true;
            }
            pause(id);
        }
        else
        {
            if (id == dut_)
                history_.set_idle(now);
            d.idle_since = now;
            kick(id);
        }
    }
}

void Network::on_access(int id)
{
    auto& d = devices_[static_cast<std::size_t>(id)];
    d.access = {};
    if (!contending(d))
        return;
    if (d.aimac)
    {
        ca_trigger(id);
        return;
    }
    d.dcf.backoff = 0;
    transmit_data(id);
}

// --- frames ------------------------------------------------------------------

void Network::transmit_data(int id)
{
    auto& d = devices_[static_cast<std::size_t>(id)];
    const auto& head = d.dcf.tx_queue.front();
    std::size_t count = 1;
    int bytes = head.bytes;
    const std::size_t limit = static_cast<std::size_t>(std::max(1, d.spec.burst_length));
    while (count < limit && count < d.dcf.tx_queue.size() && d.dcf.tx_queue[count].dst == head.dst &&
           !d.dcf.tx_queue[count].mgmt)
    {
        bytes += d.dcf.tx_queue[count].bytes;
        ++count;
    }
    const bool broadcast = head.dst == phy::kBroadcast;
    int mcs = 0;
    if (!broadcast)
        mcs = d.aimac ? rc_act(id) : d.rate.current();

    phy::Frame f;
    f.id = next_frame_++;
    f.src = id;
    f.dst = head.dst;
    f.kind = head.mgmt ? phy::FrameKind::Mgmt : phy::FrameKind::Data;
    f.payload_bytes = bytes;
    f.tx_vector = phy::TxVector{mcs, d.tx_power};
    f.start = kernel_.now();
    f.end = f.start + phy::frame_airtime(cfg_.phy.mcs(mcs), bytes, cfg_.phy);

    d.dcf.pending_frame = mac::PendingFrame{f.id, count, !broadcast};
    d.tx_active = true;
    ++d.counters.tx_attempts;
    d.counters.airtime_us += (f.end - f.start).micros;
    if (kernel_.tracing())
    {
        note("tx frame=" + std::to_string(f.id) + " kind=" + std::string(phy::to_string(f.kind)) +
             " dst=" + std::to_string(f.dst) + " mcs=" + std::to_string(mcs) + " bytes=" + std::to_string(bytes) +
             " n=" + std::to_string(count));
    }
    medium_->begin(f);
    const std::uint64_t fid = f.id;
    kernel_.schedule(f.end, sim::EventKind::TxEnd, id, [this, id, fid] { on_tx_end(id, fid); });
    update_cca();
}

void Network::on_tx_end(int id, std::uint64_t frame_id)
{
    auto ended = medium_->end(frame_id);
    const phy::Frame& f = ended.frame;
    auto& d = devices_[static_cast<std::size_t>(id)];
    d.tx_active = false;
    update_cca();
    observe(f, ended.overlaps);
    const SimTime now = kernel_.now();

    switch (f.kind)
    {
    case phy::FrameKind::Data: {
        auto& rx = devices_[static_cast<std::size_t>(f.dst)];
        const auto decision = medium_->deliver(f, f.dst, ended.overlaps, rx.rx_rng);
        const bool ok = decision.outcome == phy::Reception::Delivered;
        note(std::string("rx=") + (ok ? "ok" : "corrupt") + " frame=" + std::to_string(f.id));
        if (ok)
        {
            log_.delivered_airtime_us[static_cast<std::size_t>(id)] += (f.end - f.start).micros;
            const std::size_t n = std::min(d.dcf.pending_frame->packet_count, d.dcf.tx_queue.size());
            for (std::size_t i = 0; i < n; ++i)
                mark_delivered(d.dcf.tx_queue[i]);
            if (f.dst == dut_)
                snr_ewma_ = (1.0 - kSnrEwmaWeight) * snr_ewma_ + kSnrEwmaWeight * decision.sinr_db;
            const int rx_id = f.dst;
            const std::uint64_t fid = f.id;
            kernel_.schedule(now + timing_.sifs, sim::EventKind::TxStart, rx_id,
                             [this, rx_id, id, fid] { send_ack(rx_id, id, fid); });
        }
        d.awaiting_ack = true;
        const SimTime timeout = now + timing_.sifs + SimTime{cfg_.phy.ack_airtime_us} + timing_.ack_slack;
        d.ack_timeout = kernel_.schedule(timeout, sim::EventKind::Timer, id, [this, id] { on_ack_timeout(id); });
        break;
    }
    case phy::FrameKind::Mgmt:
        complete(id, mac::OutcomeKind::Success);
        break;
    case phy::FrameKind::Ack: {
        const int sender = f.dst;
        auto& s = devices_[static_cast<std::size_t>(sender)];
        const auto it = ack_for_.find(f.id);
        const std::uint64_t data_frame = it == ack_for_.end() ? 0 : it->second;
        if (it != ack_for_.end())
            ack_for_.erase(it);
        const auto decision = medium_->deliver(f, sender, ended.overlaps, s.rx_rng);
        const bool ok = decision.outcome == phy::Reception::Delivered;
        note(std::string("ack=") + (ok ? "ok" : "corrupt") + " for=" + std::to_string(data_frame));
        if (ok && s.awaiting_ack && s.dcf.pending_frame && s.dcf.pending_frame->frame_id == data_frame)
        {
            kernel_.cancel(s.ack_timeout);
            s.awaiting_ack = false;
            if (sender == dut_)
                snr_ewma_ = (1.0 - kSnrEwmaWeight) * snr_ewma_ + kSnrEwmaWeight * decision.sinr_db;
            complete(sender, mac::OutcomeKind::Success);
        }
        break;
    }
    }
    if (!d.busy)
        d.idle_since = std::max(d.idle_since, now);
    kick(id);
}

void Network::send_ack(int receiver, int sender, std::uint64_t data_frame)
{
    auto& r = devices_[static_cast<std::size_t>(receiver)];
    if (r.tx_active)
    {
        note("ack=skipped");
        return;
    }
    pause(receiver);
    if (kernel_.is_pending(r.access))
    {
        kernel_.cancel(r.access);
        r.access = {};
    }
    phy::Frame f;
    f.id = next_frame_++;
    f.src = receiver;
    f.dst = sender;
    f.kind = phy::FrameKind::Ack;
    f.payload_bytes = cfg_.phy.ack_bytes;
    f.tx_vector = phy::TxVector{0, r.tx_power};
    f.start = kernel_.now();
    f.end = f.start + SimTime{cfg_.phy.ack_airtime_us};
    ack_for_[f.id] = data_frame;
    r.tx_active = true;
    note("ack frame=" + std::to_string(f.id) + " for=" + std::to_string(data_frame));
    medium_->begin(f);
    const std::uint64_t fid = f.id;
    kernel_.schedule(f.end, sim::EventKind::TxEnd, receiver, [this, receiver, fid] { on_tx_end(receiver, fid); });
    update_cca();
}

void Network::on_ack_timeout(int id)
{
    auto& d = devices_[static_cast<std::size_t>(id)];
    d.ack_timeout = {};
    if (!d.awaiting_ack)
        return;
    d.awaiting_ack = false;
    note("timeout");
    complete(id, mac::OutcomeKind::AckTimeout);
}

void Network::complete(int id, mac::OutcomeKind attempt)
{
    auto& d = devices_[static_cast<std::size_t>(id)];
    const bool ok = attempt == mac::OutcomeKind::Success;
    const bool unicast = d.dcf.pending_frame && d.dcf.pending_frame->expects_ack;
    auto res = mac::on_tx_complete(d.dcf, attempt, dcf_params_, d.backoff_rng);
    const SimTime now = kernel_.now();
    if (ok)
    {
        ++d.counters.successes;
        if (unicast)
            note("acked=" + std::to_string(id));
        for (const auto& p : res.finished)
            mark_delivered(p); // broadcast frames count as delivered once sent
    }
    else
    {
        ++d.counters.ack_timeouts;
        if (res.kind == mac::OutcomeKind::DropAfterRetry)
        {
            d.counters.drops += res.finished.size();
            note("retry_drop=" + std::to_string(id) + ":" + std::to_string(res.finished.size()));
            for (const auto& p : res.finished)
                mark_dropped(p);
        }
    }
    if (unicast)
        d.rate.record(ok ? mac::OutcomeKind::Success : mac::OutcomeKind::AckTimeout);

    if (id == dut_ && unicast)
    {
        succ_ratio_ = ok ? 1.0 : 0.0;
        if (ok)
            last_self_success_ = now;
        if (agent_)
        {
            agent_->prev_outcome = ok ? qos::CaOutcome::Success : qos::CaOutcome::AckTimeout;
            if (agent_->rc_pending)
            {
                auto up = std::move(*agent_->rc_pending);
                agent_->rc_pending.reset();
                up.t_i = now;
                up.r_local = qos::rc_local_reward(succ_ratio_);
                agent_->agent.ingest(up, qos::GlobalState{}, 0.0, {});
            }
        }
    }
    if (!d.busy)
        d.idle_since = now;
    kick(id);
}

void Network::observe(const phy::Frame& f, std::span<const phy::Frame> overlaps)
{
    if (f.src == dut_ || !medium_->decodable_by(f, dut_, overlaps))
        return;
    history_.record_frame(qos::ObservedFrame{f.src, f.start, f.end, f.kind});
    const auto airtime = (f.end - f.start).micros;
    log_.dut_observed_airtime_us += airtime;
    if (f.kind != phy::FrameKind::Data)
        log_.dut_observed_mgmt_us += airtime;
    if (f.kind == phy::FrameKind::Ack && f.dst != dut_)
        last_intf_success_ = f.end;
}

// --- agents ------------------------------------------------------------------

void Network::prune_qos()
{
    const SimTime now = kernel_.now();
    while (!dut_delays_.empty() && now - dut_delays_.front().t > kQosWindow)
        dut_delays_.pop_front();
    while (!dut_losses_.empty() && now - dut_losses_.front() > kQosWindow)
        dut_losses_.pop_front();
    history_.prune(now);
}

agents::QosSnapshot Network::qos_snapshot() const
{
    agents::QosSnapshot s;
    const double n = static_cast<double>(dut_delays_.size());
    if (n > 0)
    {
        double sum = 0.0;
        for (const auto& x : dut_delays_)
            sum += x.delay_ms;
        s.delay_ms = sum / n;
        double sq = 0.0;
        for (const auto& x : dut_delays_)
            sq += (x.delay_ms - s.delay_ms) * (x.delay_ms - s.delay_ms);
        s.jitter_ms = std::sqrt(sq / n);
    }
    const double losses = static_cast<double>(dut_losses_.size());
    if (n + losses > 0)
        s.loss = losses / (n + losses);
    return s;
}

agents::RcObservation Network::rc_observation(int id) const
{
    const auto& d = devices_[static_cast<std::size_t>(id)];
    agents::RcObservation o;
    o.recent_snr_db = snr_ewma_;
    o.succ_ratio = succ_ratio_;
    if (!d.dcf.tx_queue.empty())
        o.queue_age_us = static_cast<double>((kernel_.now() - d.dcf.tx_queue.front().created_at).micros);
    return o;
}

int Network::rc_act(int id)
{
    auto& a = *agent_;
    const auto obs = rc_observation(id);
    const auto feats = obs.features();
    auto stacked = a.rc_stack.push(feats);
    const int mcs = agents::rc_trigger_and_act(stacked, agents::rc_net(*opts_.model), opts_.epsilon, a.policy_rng);
    a.last_rc = mcs;
    a.rc_pending = agents::Upload{agents::AgentId::Rc, kernel_.now(), std::move(stacked), mcs, 0.0};
    return mcs;
}

void Network::ca_trigger(int id)
{
    auto& a = *agent_;
    auto& d = devices_[static_cast<std::size_t>(id)];
    const SimTime now = kernel_.now();
    ++log_.ca_triggers;
    prune_qos();

    const std::vector<qos::DelaySample> delays(dut_delays_.begin(), dut_delays_.end());
    const std::vector<SimTime> losses(dut_losses_.begin(), dut_losses_.end());
    const auto sf = qos::extract_service_features(delays, losses, opts_.qos, now);
    const auto cf = qos::sense_channel(history_, now, kSenseWindow, id);
    const double frac = episode_fraction();

    agents::CaTriggerInputs in;
    in.now = now;
    in.busy_since_last_trigger = a.busy_seen;
    in.n_observed = cf.n_active;
    in.last_self_success = last_self_success_;
    in.last_intf_success = last_intf_success_;
    in.waited_slots = a.waited.value();
    in.qos = qos_snapshot();
    in.episode_fraction = frac;
    const auto obs = agents::ca_trigger(in);
    a.busy_seen = d.busy;

    const auto feats = obs.features();
    auto stacked = a.ca_stack.push(feats);
    const auto action =
        agents::ca_act(stacked, agents::ca_net(*opts_.model), opts_.epsilon, a.policy_rng);
    const int act = static_cast<int>(action);

    double r_local = 0.0;
    if (a.prev_action >= 0)
    {
        const auto shares = qos::airtime_shares(history_, now, kQosWindow, id);
        if (a.prev_action == static_cast<int>(agents::CaAction::Wait))
            r_local = qos::ca_local_reward(qos::CaOutcome::Waited, a.waited.value(), shares, opts_.reward);
        else
            r_local = qos::ca_local_reward(a.prev_outcome, 0, shares, opts_.reward);
    }

    qos::GlobalStateInputs gi;
    gi.service = sf;
    gi.channel = cf;
    gi.last_ca_action = a.last_ca;
    gi.last_rc_mcs = a.last_rc;
    gi.max_mcs = cfg_.phy.max_mcs();
    gi.episode_fraction = frac;
    gi.queue_fill = static_cast<double>(d.dcf.tx_queue.size()) / static_cast<double>(dcf_params_.queue_cap);
    gi.succ_ratio = succ_ratio_;
    const auto gs = qos::make_global_state(gi);
    const double r_state = qos::state_reward(sf, cf, opts_.reward);
    const auto rc_feats = rc_observation(id).features();
    const auto rc_now = a.rc_stack.peek(rc_feats);

    auto exp = a.agent.ingest(agents::Upload{agents::AgentId::Ca, now, stacked, act, r_local}, gs, r_state, rc_now);
    if (exp)
    {
        ++log_.experiences;
        if (opts_.hooks.on_reward)
        {
            RewardSample rs;
            rs.t = now;
            rs.r_state = exp->r_state;
            rs.r_ca = exp->ca_term ? exp->ca_term->reward : 0.0;
            rs.r_rc = exp->rc_term ? exp->rc_term->reward : 0.0;
            rs.r_tot = exp->r_tot;
            rs.service = sf;
            rs.utilization = cf.utilization;
            opts_.hooks.on_reward(rs);
        }
        if (opts_.hooks.on_experience)
            opts_.hooks.on_experience(*exp);
    }
    if (opts_.hooks.on_ca_decision)
        opts_.hooks.on_ca_decision(CaDecision{now, obs.waited_slots, act});
    note("ca waited=" + std::to_string(obs.waited_slots) + (action == agents::CaAction::Wait ? " act=wait" : " act=tx"));

    a.waited.on_action(action);
    a.last_ca = act;
    a.prev_action = act;
    if (action == agents::CaAction::Transmit)
    {
        transmit_data(id);
        return;
    }
    a.prev_outcome = qos::CaOutcome::Waited;
    d.access_at = now + timing_.slot;
    d.access = kernel_.schedule(d.access_at, sim::EventKind::SlotEdge, id, [this, id] { on_access(id); });
}

} // namespace

EpisodeLog simulate_episode(const env::ScenarioConfig& cfg, const EpisodeOptions& opts)
{
    Network net(cfg, opts);
    return net.run();
}

} // namespace aimac::harness
