#pragma once

#include "aimac/agents/experience.hpp"
#include "aimac/learn/qmix.hpp"
#include "aimac/learn/qnet.hpp"
#include "aimac/qos/reward.hpp"
#include "aimac/sim/rng.hpp"
#include "aimac/sim/time.hpp"

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

namespace aimac::agents
{

struct QosSnapshot
{
    double delay_ms = 0.0;
    double jitter_ms = 0.0;
    double loss = 0.0;
};

/// Channel-access observation, taken at an idle slot edge.
struct CaObservation
{
    int busy = 0;       ///< 1 if the channel was busy since the previous trigger
    int n_observed = 0; ///< distinct sources decoded in the sensing window
    double delay_self_us = 0.0;
    double delay_intf_us = 0.0;
    int waited_slots = 0;
    QosSnapshot qos;
    double episode_fraction = 0.0;

    /// Normalized feature vector of length learn::kCaFeatures.
    std::array<double, learn::kCaFeatures> features() const;
};

/// Rate-control observation, taken while the TXVector is built.
struct RcObservation
{
    double recent_snr_db = 10.0;
    double succ_ratio = 1.0;
    double queue_age_us = 0.0;

    std::array<double, learn::kRcFeatures> features() const;
};

enum class CaAction : int
{
    Transmit = 0,
    Wait = 1,
};

enum class AgentId
{
    Ca,
    Rc,
};

struct CaTriggerInputs
{
    sim::SimTime now;
    bool busy_since_last_trigger = false;
    int n_observed = 0;
    std::optional<sim::SimTime> last_self_success;
    std::optional<sim::SimTime> last_intf_success;
    int waited_slots = 0;
    QosSnapshot qos;
    double episode_fraction = 0.0;
};

/// Builds the channel-access observation. Missing success times count from
/// the start of the episode.
CaObservation ca_trigger(const CaTriggerInputs& in);

/// Counts consecutive Wait decisions; a Transmit resets it.
class WaitedSlots
{
  public:
    int value() const noexcept { return value_; }
    void on_action(CaAction a) noexcept { value_ = a == CaAction::Wait ? value_ + 1 : 0; }

  private:
    int value_ = 0;
};

/// Keeps the last `depth` feature vectors and produces them newest-first,
/// zero-padded until the history fills.
class ObservationStack
{
  public:
    ObservationStack(std::size_t dim, std::size_t depth = learn::kStackDepth) : dim_(dim), depth_(depth) {}

    std::vector<double> push(std::span<const double> features);
    /// The stack that push() would return, without recording the features.
    std::vector<double> peek(std::span<const double> features) const;

  private:
    std::size_t dim_;
    std::size_t depth_;
    std::deque<std::vector<double>> history_;
};

/// Epsilon-greedy choice. Ties among maximal values resolve to `tie_action`
/// if it is one of them, otherwise to the lowest index.
int epsilon_greedy(std::span<const double> q, double epsilon, sim::RngStream& stream, int tie_action);

/// One agent's view of its own network. Execution only ever sees this.
struct AgentNet
{
    const learn::QNetLayout* layout = nullptr;
    std::span<const double> params;
};

AgentNet ca_net(const learn::QmixModel& model);
AgentNet rc_net(const learn::QmixModel& model);

/// Transmit/Wait decision; ties go to Wait.
CaAction ca_act(std::span<const double> stacked_obs, const AgentNet& net, double epsilon, sim::RngStream& stream);

/// MCS choice; ties go to the lowest index.
int rc_trigger_and_act(std::span<const double> stacked_obs, const AgentNet& net, double epsilon,
                       sim::RngStream& stream);

struct Upload
{
    AgentId agent = AgentId::Ca;
    sim::SimTime t_i;
    std::vector<double> observation;
    int action = 0;
    double r_local = 0.0;
};

/// Collects module-agent uploads and assembles one experience per channel-access
/// upload, pairing it with the latest rate-control upload.
class DeviceAgent
{
  public:
    explicit DeviceAgent(double gamma = 0.9) : gamma_(gamma) {}

    /// `state` and `r_state` are the global state and state reward at the
    /// upload time; `rc_obs_now` is the rate-control observation at that time.
    std::optional<Experience> ingest(const Upload& upload, const qos::GlobalState& state, double r_state,
                                     std::span<const double> rc_obs_now);

    const std::optional<Upload>& latest(AgentId id) const noexcept { return id == AgentId::Ca ? latest_ca_ : latest_rc_; }
    std::uint64_t warmup_skips() const noexcept { return warmup_skips_; }
    std::uint64_t emitted() const noexcept { return emitted_; }

  private:
    struct Pending
    {
        qos::GlobalState state;
        std::vector<double> ca_obs;
        int a_ca = 0;
    };

    double gamma_;
    std::optional<Upload> latest_ca_;
    std::optional<Upload> latest_rc_;
    std::optional<Pending> pending_;
    std::uint64_t warmup_skips_ = 0;
    std::uint64_t emitted_ = 0;
};

} // namespace aimac::agents
