#pragma once

#include "aimac/agents/experience.hpp"
#include "aimac/env/scenario.hpp"
#include "aimac/learn/qmix.hpp"
#include "aimac/mac/dcf.hpp"
#include "aimac/qos/features.hpp"
#include "aimac/qos/reward.hpp"
#include "aimac/sim/time.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace aimac::harness
{

/// One channel-access decision of the device under test.
struct CaDecision
{
    sim::SimTime t;
    int waited_slots = 0; ///< counter value fed into the observation
    int action = 0;       ///< 0 transmit, 1 wait
};

/// Reward and feature time series row, one per assembled experience.
struct RewardSample
{
    sim::SimTime t;
    double r_state = 0.0;
    double r_ca = 0.0;
    double r_rc = 0.0;
    double r_tot = 0.0;
    qos::ServiceFeatures service;
    double utilization = 0.0;
};

struct EpisodeHooks
{
    std::function<void(const agents::Experience&)> on_experience;
    std::function<void(const CaDecision&)> on_ca_decision;
    std::function<void(const RewardSample&)> on_reward;
};

struct EpisodeOptions
{
    env::PolicyKind policy = env::PolicyKind::Baseline; ///< policy of the device under test
    const learn::QmixModel* model = nullptr;            ///< required for aimac
    double epsilon = 0.0;
    std::uint64_t seed = 1;
    std::optional<sim::SimTime> duration; ///< overrides the configured duration
    std::ostream* trace = nullptr;
    qos::RewardConfig reward;
    qos::QosRequirement qos;
    EpisodeHooks hooks;
};

/// Per-flow packet accounting. Every generated packet ends the episode in
/// exactly one of delivered, dropped, or queued.
struct FlowLog
{
    std::vector<double> delays_ms; ///< delivered packets, creation to first reception
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t queued = 0;
};

struct EpisodeLog
{
    FlowLog uplink;   ///< device under test to its AP
    FlowLog downlink; ///< AP to the device under test
    FlowLog all;      ///< every packet of every device
    mac::MacCounters dut_counters;
    std::vector<mac::MacCounters> counters;             ///< per device
    std::vector<std::int64_t> delivered_airtime_us;     ///< per device, data frames received intact
    sim::SimTime duration;
    std::uint64_t events = 0;
    std::uint64_t ca_triggers = 0;
    std::uint64_t experiences = 0;
    std::uint64_t warmup_skips = 0;
    std::int64_t dut_observed_airtime_us = 0; ///< airtime decoded by the device under test
    std::int64_t dut_observed_mgmt_us = 0;    ///< of which management or control
};

/// Builds the network for `cfg`, runs it for the episode duration and returns
/// the packet and MAC accounting. Throws env::ConfigError on invalid configs and
/// std::invalid_argument if aimac is requested without a model.
EpisodeLog simulate_episode(const env::ScenarioConfig& cfg, const EpisodeOptions& opts);

} // namespace aimac::harness
