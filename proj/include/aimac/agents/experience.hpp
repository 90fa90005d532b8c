#pragma once

#include "aimac/qos/reward.hpp"
#include "aimac/sim/time.hpp"

#include <optional>
#include <vector>

namespace aimac::agents
{

/// One transition assembled by the device agent from the most recent upload of
/// each module agent. Observations are the stacked feature vectors each agent
/// acted on. The provenance fields record every operand of the total reward so
/// it can be recomputed independently.
struct Experience
{
    qos::GlobalState global_state;
    std::vector<double> ca_obs;
    std::vector<double> rc_obs;
    int a_ca = 0;
    int a_rc = 0;
    double r_tot = 0.0;
    qos::GlobalState next_global_state;
    std::vector<double> next_ca_obs;
    std::vector<double> next_rc_obs;
    bool done = false;

    sim::SimTime t;
    double r_state = 0.0;
    std::optional<qos::AgentReward> ca_term;
    std::optional<qos::AgentReward> rc_term;
    double gamma = 0.9;
};

} // namespace aimac::agents
