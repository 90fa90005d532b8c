#pragma once

#include "aimac/env/scenario.hpp"
#include "aimac/harness/metrics.hpp"
#include "aimac/harness/network.hpp"
#include "aimac/learn/qmix.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace aimac::harness
{

struct EpisodeResult
{
    std::uint64_t seed = 0;
    EpisodeMetrics metrics;
    EpisodeLog log;
};

/// One greedy episode (epsilon 0). `params` is required for aimac.
EpisodeResult run_episode(const env::ScenarioConfig& cfg, env::PolicyKind policy, const learn::QmixModel* params,
                          std::uint64_t seed, std::optional<sim::SimTime> duration = std::nullopt,
                          std::ostream* trace = nullptr);

struct Aggregate
{
    double mean = 0.0;
    double std = 0.0; ///< population standard deviation across seeds
};

struct EvalReport
{
    std::string scenario;
    env::PolicyKind policy = env::PolicyKind::Baseline;
    std::vector<std::uint64_t> seeds;
    std::vector<EpisodeMetrics> per_seed; ///< parallel to seeds, ascending seed order
    std::size_t non_empty = 0;            ///< episodes that generated traffic
    Aggregate latency_ms;
    Aggregate jitter_ms;
    Aggregate loss_rate;
    Aggregate tail_prob;
    Aggregate tx_attempts;
    Aggregate ack_timeouts;
};

/// Aggregates per-seed results. Rows are ordered by seed first, so the result
/// does not depend on the order they are passed in. Empty episodes are listed
/// but excluded from the means.
EvalReport aggregate_report(std::string scenario, env::PolicyKind policy,
                            std::vector<std::pair<std::uint64_t, EpisodeMetrics>> rows);

/// Worker count for evaluations: AIMAC_THREADS if set and positive, else the
/// hardware concurrency.
unsigned eval_threads();

/// Runs `seeds` episodes in parallel and aggregates them. Errors carry the
/// seed that raised them.
EvalReport evaluate_seeds(const env::ScenarioConfig& cfg, env::PolicyKind policy, const learn::QmixModel* params,
                          const std::vector<std::uint64_t>& seeds, sim::SimTime duration);

/// Seeds 1..n_seeds.
EvalReport evaluate(const env::ScenarioConfig& cfg, env::PolicyKind policy, const learn::QmixModel* params,
                    std::size_t n_seeds = 20, sim::SimTime duration = sim::seconds(15));

} // namespace aimac::harness
