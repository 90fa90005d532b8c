#pragma once

#include "aimac/env/scenario.hpp"
#include "aimac/harness/runner.hpp"
#include "aimac/learn/qmix.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace aimac::harness
{

struct TrainOptions
{
    learn::TrainConfig learn;
    std::uint64_t env_steps = 100000; ///< channel-access decisions to collect
    sim::SimTime episode_duration = sim::seconds(5);
    std::size_t train_every = 2;       ///< environment steps per gradient step
    std::size_t learning_starts = 1000; ///< replay size before the first gradient step
    std::size_t eval_every = 10;        ///< rollout episodes between greedy evaluations
    std::size_t eval_seeds = 4;
    sim::SimTime eval_duration = sim::seconds(5);
    std::size_t curve_every = 500; ///< environment steps between curve points
    std::uint64_t seed = 1;
    std::function<void(const std::string&)> progress;
};

struct CurvePoint
{
    std::uint64_t step = 0;
    double loss = 0.0;
    double epsilon = 0.0;
    double mean_r_tot = 0.0; ///< moving average over the last 1000 experiences
};

struct TrainResult
{
    learn::QmixModel initial;
    learn::QmixModel best;
    learn::QmixModel last;
    double best_score = 0.0;
    std::uint64_t best_step = 0;
    std::vector<CurvePoint> curve;
    std::uint64_t env_steps = 0;
    std::uint64_t updates = 0;
    std::uint64_t episodes = 0;
    double early_mean_r_tot = 0.0; ///< first 1000 experiences
    double late_mean_r_tot = 0.0;  ///< last 1000 experiences
};

/// Lower is better: mean latency (ms) + 100 * tail probability + 100 * loss.
double eval_score(const EvalReport& r);

/// Seeds held out for checkpoint selection.
std::vector<std::uint64_t> selection_seeds(std::size_t n);

/// Alternates epsilon-greedy rollout episodes (seeds 10000, 10001, ...) with
/// gradient steps on replayed experiences, and keeps the parameters with the
/// best greedy score on the selection seeds. Throws learn::TrainingError on a
/// non-finite loss.
TrainResult train(const env::ScenarioConfig& cfg, const TrainOptions& opts);

} // namespace aimac::harness
