#pragma once

#include "aimac/agents/experience.hpp"
#include "aimac/learn/params.hpp"
#include "aimac/learn/qnet.hpp"
#include "aimac/sim/rng.hpp"

#include <cstdint>
#include <deque>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aimac::learn
{

inline constexpr std::size_t kStackDepth = 4;
inline constexpr std::size_t kCaFeatures = 9;
inline constexpr std::size_t kRcFeatures = 3;
inline constexpr std::size_t kCaActions = 2;
inline constexpr std::size_t kRcActions = 12;

struct QmixShapes
{
    QNetShape ca{kCaFeatures * kStackDepth, 64, kCaActions};
    QNetShape rc{kRcFeatures * kStackDepth, 64, kRcActions};
    MixerShape mixer{2, 12, 32, 32};
};

/// Channel-access and rate-control Q-networks plus the mixing network, all in
/// one flat ParamSet. Copying a model deep-copies its parameters.
class QmixModel
{
  public:
    explicit QmixModel(QmixShapes shapes = {});

    /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases.
    void init_random(sim::RngStream& rng);

    const QmixShapes& shapes() const noexcept { return shapes_; }
    ParamSet& params() noexcept { return params_; }
    const ParamSet& params() const noexcept { return params_; }
    const QNetLayout& ca() const noexcept { return ca_; }
    const QNetLayout& rc() const noexcept { return rc_; }
    const MixerLayout& mixer() const noexcept { return mixer_; }

    std::vector<double> ca_values(std::span<const double> stacked_obs) const;
    std::vector<double> rc_values(std::span<const double> stacked_obs) const;
    double q_tot(std::span<const double> agent_qs, std::span<const double> state) const;

  private:
    QmixShapes shapes_;
    ParamSet params_;
    QNetLayout ca_;
    QNetLayout rc_;
    MixerLayout mixer_;
};

enum class OptimizerKind
{
    Sgd,
    Adam,
};

struct TrainConfig
{
    double learning_rate = 5e-4;
    std::size_t batch_size = 64;
    double gamma_rl = 0.95;
    std::size_t target_sync_every = 200;
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    std::uint64_t epsilon_decay_steps = 50000;
    double grad_clip_norm = 10.0;
    OptimizerKind optimizer = OptimizerKind::Sgd;
    std::size_t replay_capacity = 50000;

    /// Throws std::invalid_argument if any field is out of range.
    void validate() const;
};

/// Linear schedule from epsilon_start to epsilon_end, then constant.
double epsilon_at(std::uint64_t step, const TrainConfig& cfg = {});

class TrainingError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Fixed-capacity ring of experiences with uniform sampling.
class ReplayBuffer
{
  public:
    explicit ReplayBuffer(std::size_t capacity = 50000);

    void push(agents::Experience e);
    std::size_t size() const noexcept { return items_.size(); }
    std::size_t capacity() const noexcept { return capacity_; }
    std::uint64_t total_pushed() const noexcept { return pushed_; }
    const agents::Experience& at(std::size_t i) const { return items_.at(i); }

    /// min(n, size()) experiences drawn uniformly with replacement.
    std::vector<const agents::Experience*> sample(std::size_t n, sim::RngStream& rng) const;

  private:
    std::size_t capacity_;
    std::vector<agents::Experience> items_;
    std::size_t next_ = 0;
    std::uint64_t pushed_ = 0;
};

/// Mean squared TD error over the batch. The target uses each agent's greedy
/// action under the target networks on the next observations. When `grad` is
/// non-null it receives dLoss/dParams (same layout as live.params()).
double qmix_loss(const QmixModel& live, const QmixModel& target, std::span<const agents::Experience* const> batch,
                 double gamma_rl, std::vector<double>* grad);

struct OptimizerState
{
    std::vector<double> m;
    std::vector<double> v;
    std::uint64_t t = 0;
};

struct TdResult
{
    double loss = 0.0;
    double grad_norm = 0.0;
};

/// One gradient step on `live`. Throws TrainingError on a non-finite loss.
TdResult td_step(std::span<const agents::Experience* const> batch, QmixModel& live, const QmixModel& target,
                 const TrainConfig& cfg, OptimizerState& opt);

/// Deep copy of the live parameters.
QmixModel sync_target(const QmixModel& live);

void save_checkpoint(const QmixModel& model, const std::filesystem::path& path);
QmixModel load_checkpoint(const std::filesystem::path& path);

} // namespace aimac::learn
