#include "aimac/harness/train.hpp"

#include <deque>
#include <limits>
#include <numeric>
#include <sstream>

namespace aimac::harness
{

double eval_score(const EvalReport& r)
{
    return r.latency_ms.mean + 100.0 * r.tail_prob.mean + 100.0 * r.loss_rate.mean;
}

std::vector<std::uint64_t> selection_seeds(std::size_t n)
{
    std::vector<std::uint64_t> s(n);
    std::iota(s.begin(), s.end(), 1001);
    return s;
}

namespace
{
constexpr std::size_t kRewardWindow = 1000;

double mean_of(const std::deque<double>& xs)
{
    if (xs.empty())
        return 0.0;
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}
} // namespace

TrainResult train(const env::ScenarioConfig& cfg, const TrainOptions& opts)
{
    cfg.validate();
    opts.learn.validate();
    if (opts.train_every == 0 || opts.curve_every == 0)
    {
        throw std::invalid_argument("train: train_every and curve_every must be positive");
    }

    learn::QmixModel live;
    sim::RngStream init_rng(opts.seed, "init");
    live.init_random(init_rng);
    learn::QmixModel target = learn::sync_target(live);
    learn::ReplayBuffer buffer(opts.learn.replay_capacity);
    learn::OptimizerState opt;
    sim::RngStream sample_rng(opts.seed, "replay");

    TrainResult out;
    out.initial = live;
    out.best = live;
    out.last = live;
    out.best_score = std::numeric_limits<double>::infinity();

    std::deque<double> recent;
    std::vector<double> early;
    double last_loss = 0.0;
    std::uint64_t steps = 0;

    const auto eval_seeds = selection_seeds(opts.eval_seeds);
    auto select = [&] {
        if (opts.eval_seeds == 0)
        {
            out.best = live;
            out.best_step = steps;
            return;
        }
        const auto rep = evaluate_seeds(cfg, env::PolicyKind::Aimac, &live, eval_seeds, opts.eval_duration);
        const double score = eval_score(rep);
        if (score < out.best_score)
        {
            out.best_score = score;
            out.best = live;
            out.best_step = steps;
        }
        if (opts.progress)
        {
            std::ostringstream msg;
            msg << "step " << steps << " eval score " << score << " (best " << out.best_score << " at "
                << out.best_step << ")";
            opts.progress(msg.str());
        }
    };

    while (steps < opts.env_steps)
    {
        const learn::QmixModel behaviour = live; // immutable for the episode
        EpisodeOptions ep;
        ep.policy = env::PolicyKind::Aimac;
        ep.model = &behaviour;
        ep.epsilon = learn::epsilon_at(steps, opts.learn);
        ep.seed = 10000 + out.episodes;
        ep.duration = opts.episode_duration;
        ep.hooks.on_experience = [&](const agents::Experience& e) {
            if (steps >= opts.env_steps)
                return;
            ++steps;
            recent.push_back(e.r_tot);
            if (recent.size() > kRewardWindow)
                recent.pop_front();
            if (early.size() < kRewardWindow)
                early.push_back(e.r_tot);
            buffer.push(e);

            if (buffer.size() >= std::max(opts.learning_starts, opts.learn.batch_size) &&
                steps % opts.train_every == 0)
            {
                const auto batch = buffer.sample(opts.learn.batch_size, sample_rng);
                try
                {
                    last_loss = learn::td_step(batch, live, target, opts.learn, opt).loss;
                }
                catch (const learn::TrainingError& err)
                {
                    throw learn::TrainingError(std::string(err.what()) + " at environment step " +
                                               std::to_string(steps));
                }
                ++out.updates;
                if (out.updates % opts.learn.target_sync_every == 0)
                    target = learn::sync_target(live);
            }
            if (steps % opts.curve_every == 0)
            {
                out.curve.push_back(CurvePoint{steps, last_loss, learn::epsilon_at(steps, opts.learn), mean_of(recent)});
            }
        };
        const auto log = simulate_episode(cfg, ep);
        ++out.episodes;
        if (log.experiences == 0 && steps < opts.env_steps)
        {
            throw learn::TrainingError("rollout episode produced no experiences; the device under test has no traffic");
        }
        if (out.episodes % opts.eval_every == 0 || steps >= opts.env_steps)
            select();
    }

    out.env_steps = steps;
    out.last = live;
    out.early_mean_r_tot = std::accumulate(early.begin(), early.end(), 0.0) /
                           static_cast<double>(std::max<std::size_t>(1, early.size()));
    out.late_mean_r_tot = mean_of(recent);
    return out;
}

} // namespace aimac::harness
