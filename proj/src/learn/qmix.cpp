#include "aimac/learn/qmix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace aimac::learn
{

QmixModel::QmixModel(QmixShapes shapes) : shapes_(shapes)
{
    ca_ = QNetLayout::add_to(params_, "ca", shapes_.ca);
    rc_ = QNetLayout::add_to(params_, "rc", shapes_.rc);
    mixer_ = MixerLayout::add_to(params_, "mix", shapes_.mixer);
}

void QmixModel::init_random(sim::RngStream& rng)
{
    for (const auto& t : params_.tensors())
    {
        auto v = params_.view(t.name);
        if (t.shape.size() < 2)
        {
            std::fill(v.begin(), v.end(), 0.0);
            continue;
        }
        const double bound = 1.0 / std::sqrt(static_cast<double>(t.shape[1]));
        for (double& x : v)
        {
            x = (2.0 * rng.next_uniform() - 1.0) * bound;
        }
    }
}

std::vector<double> QmixModel::ca_values(std::span<const double> stacked_obs) const
{
    return qnet_forward(ca_, params_.values(), stacked_obs);
}

std::vector<double> QmixModel::rc_values(std::span<const double> stacked_obs) const
{
    return qnet_forward(rc_, params_.values(), stacked_obs);
}

double QmixModel::q_tot(std::span<const double> agent_qs, std::span<const double> state) const
{
    return mix(mixer_, params_.values(), agent_qs, state);
}

void TrainConfig::validate() const
{
    if (!(learning_rate > 0.0) || batch_size == 0 || !(gamma_rl > 0.0 && gamma_rl <= 1.0) || target_sync_every == 0 ||
        epsilon_decay_steps == 0 || !(grad_clip_norm > 0.0) || replay_capacity == 0)
    {
        throw std::invalid_argument("train config: every field must be positive");
    }
    if (!(epsilon_end >= 0.0 && epsilon_end <= epsilon_start && epsilon_start <= 1.0))
    {
        throw std::invalid_argument("train config: epsilon must decrease within [0, 1]");
    }
}

double epsilon_at(std::uint64_t step, const TrainConfig& cfg)
{
    if (step >= cfg.epsilon_decay_steps)
    {
        return cfg.epsilon_end;
    }
    const double frac = static_cast<double>(step) / static_cast<double>(cfg.epsilon_decay_steps);
    return cfg.epsilon_start + (cfg.epsilon_end - cfg.epsilon_start) * frac;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity)
{
    if (capacity_ == 0)
    {
        throw std::invalid_argument("replay capacity must be positive");
    }
}

void ReplayBuffer::push(agents::Experience e)
{
    ++pushed_;
    if (items_.size() < capacity_)
    {
        items_.push_back(std::move(e));
        return;
    }
    items_[next_] = std::move(e);
    next_ = (next_ + 1) % capacity_;
}

std::vector<const agents::Experience*> ReplayBuffer::sample(std::size_t n, sim::RngStream& rng) const
{
    std::vector<const agents::Experience*> out;
    if (items_.empty())
    {
        return out;
    }
    n = std::min(n, items_.size());
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        out.push_back(&items_[rng.next_below_inclusive(items_.size() - 1)]);
    }
    return out;
}

double qmix_loss(const QmixModel& live, const QmixModel& target, std::span<const agents::Experience* const> batch,
                 double gamma_rl, std::vector<double>* grad)
{
    if (batch.empty())
    {
        return 0.0;
    }
    const auto live_p = live.params().values();
    const auto tgt_p = target.params().values();
    if (grad != nullptr)
    {
        grad->assign(live_p.size(), 0.0);
    }
    QNetCache ca_cache, rc_cache, tmp;
    MixerCache mix_cache, tmp_mix;
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    double loss = 0.0;
    double qs[2];
    double qn[2];
    double dq[2];

    for (const agents::Experience* e : batch)
    {
        qnet_forward(target.ca(), tgt_p, e->next_ca_obs, tmp);
        qn[0] = *std::max_element(tmp.out.begin(), tmp.out.end());
        qnet_forward(target.rc(), tgt_p, e->next_rc_obs, tmp);
        qn[1] = *std::max_element(tmp.out.begin(), tmp.out.end());
        const double q_next = mix(target.mixer(), tgt_p, qn, e->next_global_state.values, tmp_mix);
        const double y = e->r_tot + (e->done ? 0.0 : gamma_rl * q_next);

        qnet_forward(live.ca(), live_p, e->ca_obs, ca_cache);
        qnet_forward(live.rc(), live_p, e->rc_obs, rc_cache);
        const auto a_ca = static_cast<std::size_t>(e->a_ca);
        const auto a_rc = static_cast<std::size_t>(e->a_rc);
        if (a_ca >= ca_cache.out.size() || a_rc >= rc_cache.out.size())
        {
            throw DimensionError("experience action index out of range");
        }
        qs[0] = ca_cache.out[a_ca];
        qs[1] = rc_cache.out[a_rc];
        const double q = mix(live.mixer(), live_p, qs, e->global_state.values, mix_cache);
        const double err = q - y;
        loss += err * err * inv_b;

        if (grad != nullptr)
        {
            const double upstream = 2.0 * err * inv_b;
            mix_backward(live.mixer(), live_p, qs, e->global_state.values, mix_cache, upstream, *grad, dq);
            qnet_backward(live.ca(), live_p, e->ca_obs, ca_cache, a_ca, dq[0], *grad);
            qnet_backward(live.rc(), live_p, e->rc_obs, rc_cache, a_rc, dq[1], *grad);
        }
    }
    return loss;
}

TdResult td_step(std::span<const agents::Experience* const> batch, QmixModel& live, const QmixModel& target,
                 const TrainConfig& cfg, OptimizerState& opt)
{
    std::vector<double> grad;
    TdResult r;
    r.loss = qmix_loss(live, target, batch, cfg.gamma_rl, &grad);
    if (!std::isfinite(r.loss))
    {
        std::ostringstream msg;
        msg << "non-finite TD loss after " << opt.t << " updates (batch of " << batch.size() << ")";
        throw TrainingError(msg.str());
    }
    double norm_sq = 0.0;
    for (double g : grad)
        norm_sq += g * g;
    r.grad_norm = std::sqrt(norm_sq);
    if (!std::isfinite(r.grad_norm))
    {
        throw TrainingError("non-finite gradient after " + std::to_string(opt.t) + " updates");
    }
    const double scale = r.grad_norm > cfg.grad_clip_norm ? cfg.grad_clip_norm / r.grad_norm : 1.0;

    auto p = live.params().values();
    ++opt.t;
    if (cfg.optimizer == OptimizerKind::Sgd)
    {
        for (std::size_t i = 0; i < p.size(); ++i)
            p[i] -= cfg.learning_rate * scale * grad[i];
        return r;
    }
    constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    if (opt.m.size() != p.size())
    {
        opt.m.assign(p.size(), 0.0);
        opt.v.assign(p.size(), 0.0);
    }
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(opt.t));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(opt.t));
    for (std::size_t i = 0; i < p.size(); ++i)
    {
        const double g = scale * grad[i];
        opt.m[i] = b1 * opt.m[i] + (1.0 - b1) * g;
        opt.v[i] = b2 * opt.v[i] + (1.0 - b2) * g * g;
        p[i] -= cfg.learning_rate * (opt.m[i] / c1) / (std::sqrt(opt.v[i] / c2) + eps);
    }
    return r;
}

QmixModel sync_target(const QmixModel& live)
{
    return live;
}

} // namespace aimac::learn
