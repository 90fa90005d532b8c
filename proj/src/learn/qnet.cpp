#include "aimac/learn/qnet.hpp"

#include <cmath>

namespace aimac::learn
{

namespace
{
inline double sign_of(double x) noexcept
{
    return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
}
} // namespace

QNetLayout QNetLayout::add_to(ParamSet& params, const std::string& prefix, QNetShape shape)
{
    QNetLayout l;
    l.shape = shape;
    l.w1 = params.add(prefix + ".w1", {shape.hidden, shape.in});
    l.b1 = params.add(prefix + ".b1", {shape.hidden});
    l.w2 = params.add(prefix + ".w2", {shape.out, shape.hidden});
    l.b2 = params.add(prefix + ".b2", {shape.out});
    return l;
}

void qnet_forward(const QNetLayout& net, std::span<const double> params, std::span<const double> input,
                  QNetCache& cache)
{
    const auto& s = net.shape;
    if (input.size() != s.in)
    {
        throw DimensionError("qnet input has " + std::to_string(input.size()) + " features, expected " +
                             std::to_string(s.in));
    }
    cache.pre.assign(s.hidden, 0.0);
    cache.hidden.assign(s.hidden, 0.0);
    cache.out.assign(s.out, 0.0);
    const double* w1 = params.data() + net.w1;
    const double* b1 = params.data() + net.b1;
    for (std::size_t h = 0; h < s.hidden; ++h)
    {
        double acc = b1[h];
        const double* row = w1 + h * s.in;
        for (std::size_t i = 0; i < s.in; ++i)
            acc += row[i] * input[i];
        cache.pre[h] = acc;
        cache.hidden[h] = acc > 0.0 ? acc : 0.0;
    }
    const double* w2 = params.data() + net.w2;
    const double* b2 = params.data() + net.b2;
    for (std::size_t o = 0; o < s.out; ++o)
    {
        double acc = b2[o];
        const double* row = w2 + o * s.hidden;
        for (std::size_t h = 0; h < s.hidden; ++h)
            acc += row[h] * cache.hidden[h];
        cache.out[o] = acc;
    }
}

std::vector<double> qnet_forward(const QNetLayout& net, std::span<const double> params,
                                 std::span<const double> input)
{
    QNetCache cache;
    qnet_forward(net, params, input, cache);
    return cache.out;
}

void qnet_backward(const QNetLayout& net, std::span<const double> params, std::span<const double> input,
                   const QNetCache& cache, std::size_t action, double upstream, std::span<double> grad)
{
    const auto& s = net.shape;
    const double* w2row = params.data() + net.w2 + action * s.hidden;
    double* gw2row = grad.data() + net.w2 + action * s.hidden;
    grad[net.b2 + action] += upstream;
    double* gw1 = grad.data() + net.w1;
    double* gb1 = grad.data() + net.b1;
    for (std::size_t h = 0; h < s.hidden; ++h)
    {
        gw2row[h] += upstream * cache.hidden[h];
        if (cache.pre[h] <= 0.0)
            continue;
        const double dpre = upstream * w2row[h];
        gb1[h] += dpre;
        double* grow = gw1 + h * s.in;
        for (std::size_t i = 0; i < s.in; ++i)
            grow[i] += dpre * input[i];
    }
}

MixerLayout MixerLayout::add_to(ParamSet& params, const std::string& prefix, MixerShape shape)
{
    MixerLayout l;
    l.shape = shape;
    l.hw1_w = params.add(prefix + ".hyper_w1.w", {shape.n_agents * shape.embed, shape.state_dim});
    l.hw1_b = params.add(prefix + ".hyper_w1.b", {shape.n_agents * shape.embed});
    l.hb1_w = params.add(prefix + ".hyper_b1.w", {shape.embed, shape.state_dim});
    l.hb1_b = params.add(prefix + ".hyper_b1.b", {shape.embed});
    l.hw2_w = params.add(prefix + ".hyper_w2.w", {shape.embed, shape.state_dim});
    l.hw2_b = params.add(prefix + ".hyper_w2.b", {shape.embed});
    l.hv_w1 = params.add(prefix + ".hyper_b2.w1", {shape.hyper_hidden, shape.state_dim});
    l.hv_b1 = params.add(prefix + ".hyper_b2.b1", {shape.hyper_hidden});
    l.hv_w2 = params.add(prefix + ".hyper_b2.w2", {1, shape.hyper_hidden});
    l.hv_b2 = params.add(prefix + ".hyper_b2.b2", {1});
    return l;
}

namespace
{
// out[r] = b[r] + sum_c W[r, c] * x[c]
void affine(const double* w, const double* b, std::span<const double> x, std::size_t rows, double* out)
{
    const std::size_t cols = x.size();
    for (std::size_t r = 0; r < rows; ++r)
    {
        double acc = b[r];
        const double* row = w + r * cols;
        for (std::size_t c = 0; c < cols; ++c)
            acc += row[c] * x[c];
        out[r] = acc;
    }
}
} // namespace

double mix(const MixerLayout& m, std::span<const double> params, std::span<const double> agent_qs,
           std::span<const double> state, MixerCache& cache)
{
    const auto& s = m.shape;
    if (agent_qs.size() != s.n_agents || state.size() != s.state_dim)
    {
        throw DimensionError("mixer input dimension mismatch");
    }
    const double* p = params.data();
    cache.raw_w1.resize(s.n_agents * s.embed);
    cache.b1.resize(s.embed);
    cache.raw_w2.resize(s.embed);
    cache.hv_pre.resize(s.hyper_hidden);
    cache.z.resize(s.embed);

    affine(p + m.hw1_w, p + m.hw1_b, state, s.n_agents * s.embed, cache.raw_w1.data());
    affine(p + m.hb1_w, p + m.hb1_b, state, s.embed, cache.b1.data());
    affine(p + m.hw2_w, p + m.hw2_b, state, s.embed, cache.raw_w2.data());
    affine(p + m.hv_w1, p + m.hv_b1, state, s.hyper_hidden, cache.hv_pre.data());

    double b2 = p[m.hv_b2];
    for (std::size_t k = 0; k < s.hyper_hidden; ++k)
    {
        if (cache.hv_pre[k] > 0.0)
            b2 += p[m.hv_w2 + k] * cache.hv_pre[k];
    }

    double q = b2;
    for (std::size_t j = 0; j < s.embed; ++j)
    {
        double z = cache.b1[j];
        for (std::size_t i = 0; i < s.n_agents; ++i)
            z += std::abs(cache.raw_w1[i * s.embed + j]) * agent_qs[i];
        cache.z[j] = z;
        if (z > 0.0)
            q += std::abs(cache.raw_w2[j]) * z;
    }
    cache.q_tot = q;
    return q;
}

double mix(const MixerLayout& mixer, std::span<const double> params, std::span<const double> agent_qs,
           std::span<const double> state)
{
    MixerCache cache;
    return mix(mixer, params, agent_qs, state, cache);
}

void mix_backward(const MixerLayout& m, std::span<const double> params, std::span<const double> agent_qs,
                  std::span<const double> state, const MixerCache& cache, double upstream, std::span<double> grad,
                  std::span<double> dq)
{
    const auto& s = m.shape;
    const double* p = params.data();
    double* g = grad.data();
    const std::size_t sd = s.state_dim;

    for (std::size_t i = 0; i < s.n_agents; ++i)
        dq[i] = 0.0;

    // b2 hypernet
    g[m.hv_b2] += upstream;
    for (std::size_t k = 0; k < s.hyper_hidden; ++k)
    {
        if (cache.hv_pre[k] <= 0.0)
            continue;
        g[m.hv_w2 + k] += upstream * cache.hv_pre[k];
        const double dpre = upstream * p[m.hv_w2 + k];
        g[m.hv_b1 + k] += dpre;
        double* row = g + m.hv_w1 + k * sd;
        for (std::size_t c = 0; c < sd; ++c)
            row[c] += dpre * state[c];
    }

    for (std::size_t j = 0; j < s.embed; ++j)
    {
        const double z = cache.z[j];
        const double a = z > 0.0 ? z : 0.0;
        // W2 hypernet
        const double draw2 = upstream * a * sign_of(cache.raw_w2[j]);
        if (draw2 != 0.0)
        {
            g[m.hw2_b + j] += draw2;
            double* row = g + m.hw2_w + j * sd;
            for (std::size_t c = 0; c < sd; ++c)
                row[c] += draw2 * state[c];
        }
        if (z <= 0.0)
            continue;
        const double dz = upstream * std::abs(cache.raw_w2[j]);
        // b1 hypernet
        g[m.hb1_b + j] += dz;
        double* brow = g + m.hb1_w + j * sd;
        for (std::size_t c = 0; c < sd; ++c)
            brow[c] += dz * state[c];
        // W1 hypernet and agent inputs
        for (std::size_t i = 0; i < s.n_agents; ++i)
        {
            const std::size_t r = i * s.embed + j;
            const double raw = cache.raw_w1[r];
            dq[i] += dz * std::abs(raw);
            const double draw1 = dz * agent_qs[i] * sign_of(raw);
            if (draw1 == 0.0)
                continue;
            g[m.hw1_b + r] += draw1;
            double* row = g + m.hw1_w + r * sd;
            for (std::size_t c = 0; c < sd; ++c)
                row[c] += draw1 * state[c];
        }
    }
}

} // namespace aimac::learn
