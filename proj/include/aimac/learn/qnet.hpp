#pragma once

#include "aimac/learn/params.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aimac::learn
{

class DimensionError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

// --- per-agent action-value network -------------------------------------------

struct QNetShape
{
    std::size_t in = 1;
    std::size_t hidden = 64;
    std::size_t out = 1;
};

/// Offsets of a two-layer network inside a ParamSet:
/// w1 [hidden x in], b1 [hidden], w2 [out x hidden], b2 [out].
struct QNetLayout
{
    QNetShape shape;
    std::size_t w1 = 0, b1 = 0, w2 = 0, b2 = 0;

    static QNetLayout add_to(ParamSet& params, const std::string& prefix, QNetShape shape);
};

struct QNetCache
{
    std::vector<double> pre;    ///< hidden pre-activations
    std::vector<double> hidden; ///< rectified hidden units
    std::vector<double> out;    ///< action values
};

/// affine -> rectifier -> affine. Throws DimensionError on input size mismatch.
void qnet_forward(const QNetLayout& net, std::span<const double> params, std::span<const double> input,
                  QNetCache& cache);
std::vector<double> qnet_forward(const QNetLayout& net, std::span<const double> params,
                                 std::span<const double> input);

/// Accumulates d(out[action])/d(params) * upstream into grad.
void qnet_backward(const QNetLayout& net, std::span<const double> params, std::span<const double> input,
                   const QNetCache& cache, std::size_t action, double upstream, std::span<double> grad);

// --- monotonic mixing network ----------------------------------------------------

struct MixerShape
{
    std::size_t n_agents = 2;
    std::size_t state_dim = 12;
    std::size_t embed = 32;
    std::size_t hyper_hidden = 32;
};

/// Hypernetworks conditioned on the global state:
///   W1 = |Aw1 s + cw1|  (n_agents x embed)   b1 = Ab1 s + cb1
///   W2 = |Aw2 s + cw2|  (embed)              b2 = v2 . relu(V1 s + e1) + e2
struct MixerLayout
{
    MixerShape shape;
    std::size_t hw1_w = 0, hw1_b = 0, hb1_w = 0, hb1_b = 0, hw2_w = 0, hw2_b = 0;
    std::size_t hv_w1 = 0, hv_b1 = 0, hv_w2 = 0, hv_b2 = 0;

    static MixerLayout add_to(ParamSet& params, const std::string& prefix, MixerShape shape);
};

struct MixerCache
{
    std::vector<double> raw_w1; ///< hypernet output before |.|, agent-major
    std::vector<double> b1;
    std::vector<double> raw_w2;
    std::vector<double> hv_pre;
    std::vector<double> z; ///< mixing hidden pre-activations
    double q_tot = 0.0;
};

/// Q_tot = |W2| . relu(|W1|^T q + b1) + b2.
double mix(const MixerLayout& mixer, std::span<const double> params, std::span<const double> agent_qs,
           std::span<const double> state, MixerCache& cache);
double mix(const MixerLayout& mixer, std::span<const double> params, std::span<const double> agent_qs,
           std::span<const double> state);

/// Accumulates upstream * dQ_tot/d(params) into grad and writes
/// upstream * dQ_tot/d(q_i) into dq.
void mix_backward(const MixerLayout& mixer, std::span<const double> params, std::span<const double> agent_qs,
                  std::span<const double> state, const MixerCache& cache, double upstream, std::span<double> grad,
                  std::span<double> dq);

} // namespace aimac::learn
