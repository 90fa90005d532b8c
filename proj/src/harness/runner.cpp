#include "aimac/harness/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <thread>

namespace aimac::harness
{

EpisodeResult run_episode(const env::ScenarioConfig& cfg, env::PolicyKind policy, const learn::QmixModel* params,
                          std::uint64_t seed, std::optional<sim::SimTime> duration, std::ostream* trace)
{
    EpisodeOptions opts;
    opts.policy = policy;
    opts.model = params;
    opts.seed = seed;
    opts.duration = duration;
    opts.trace = trace;
    EpisodeResult r;
    r.seed = seed;
    r.log = simulate_episode(cfg, opts);
    r.metrics = metrics_from_log(r.log);
    return r;
}

namespace
{

template <typename F> Aggregate aggregate_field(const std::vector<const EpisodeMetrics*>& rows, F field)
{
    Aggregate a;
    if (rows.empty())
        return a;
    const double n = static_cast<double>(rows.size());
    for (const auto* m : rows)
        a.mean += field(*m);
    a.mean /= n;
    double sq = 0.0;
    for (const auto* m : rows)
    {
        const double d = field(*m) - a.mean;
        sq += d * d;
    }
    a.std = std::sqrt(sq / n);
    return a;
}

} // namespace

EvalReport aggregate_report(std::string scenario, env::PolicyKind policy,
                            std::vector<std::pair<std::uint64_t, EpisodeMetrics>> rows)
{
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    EvalReport r;
    r.scenario = std::move(scenario);
    r.policy = policy;
    std::vector<const EpisodeMetrics*> used;
    for (auto& [seed, m] : rows)
    {
        r.seeds.push_back(seed);
        r.per_seed.push_back(m);
    }
    for (const auto& m : r.per_seed)
    {
        if (!m.overall.empty)
            used.push_back(&m);
    }
    r.non_empty = used.size();
    r.latency_ms = aggregate_field(used, [](const EpisodeMetrics& m) { return m.overall.latency_ms; });
    r.jitter_ms = aggregate_field(used, [](const EpisodeMetrics& m) { return m.overall.jitter_ms; });
    r.loss_rate = aggregate_field(used, [](const EpisodeMetrics& m) { return m.overall.loss_rate; });
    r.tail_prob = aggregate_field(used, [](const EpisodeMetrics& m) { return m.overall.tail_prob; });
    r.tx_attempts =
        aggregate_field(used, [](const EpisodeMetrics& m) { return static_cast<double>(m.counters.tx_attempts); });
    r.ack_timeouts =
        aggregate_field(used, [](const EpisodeMetrics& m) { return static_cast<double>(m.counters.ack_timeouts); });
    return r;
}

unsigned eval_threads()
{
    if (const char* env = std::getenv("AIMAC_THREADS"))
    {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0)
            return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

EvalReport evaluate_seeds(const env::ScenarioConfig& cfg, env::PolicyKind policy, const learn::QmixModel* params,
                          const std::vector<std::uint64_t>& seeds, sim::SimTime duration)
{
    if (seeds.empty())
    {
        throw std::invalid_argument("evaluate: at least one seed is required");
    }
    cfg.validate();
    std::vector<EpisodeMetrics> results(seeds.size());
    std::vector<std::exception_ptr> errors(seeds.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < seeds.size(); i = next++)
        {
            try
            {
                results[i] = run_episode(cfg, policy, params, seeds[i], duration).metrics;
            }
            catch (...)
            {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n_threads = std::min<unsigned>(eval_threads(), static_cast<unsigned>(seeds.size()));
    if (n_threads <= 1)
    {
        worker();
    }
    else
    {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    for (std::size_t i = 0; i < seeds.size(); ++i)
    {
        if (!errors[i])
            continue;
        try
        {
            std::rethrow_exception(errors[i]);
        }
        catch (const std::exception& e)
        {
            throw std::runtime_error("seed " + std::to_string(seeds[i]) + ": " + e.what());
        }
    }
    std::vector<std::pair<std::uint64_t, EpisodeMetrics>> rows;
    for (std::size_t i = 0; i < seeds.size(); ++i)
        rows.emplace_back(seeds[i], results[i]);
    return aggregate_report(std::string(env::to_string(cfg.kind)), policy, std::move(rows));
}

EvalReport evaluate(const env::ScenarioConfig& cfg, env::PolicyKind policy, const learn::QmixModel* params,
                    std::size_t n_seeds, sim::SimTime duration)
{
    if (n_seeds == 0)
    {
        throw std::invalid_argument("evaluate: n_seeds must be at least 1");
    }
    std::vector<std::uint64_t> seeds;
    for (std::size_t s = 1; s <= n_seeds; ++s)
        seeds.push_back(s);
    return evaluate_seeds(cfg, policy, params, seeds, duration);
}

} // namespace aimac::harness
