#include "aimac/env/scenario.hpp"
#include "aimac/harness/metrics.hpp"
#include "aimac/harness/network.hpp"
#include "aimac/harness/report.hpp"
#include "aimac/harness/runner.hpp"
#include "aimac/harness/train.hpp"
#include "aimac/learn/qmix.hpp"
#include "aimac/sim/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

using namespace aimac;
using namespace aimac::harness;

namespace
{

learn::QmixModel random_model(std::uint64_t seed)
{
    learn::QmixModel m;
    sim::RngStream rng(seed, "init");
    m.init_random(rng);
    return m;
}

void check_conservation(const FlowLog& f)
{
    CHECK(f.generated == f.delivered + f.dropped + f.queued);
    CHECK(f.delays_ms.size() == f.delivered);
}

std::vector<std::string> split_lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        out.push_back(line);
    return out;
}

} // namespace

TEST_CASE("metric values")
{
    const std::vector<double> d{1.0, 2.0, 3.0, 40.0};
    const auto m = compute_metrics(d, 5, 4);
    CHECK_FALSE(m.empty);
    CHECK(m.latency_ms == doctest::Approx(11.5));
    CHECK(m.jitter_ms == doctest::Approx(std::sqrt((10.5 * 10.5 + 9.5 * 9.5 + 8.5 * 8.5 + 28.5 * 28.5) / 4.0)));
    CHECK(m.loss_rate == doctest::Approx(0.2));
    CHECK(m.tail_prob == doctest::Approx(0.25));

    const auto e = compute_metrics({}, 0, 0);
    CHECK(e.empty);
    CHECK(e.loss_rate == 0.0);

    // A delay of exactly 30 ms is not beyond the tail threshold.
    const std::vector<double> edge{30.0};
    CHECK(compute_metrics(edge, 1, 1).tail_prob == 0.0);

    CHECK_THROWS_AS(compute_metrics(d, 5, 3), std::invalid_argument);
    CHECK_THROWS_AS(compute_metrics(d, 3, 4), std::invalid_argument);
}

TEST_CASE("episodes conserve packets")
{
    const auto model = random_model(3);
    for (auto kind : {env::ScenarioKind::Home, env::ScenarioKind::Office, env::ScenarioKind::Mall})
    {
        const auto cfg = env::build_scenario(kind, 2);
        for (auto policy : {env::PolicyKind::Baseline, env::PolicyKind::Aimac})
        {
            INFO(env::to_string(kind), " ", env::to_string(policy));
            EpisodeOptions opt;
            opt.policy = policy;
            opt.model = &model;
            opt.epsilon = 0.3;
            opt.seed = 4;
            opt.duration = sim::seconds(2);
            const auto log = simulate_episode(cfg, opt);
            check_conservation(log.uplink);
            check_conservation(log.downlink);
            check_conservation(log.all);
            CHECK(log.uplink.generated > 0);
            CHECK(log.downlink.generated > 0);
            CHECK(log.all.generated >= log.uplink.generated + log.downlink.generated);
        }
    }
}

TEST_CASE("episodes are deterministic")
{
    const auto cfg = env::build_scenario(env::ScenarioKind::Office, 1);
    const auto model = random_model(5);
    auto trace_of = [&](std::uint64_t seed) {
        std::ostringstream out;
        EpisodeOptions opt;
        opt.policy = env::PolicyKind::Aimac;
        opt.model = &model;
        opt.epsilon = 0.2;
        opt.seed = seed;
        opt.duration = sim::milliseconds(500);
        opt.trace = &out;
        simulate_episode(cfg, opt);
        return out.str();
    };
    const auto a = trace_of(7);
    CHECK(a == trace_of(7));
    CHECK(a != trace_of(8));

    // Event times never decrease.
    std::int64_t last = 0;
    for (const auto& line : split_lines(a))
    {
        const auto t = std::stoll(line.substr(0, line.find(',')));
        REQUIRE(t >= last);
        last = t;
    }
}

TEST_CASE("aimac without a model is rejected")
{
    const auto cfg = env::build_scenario(env::ScenarioKind::Home, 1);
    EpisodeOptions opt;
    opt.policy = env::PolicyKind::Aimac;
    CHECK_THROWS(simulate_episode(cfg, opt));
}

TEST_CASE("trace replay reproduces the reported metrics")
{
    const auto cfg = env::build_scenario(env::ScenarioKind::Office, 3);
    const auto model = random_model(2);
    for (auto policy : {env::PolicyKind::Baseline, env::PolicyKind::Aimac})
    {
        std::ostringstream trace;
        const auto r = run_episode(cfg, policy, &model, 11, sim::seconds(2), &trace);
        std::istringstream in(trace.str());
        const auto m = replay_trace(in);
        CHECK(metrics_json(m) == metrics_json(r.metrics));
    }
    std::istringstream bad("12,1,timer\n");
    CHECK_THROWS(replay_trace(bad));
}

TEST_CASE("a corrupted ack counts as a failure despite delivery")
{
    // Trace oracle: every damaged ACK must be followed by a timeout of the data sender.
    const auto cfg = env::build_scenario(env::ScenarioKind::Office, 1);
    std::ostringstream trace;
    EpisodeOptions opt;
    opt.seed = 2;
    opt.duration = sim::seconds(3);
    opt.trace = &trace;
    simulate_episode(cfg, opt);

    std::map<std::string, int> sender_of;
    std::map<int, int> waiting_timeout;
    int corrupt_acks = 0, confirmed = 0;
    for (const auto& line : split_lines(trace.str()))
    {
        std::vector<std::string> f;
        std::size_t pos = 0;
        for (int i = 0; i < 4; ++i)
        {
            const auto c = line.find(',', pos);
            f.push_back(line.substr(pos, c - pos));
            pos = c + 1;
        }
        const int dev = std::stoi(f[3]);
        const std::string detail = line.substr(pos);
        if (detail.rfind("tx frame=", 0) == 0)
        {
            const auto id = detail.substr(9, detail.find(' ', 9) - 9);
            sender_of[id] = dev;
        }
        else if (detail.rfind("ack=corrupt for=", 0) == 0)
        {
            ++corrupt_acks;
            const auto it = sender_of.find(detail.substr(16));
            REQUIRE(it != sender_of.end());
            ++waiting_timeout[it->second];
        }
        else if (detail == "timeout" && waiting_timeout[dev] > 0)
        {
            --waiting_timeout[dev];
            ++confirmed;
        }
    }
    CHECK(corrupt_acks > 0);
    CHECK(confirmed == corrupt_acks);
}

TEST_CASE("mall channel is dominated by management frames")
{
    const auto cfg = env::build_scenario(env::ScenarioKind::Mall, 1);
    EpisodeOptions opt;
    opt.seed = 1;
    opt.duration = sim::seconds(3);
    const auto log = simulate_episode(cfg, opt);
    REQUIRE(log.dut_observed_airtime_us > 0);
    CHECK(static_cast<double>(log.dut_observed_mgmt_us) / static_cast<double>(log.dut_observed_airtime_us) > 0.5);
}

TEST_CASE("experiences carry consistent rewards and increasing timestamps")
{
    const auto cfg = env::build_scenario(env::ScenarioKind::Office, 4);
    const auto model = random_model(9);
    EpisodeOptions opt;
    opt.policy = env::PolicyKind::Aimac;
    opt.model = &model;
    opt.epsilon = 0.5;
    opt.seed = 3;
    opt.duration = sim::seconds(2);
    std::vector<agents::Experience> exps;
    opt.hooks.on_experience = [&](const agents::Experience& e) { exps.push_back(e); };
    const auto log = simulate_episode(cfg, opt);
    REQUIRE(exps.size() > 100);
    CHECK(log.experiences == exps.size());
    for (std::size_t i = 0; i < exps.size(); ++i)
    {
        const auto& e = exps[i];
        if (i > 0)
            REQUIRE(e.t > exps[i - 1].t);
        REQUIRE(e.ca_term);
        REQUIRE(e.rc_term);
        double want = e.r_state;
        for (const auto& term : {e.ca_term, e.rc_term})
            want += std::exp(std::log(e.gamma) * static_cast<double>((e.t - term->t_i).micros) / 1000.0) * term->reward;
        REQUIRE(e.r_tot == doctest::Approx(want).epsilon(1e-12));
        REQUIRE(e.ca_obs.size() == learn::kCaFeatures * learn::kStackDepth);
        REQUIRE(e.rc_obs.size() == learn::kRcFeatures * learn::kStackDepth);
    }
    CHECK(experience_json(exps.front()).find("\"r_tot\"") != std::string::npos);
}

TEST_CASE("aggregation is permutation invariant")
{
    const auto cfg = env::build_scenario(env::ScenarioKind::Home, 1);
    std::vector<std::pair<std::uint64_t, EpisodeMetrics>> rows;
    for (std::uint64_t s = 1; s <= 5; ++s)
        rows.emplace_back(s, run_episode(cfg, env::PolicyKind::Baseline, nullptr, s, sim::seconds(1)).metrics);
    auto shuffled = rows;
    std::reverse(shuffled.begin(), shuffled.end());
    std::swap(shuffled[0], shuffled[2]);
    const auto a = aggregate_report("home", env::PolicyKind::Baseline, rows);
    const auto b = aggregate_report("home", env::PolicyKind::Baseline, shuffled);
    CHECK(report_json(a) == report_json(b));
    CHECK(report_csv(a) == report_csv(b));
    CHECK(a.seeds == std::vector<std::uint64_t>{1, 2, 3, 4, 5});

    double mean = 0.0;
    for (const auto& [s, m] : rows)
        mean += m.overall.latency_ms / 5.0;
    CHECK(a.latency_ms.mean == doctest::Approx(mean));

    const auto csv = split_lines(report_csv(a));
    REQUIRE(csv.size() == 6);
    CHECK(csv[0] == "seed,policy,scenario,latency_ms,jitter_ms,loss_rate,tail_prob,tx_attempts,ack_timeouts");
    CHECK(csv[1].rfind("1,baseline,home,", 0) == 0);
}

TEST_CASE("parallel evaluation matches sequential runs")
{
    const auto cfg = env::build_scenario(env::ScenarioKind::Home, 1);
    const std::vector<std::uint64_t> seeds{3, 1, 2};
    const auto rep = evaluate_seeds(cfg, env::PolicyKind::Baseline, nullptr, seeds, sim::seconds(1));
    std::vector<std::pair<std::uint64_t, EpisodeMetrics>> rows;
    for (auto s : seeds)
        rows.emplace_back(s, run_episode(cfg, env::PolicyKind::Baseline, nullptr, s, sim::seconds(1)).metrics);
    CHECK(report_json(rep) == report_json(aggregate_report("home", env::PolicyKind::Baseline, rows)));
}

TEST_CASE("training is deterministic under a fixed seed")
{
    const auto cfg = env::build_scenario(env::ScenarioKind::Home, 1);
    TrainOptions opts;
    opts.env_steps = 3000;
    opts.episode_duration = sim::seconds(2);
    opts.learning_starts = 500;
    opts.eval_every = 3;
    opts.eval_seeds = 2;
    opts.eval_duration = sim::seconds(1);
    opts.curve_every = 250;
    const auto a = train(cfg, opts);
    const auto b = train(cfg, opts);
    CHECK(a.env_steps == 3000);
    CHECK(a.updates > 0);
    REQUIRE(a.curve.size() == 12);
    CHECK(curve_csv(a.curve) == curve_csv(b.curve));
    const auto pa = a.best.params().values();
    const auto pb = b.best.params().values();
    CHECK(std::equal(pa.begin(), pa.end(), pb.begin(), pb.end()));
    CHECK(std::isfinite(a.best_score));
    CHECK(a.curve.back().epsilon == doctest::Approx(learn::epsilon_at(3000)));
}
