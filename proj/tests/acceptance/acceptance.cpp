// ============================================================================
// acceptance.cpp
// End-to-end acceptance checks, one PASS/FAIL line per criterion.
// ============================================================================
//
// Runs the simulator, learner and CLI against independent oracles written
// here. Exit status is non-zero if any criterion fails.
//
// ENV: AIMAC_ACCEPT_STEPS overrides the training budget for criterion 10.
// ============================================================================

#include "aimac/agents/agents.hpp"
#include "aimac/env/scenario.hpp"
#include "aimac/env/traffic.hpp"
#include "aimac/harness/metrics.hpp"
#include "aimac/harness/network.hpp"
#include "aimac/harness/runner.hpp"
#include "aimac/harness/train.hpp"
#include "aimac/learn/qmix.hpp"
#include "aimac/qos/reward.hpp"
#include "aimac/sim/rng.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace aimac;
namespace fs = std::filesystem;

namespace
{

// ============================================================================
// UTILITIES
// ============================================================================

struct Verdict
{
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int n, const std::string& name, const std::function<Verdict()>& check)
{
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try
    {
        v = check();
    }
    catch (const std::exception& e)
    {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!v.pass)
        ++failures;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << n << ": " << name << " (" << v.detail << "; "
              << std::fixed << std::setprecision(1) << secs << " s)" << std::defaultfloat << std::endl;
}

std::string fmt(double v, int prec = 4)
{
    std::ostringstream s;
    s << std::setprecision(prec) << v;
    return s.str();
}

bool rel_close(double got, double want, double tol)
{
    if (want == 0.0)
        return std::abs(got) <= tol;
    return std::abs(got - want) <= tol * std::abs(want);
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(AIMAC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

learn::QmixModel random_model(std::uint64_t seed)
{
    learn::QmixModel m;
    sim::RngStream rng(seed, "init");
    m.init_random(rng);
    return m;
}

env::DeviceSpec make_ap(int id)
{
    env::DeviceSpec d;
    d.id = id;
    d.role = env::Role::Ap;
    d.rssi_target = -30.0;
    return d;
}

env::DeviceSpec make_sta(int id, int ap, double rssi, env::TrafficProfile p, bool dut)
{
    env::DeviceSpec d;
    d.id = id;
    d.role = env::Role::Sta;
    d.associated_with = ap;
    d.rssi_target = rssi;
    d.profiles.push_back(p);
    d.device_under_test = dut;
    return d;
}

// ============================================================================
// ORACLES
// ============================================================================

struct StatsOracle
{
    double mean = 0, pop_std = 0, loss = 0, tail = 0;
};

// Two-pass statistics in long double.
StatsOracle stats_oracle(const std::vector<double>& d, std::uint64_t generated)
{
    StatsOracle o;
    if (generated == 0)
        return o;
    o.loss = static_cast<double>(generated - d.size()) / static_cast<double>(generated);
    if (d.empty())
        return o;
    long double s = 0;
    for (double x : d)
        s += x;
    const long double m = s / d.size();
    long double ss = 0;
    std::size_t over = 0;
    for (double x : d)
    {
        ss += (x - m) * (x - m);
        over += x > 30.0;
    }
    o.mean = static_cast<double>(m);
    o.pop_std = static_cast<double>(std::sqrt(ss / d.size()));
    o.tail = static_cast<double>(over) / static_cast<double>(d.size());
    return o;
}

double jain_oracle(const std::vector<double>& x)
{
    long double s = 0, q = 0;
    for (double v : x)
        s += v, q += static_cast<long double>(v) * v;
    return q > 0 ? static_cast<double>(s * s / (x.size() * q)) : 1.0;
}

double reward_oracle(const agents::Experience& e)
{
    double r = e.r_state;
    for (const auto* term : {&e.ca_term, &e.rc_term})
    {
        if (!*term)
            continue;
        const double lag_ms = static_cast<double>(e.t.micros - (*term)->t_i.micros) / 1000.0;
        r += std::exp(lag_ms * std::log(e.gamma)) * (*term)->reward;
    }
    return r;
}

// ============================================================================
// CRITERIA
// ============================================================================

Verdict c1_determinism()
{
    const auto root = fs::current_path() / "acceptance_scratch";
    const auto a = root / "det_a", b = root / "det_b";
    fs::remove_all(root);
    double worst = 0.0;
    for (const auto& dir : {a, b})
    {
        const auto t0 = std::chrono::steady_clock::now();
        if (run_cli("eval --scenario home --policy baseline --seed 7 --trace --out " + dir.string()) != 0)
            return {false, "eval exited with an error"};
        worst = std::max(worst, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    for (const char* f : {"trace_seed7.csv", "report.csv", "report.json"})
    {
        const auto x = slurp(a / f);
        if (x.empty() || x != slurp(b / f))
            return {false, std::string(f) + " differs between runs"};
    }
    // The aimac policy is exercised in-process with a fixed random model.
    const auto cfg = env::build_scenario(env::ScenarioKind::Home, 1);
    const auto model = random_model(3);
    std::ostringstream t1, t2;
    const auto s0 = std::chrono::steady_clock::now();
    harness::run_episode(cfg, env::PolicyKind::Aimac, &model, 7, std::nullopt, &t1);
    worst = std::max(worst, std::chrono::duration<double>(std::chrono::steady_clock::now() - s0).count());
    harness::run_episode(cfg, env::PolicyKind::Aimac, &model, 7, std::nullopt, &t2);
    if (t1.str() != t2.str())
        return {false, "aimac trace differs between runs"};
    return {worst < 60.0, "traces and reports byte-identical; slowest 15 s home episode " + fmt(worst, 3) + " s"};
}

Verdict c2_metric_oracle()
{
    sim::RngStream rng(2024, "metric-oracle");
    double worst = 0.0;
    for (int set = 0; set < 1000; ++set)
    {
        const std::size_t n = rng.next_below_inclusive(400);
        std::vector<double> d(n);
        for (auto& x : d)
        {
            // Mix of light, heavy-tailed and exact-threshold delays.
            const double u = rng.next_uniform();
            x = u < 0.05 ? 30.0 : (u < 0.8 ? 10.0 * rng.next_uniform() : -20.0 * std::log(rng.next_open_uniform()));
        }
        const std::uint64_t generated = n + rng.next_below_inclusive(20);
        const auto m = harness::compute_metrics(d, generated, n);
        const auto o = stats_oracle(d, generated);
        const double errs[] = {
            o.mean == 0 ? std::abs(m.latency_ms) : std::abs(m.latency_ms - o.mean) / std::abs(o.mean),
            o.pop_std == 0 ? std::abs(m.jitter_ms) : std::abs(m.jitter_ms - o.pop_std) / std::abs(o.pop_std),
            o.loss == 0 ? std::abs(m.loss_rate) : std::abs(m.loss_rate - o.loss) / o.loss,
            o.tail == 0 ? std::abs(m.tail_prob) : std::abs(m.tail_prob - o.tail) / o.tail,
        };
        for (double e : errs)
            worst = std::max(worst, e);
    }
    return {worst <= 1e-9, "1000 delay sets, worst relative error " + fmt(worst, 3)};
}

Verdict c3_conservation()
{
    std::uint64_t episodes = 0, packets = 0;
    for (auto kind : {env::ScenarioKind::Home, env::ScenarioKind::Office, env::ScenarioKind::Mall})
    {
        for (std::uint64_t seed = 1; seed <= 3; ++seed)
        {
            const auto cfg = env::build_scenario(kind, seed);
            const auto model = random_model(seed);
            for (auto policy : {env::PolicyKind::Baseline, env::PolicyKind::Aimac})
            {
                harness::EpisodeOptions opt;
                opt.policy = policy;
                opt.model = &model;
                opt.epsilon = 0.2;
                opt.seed = seed;
                const auto log = harness::simulate_episode(cfg, opt);
                for (const auto* f : {&log.uplink, &log.downlink, &log.all})
                {
                    if (f->generated != f->delivered + f->dropped + f->queued || f->delays_ms.size() != f->delivered)
                    {
                        return {false, std::string(env::to_string(kind)) + " seed " + std::to_string(seed) +
                                           " breaks conservation"};
                    }
                }
                ++episodes;
                packets += log.all.generated;
            }
        }
    }
    return {true, std::to_string(episodes) + " episodes, " + std::to_string(packets) + " packets accounted exactly"};
}

Verdict c4_clean_channel()
{
    env::ScenarioConfig cfg;
    cfg.kind = env::ScenarioKind::Custom;
    cfg.devices.push_back(make_ap(0));
    cfg.devices.push_back(make_sta(1, 0, -45.0, env::TrafficProfile::gaming(), true));
    cfg.validate();
    double worst_latency = 0.0, worst_loss = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
    {
        const auto r = harness::run_episode(cfg, env::PolicyKind::Baseline, nullptr, seed);
        if (r.metrics.overall.empty)
            return {false, "seed " + std::to_string(seed) + " generated no traffic"};
        worst_latency = std::max(worst_latency, r.metrics.overall.latency_ms);
        worst_loss = std::max(worst_loss, r.metrics.overall.loss_rate);
    }
    return {worst_latency < 2.0 && worst_loss == 0.0,
            "20 seeds, worst mean latency " + fmt(worst_latency) + " ms, worst loss " + fmt(worst_loss)};
}

Verdict c5_fairness()
{
    env::TrafficProfile sat;
    sat.kind = env::TrafficKind::Bulk;
    sat.direction = env::Direction::Uplink;
    sat.size_mu = 1500.0;
    sat.size_beta = 1.0;
    sat.interval_mu = 0.2;
    sat.interval_beta = 0.01;

    env::ScenarioConfig cfg;
    cfg.kind = env::ScenarioKind::Custom;
    cfg.devices.push_back(make_ap(0));
    for (int i = 1; i <= 4; ++i)
        cfg.devices.push_back(make_sta(i, 0, -45.0, sat, i == 1));
    cfg.validate();

    double worst = 1.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
    {
        const auto r = harness::run_episode(cfg, env::PolicyKind::Baseline, nullptr, seed);
        std::vector<double> air;
        for (int i = 1; i <= 4; ++i)
            air.push_back(static_cast<double>(r.log.delivered_airtime_us[static_cast<std::size_t>(i)]));
        if (*std::min_element(air.begin(), air.end()) <= 0.0)
            return {false, "a station delivered nothing on seed " + std::to_string(seed)};
        // Saturation: every queue overflowed at some point.
        for (int i = 1; i <= 4; ++i)
            if (r.log.counters[static_cast<std::size_t>(i)].queue_overflows == 0)
                return {false, "station " + std::to_string(i) + " was not saturated"};
        worst = std::min(worst, jain_oracle(air));
    }
    return {worst >= 0.95, "20 seeds x 15 s, worst Jain index " + fmt(worst)};
}

Verdict c6_gumbel()
{
    const auto g = env::TrafficProfile::gaming();
    std::string detail;
    bool ok = true;
    const int n = 1000000;
    const std::pair<double, double> params[] = {{g.size_mu, g.size_beta}, {g.interval_mu, g.interval_beta}};
    for (const auto& [mu, beta] : params)
    {
        sim::RngStream rng(6, "gumbel-acceptance");
        std::vector<double> xs(n);
        long double sum = 0;
        for (auto& x : xs)
        {
            x = env::sample_gumbel(mu, beta, rng);
            sum += x;
        }
        std::nth_element(xs.begin(), xs.begin() + n / 2, xs.end());
        const double mean = static_cast<double>(sum / n);
        const double want_mean = mu + 0.5772156649015329 * beta;
        const double want_median = mu - beta * std::log(std::log(2.0));
        const bool good = rel_close(mean, want_mean, 0.01) && rel_close(xs[n / 2], want_median, 0.01);
        ok = ok && good;
        detail += "mean " + fmt(mean) + "/" + fmt(want_mean) + " median " + fmt(xs[n / 2]) + "/" +
                  fmt(want_median) + "; ";
    }
    sim::RngStream rng(6, "traffic/1/0/0/0");
    sim::SimTime now{0};
    double bytes = 0;
    const int packets = 100000;
    for (int i = 0; i < packets; ++i)
    {
        const auto d = env::next_packet(g, now, rng);
        bytes += d.bytes;
        now = d.arrival;
    }
    const double mb = bytes / packets, mi = now.as_ms() / packets;
    ok = ok && mb >= 30 && mb <= 150 && mi >= 10 && mi <= 30;
    detail += "gaming packets " + fmt(mb) + " B every " + fmt(mi) + " ms";
    return {ok, detail};
}

Verdict c7_rewards()
{
    std::uint64_t checked = 0;
    double worst = 0.0;
    for (auto kind : {env::ScenarioKind::Home, env::ScenarioKind::Office, env::ScenarioKind::Mall})
    {
        for (std::uint64_t seed = 1; seed <= 2; ++seed)
        {
            const auto cfg = env::build_scenario(kind, seed);
            const auto model = random_model(seed + 40);
            harness::EpisodeOptions opt;
            opt.policy = env::PolicyKind::Aimac;
            opt.model = &model;
            opt.epsilon = 0.3;
            opt.seed = seed;
            opt.duration = sim::seconds(5);
            opt.hooks.on_experience = [&](const agents::Experience& e) {
                const double want = reward_oracle(e);
                const double err = want == 0 ? std::abs(e.r_tot) : std::abs(e.r_tot - want) / std::abs(want);
                worst = std::max(worst, err);
                ++checked;
            };
            harness::simulate_episode(cfg, opt);
        }
    }
    // Simultaneous uploads reduce to a plain sum.
    agents::DeviceAgent agent(0.9);
    const qos::GlobalState s{};
    const std::vector<double> rc_now(learn::kRcFeatures * learn::kStackDepth, 0.0);
    const auto t = sim::microseconds(5000);
    agent.ingest({agents::AgentId::Rc, sim::microseconds(1000), rc_now, 2, 0.0}, s, 0.0, rc_now);
    agent.ingest({agents::AgentId::Ca, sim::microseconds(1000), {}, 1, 0.0}, s, 0.0, rc_now);
    agent.ingest({agents::AgentId::Rc, t, rc_now, 3, 0.5}, s, 0.0, rc_now);
    const auto e = agent.ingest({agents::AgentId::Ca, t, {}, 0, 1.5}, s, 0.8, rc_now);
    const bool plain = e && e->r_tot == 0.8 + 1.5 + 0.5;
    return {checked > 0 && worst <= 1e-12 && plain,
            std::to_string(checked) + " experiences, worst relative error " + fmt(worst, 3) +
                (plain ? ", t = t_i gives the plain sum" : ", t = t_i case wrong")};
}

Verdict c8_monotonicity()
{
    learn::QmixModel model;
    sim::RngStream rng(8, "monotonicity");
    double lowest = 1e300;
    for (int draw = 0; draw < 1000; ++draw)
    {
        // Wide parameter draws so mixing weights of both signs are produced before |.|.
        for (auto& v : model.params().values())
            v = 4.0 * rng.next_uniform() - 2.0;
        std::vector<double> state(qos::GlobalState::kDim), qs(2);
        for (auto& x : state)
            x = 4.0 * rng.next_uniform() - 2.0;
        for (auto& x : qs)
            x = 20.0 * rng.next_uniform() - 10.0;
        for (std::size_t i = 0; i < 2; ++i)
        {
            const double h = 1e-5;
            auto up = qs, dn = qs;
            up[i] += h;
            dn[i] -= h;
            lowest = std::min(lowest, (model.q_tot(up, state) - model.q_tot(dn, state)) / (2 * h));
        }
    }
    return {lowest >= -1e-9, "1000 draws, smallest dQtot/dq_i " + fmt(lowest, 3)};
}

Verdict c9_gradients()
{
    learn::QmixModel live = random_model(90), target = random_model(91);
    sim::RngStream rng(9, "gradcheck");
    auto vec = [&](std::size_t n) {
        std::vector<double> v(n);
        for (auto& x : v)
            x = rng.next_uniform();
        return v;
    };
    std::map<std::string, double> group_worst;
    std::map<std::string, std::size_t> group_nonzero;
    for (int b = 0; b < 10; ++b)
    {
        std::vector<agents::Experience> store(8);
        for (auto& e : store)
        {
            for (auto& v : e.global_state.values)
                v = rng.next_uniform();
            for (auto& v : e.next_global_state.values)
                v = rng.next_uniform();
            e.ca_obs = vec(learn::kCaFeatures * learn::kStackDepth);
            e.rc_obs = vec(learn::kRcFeatures * learn::kStackDepth);
            e.next_ca_obs = vec(learn::kCaFeatures * learn::kStackDepth);
            e.next_rc_obs = vec(learn::kRcFeatures * learn::kStackDepth);
            e.a_ca = static_cast<int>(rng.next_below_inclusive(learn::kCaActions - 1));
            e.a_rc = static_cast<int>(rng.next_below_inclusive(learn::kRcActions - 1));
            e.r_tot = 4.0 * rng.next_uniform() - 2.0;
        }
        std::vector<const agents::Experience*> batch;
        for (const auto& e : store)
            batch.push_back(&e);
        std::vector<double> grad;
        learn::qmix_loss(live, target, batch, 0.95, &grad);
        auto p = live.params().values();
        for (const auto& t : live.params().tensors())
        {
            for (std::size_t k = 0; k < t.size; ++k)
            {
                const std::size_t i = t.offset + k;
                const double h = 1e-6, keep = p[i];
                p[i] = keep + h;
                const double lp = learn::qmix_loss(live, target, batch, 0.95, nullptr);
                p[i] = keep - h;
                const double lm = learn::qmix_loss(live, target, batch, 0.95, nullptr);
                p[i] = keep;
                const double num = (lp - lm) / (2 * h);
                // Relative error with a floor so entries of ~1e-9 are not judged on rounding noise.
                const double rel = std::abs(num - grad[i]) / std::max({std::abs(num), std::abs(grad[i]), 1e-4});
                group_worst[t.name] = std::max(group_worst[t.name], rel);
                group_nonzero[t.name] += grad[i] != 0.0;
            }
        }
    }
    double worst = 0.0;
    for (const auto& [name, rel] : group_worst)
    {
        worst = std::max(worst, rel);
        if (group_nonzero[name] == 0)
            return {false, "parameter group " + name + " never received a gradient"};
    }
    return {worst <= 1e-4,
            std::to_string(group_worst.size()) + " parameter groups, 10 batches, worst relative error " + fmt(worst, 3)};
}

Verdict c10_learning()
{
    const auto office = env::build_scenario(env::ScenarioKind::Office, 1);
    const auto home = env::build_scenario(env::ScenarioKind::Home, 1);

    harness::TrainOptions opts;
    opts.env_steps = 40000;
    if (const char* s = std::getenv("AIMAC_ACCEPT_STEPS"))
        opts.env_steps = std::strtoull(s, nullptr, 10);
    opts.learn.epsilon_decay_steps = opts.env_steps / 2;
    opts.seed = 1;
    const auto trained = harness::train(office, opts);

    const auto ob = harness::evaluate(office, env::PolicyKind::Baseline, nullptr);
    const auto oa = harness::evaluate(office, env::PolicyKind::Aimac, &trained.best);
    const auto hb = harness::evaluate(home, env::PolicyKind::Baseline, nullptr);
    const auto ha = harness::evaluate(home, env::PolicyKind::Aimac, &trained.best);

    auto within = [](double got, double base) { return got <= 1.1 * base + 1e-12; };
    const bool office_ok = oa.latency_ms.mean < ob.latency_ms.mean && oa.tail_prob.mean < ob.tail_prob.mean &&
                           within(oa.jitter_ms.mean, ob.jitter_ms.mean);
    const bool home_ok = within(ha.latency_ms.mean, hb.latency_ms.mean) &&
                         within(ha.jitter_ms.mean, hb.jitter_ms.mean) &&
                         within(ha.loss_rate.mean, hb.loss_rate.mean) && within(ha.tail_prob.mean, hb.tail_prob.mean);
    std::ostringstream d;
    d << trained.env_steps << " steps; office latency " << fmt(oa.latency_ms.mean) << " vs " << fmt(ob.latency_ms.mean)
      << " ms, tail " << fmt(oa.tail_prob.mean) << " vs " << fmt(ob.tail_prob.mean) << ", jitter "
      << fmt(oa.jitter_ms.mean) << " vs " << fmt(ob.jitter_ms.mean) << " ms, loss " << fmt(oa.loss_rate.mean)
      << " vs " << fmt(ob.loss_rate.mean) << "; home latency " << fmt(ha.latency_ms.mean) << " vs "
      << fmt(hb.latency_ms.mean) << " ms, jitter " << fmt(ha.jitter_ms.mean) << " vs " << fmt(hb.jitter_ms.mean)
      << " ms, loss " << fmt(ha.loss_rate.mean) << " vs " << fmt(hb.loss_rate.mean) << ", tail "
      << fmt(ha.tail_prob.mean) << " vs " << fmt(hb.tail_prob.mean);
    return {office_ok && home_ok, d.str()};
}

Verdict c11_waited_slots()
{
    sim::RngStream pick(11, "waited-acceptance");
    const env::ScenarioKind kinds[] = {env::ScenarioKind::Home, env::ScenarioKind::Office, env::ScenarioKind::Mall};
    std::uint64_t decisions = 0;
    int longest = 0;
    for (int ep = 0; ep < 100; ++ep)
    {
        const auto kind = kinds[pick.next_below_inclusive(2)];
        const auto cfg = env::build_scenario(kind, 1 + pick.next_below_inclusive(5));
        const auto model = random_model(500 + static_cast<std::uint64_t>(ep));
        std::ostringstream trace;
        std::vector<harness::CaDecision> hooked;
        harness::EpisodeOptions opt;
        opt.policy = env::PolicyKind::Aimac;
        opt.model = &model;
        opt.epsilon = pick.next_uniform();
        opt.seed = 1000 + static_cast<std::uint64_t>(ep);
        opt.duration = sim::milliseconds(500);
        opt.trace = &trace;
        opt.hooks.on_ca_decision = [&](const harness::CaDecision& d) { hooked.push_back(d); };
        harness::simulate_episode(cfg, opt);

        // Replay: the counter must equal the number of Wait decisions since the last Transmit.
        std::istringstream in(trace.str());
        std::string line;
        int run = 0;
        std::size_t k = 0;
        while (std::getline(in, line))
        {
            const auto at = line.find("ca waited=");
            if (at == std::string::npos)
                continue;
            std::istringstream tok(line.substr(at + 10));
            int waited = -1;
            std::string act;
            tok >> waited >> act;
            if (waited != run)
                return {false, "episode " + std::to_string(ep) + ": waited_slots " + std::to_string(waited) +
                                   " after a run of " + std::to_string(run) + " waits"};
            if (k >= hooked.size() || hooked[k].waited_slots != waited ||
                hooked[k].action != (act == "act=wait" ? 1 : 0))
                return {false, "episode " + std::to_string(ep) + ": trace and decision stream disagree"};
            ++k;
            longest = std::max(longest, waited);
            run = act == "act=wait" ? run + 1 : 0;
            ++decisions;
        }
        if (k != hooked.size())
            return {false, "episode " + std::to_string(ep) + ": trace misses decisions"};
    }
    return {decisions > 0 && longest >= 2,
            "100 episodes, " + std::to_string(decisions) + " decisions, longest wait run " + std::to_string(longest)};
}

} // namespace

int main()
{
    std::cout << "aimac acceptance run" << std::endl;
    report(1, "determinism and episode runtime", c1_determinism);
    report(2, "metric oracles", c2_metric_oracle);
    report(3, "packet conservation", c3_conservation);
    report(4, "clean-channel baseline latency and loss", c4_clean_channel);
    report(5, "baseline fairness among saturated stations", c5_fairness);
    report(6, "gumbel traffic statistics", c6_gumbel);
    report(7, "total reward oracle", c7_rewards);
    report(8, "mixer monotonicity", c8_monotonicity);
    report(9, "gradient check", c9_gradients);
    report(10, "trained policy versus baseline", c10_learning);
    report(11, "waited-slot replay oracle", c11_waited_slots);
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
