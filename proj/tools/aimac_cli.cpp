// aimac_cli: scenario generation, training, evaluation and trace replay.
#include "aimac/env/scenario.hpp"
#include "aimac/harness/report.hpp"
#include "aimac/harness/runner.hpp"
#include "aimac/harness/train.hpp"
#include "aimac/learn/qmix.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace aimac;
namespace fs = std::filesystem;

namespace
{

env::ScenarioConfig resolve_scenario(const std::string& arg)
{
    if (fs::exists(arg))
        return env::load_scenario(arg);
    return env::build_scenario(env::scenario_kind_from_string(arg), 1);
}

sim::SimTime seconds_arg(double s)
{
    if (!(s >= 0.0) || !std::isfinite(s))
        throw CLI::ValidationError("--duration", "must be a non-negative number of seconds");
    return sim::from_ms(s * 1000.0);
}

struct EvalArgs
{
    std::string scenario;
    std::string policy = "baseline";
    std::string checkpoint;
    std::size_t seeds = 20;
    std::optional<std::uint64_t> seed;
    double duration = 15.0;
    std::string out = ".";
    bool trace = false;
};

int run_eval(const EvalArgs& a)
{
    const auto cfg = resolve_scenario(a.scenario);
    const auto policy = env::policy_from_string(a.policy);
    std::optional<learn::QmixModel> model;
    if (policy == env::PolicyKind::Aimac)
    {
        if (a.checkpoint.empty())
            throw std::runtime_error("--policy aimac requires --checkpoint");
        model = learn::load_checkpoint(a.checkpoint);
    }
    const learn::QmixModel* params = model ? &*model : nullptr;
    const auto duration = seconds_arg(a.duration);
    std::vector<std::uint64_t> seeds;
    if (a.seed)
        seeds.push_back(*a.seed);
    else
        for (std::uint64_t s = 1; s <= a.seeds; ++s)
            seeds.push_back(s);

    harness::EvalReport report;
    if (a.trace)
    {
        std::vector<std::pair<std::uint64_t, harness::EpisodeMetrics>> rows;
        for (auto s : seeds)
        {
            std::ostringstream trace;
            auto r = harness::run_episode(cfg, policy, params, s, duration, &trace);
            harness::write_text(fs::path(a.out) / ("trace_seed" + std::to_string(s) + ".csv"), trace.str());
            rows.emplace_back(s, r.metrics);
        }
        report = harness::aggregate_report(std::string(env::to_string(cfg.kind)), policy, std::move(rows));
    }
    else
    {
        report = harness::evaluate_seeds(cfg, policy, params, seeds, duration);
    }
    harness::write_report(report, a.out);
    std::cout << "scenario " << report.scenario << " policy " << env::to_string(policy) << " seeds "
              << report.seeds.size() << "\n"
              << "latency_ms " << report.latency_ms.mean << " jitter_ms " << report.jitter_ms.mean << " loss_rate "
              << report.loss_rate.mean << " tail_prob " << report.tail_prob.mean << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"AI-MAC simulator: generate scenarios, train, evaluate, replay traces"};
    app.require_subcommand(1);

    auto* scenario = app.add_subcommand("scenario", "Scenario configuration tools");
    scenario->require_subcommand(1);
    auto* gen = scenario->add_subcommand("gen", "Write a generated scenario configuration");
    std::string gen_kind;
    std::uint64_t gen_seed = 1;
    std::string gen_out = ".";
    gen->add_option("kind", gen_kind, "home, office or mall")->required();
    gen->add_option("--seed", gen_seed, "Generation seed");
    gen->add_option("--out", gen_out, "Output directory");

    auto* train = app.add_subcommand("train", "Train AI-MAC agents");
    std::string train_scenario = "office";
    std::string train_out = "run";
    std::uint64_t train_seed = 1;
    std::uint64_t train_steps = 100000;
    double train_duration = 5.0;
    train->add_option("--scenario", train_scenario, "Scenario file or kind");
    train->add_option("--out", train_out, "Output directory");
    train->add_option("--seed", train_seed, "Training seed");
    train->add_option("--steps", train_steps, "Environment steps");
    train->add_option("--duration", train_duration, "Rollout episode length in seconds");

    auto* eval = app.add_subcommand("eval", "Evaluate a policy over seeds");
    EvalArgs ea;
    eval->add_option("--scenario", ea.scenario, "Scenario file or kind")->required();
    eval->add_option("--policy", ea.policy, "baseline or aimac")->check(CLI::IsMember({"baseline", "aimac"}));
    eval->add_option("--checkpoint", ea.checkpoint, "Trained parameters");
    auto* seeds_opt = eval->add_option("--seeds", ea.seeds, "Run seeds 1..N")->check(CLI::PositiveNumber);
    eval->add_option("--seed", ea.seed, "Run the single seed N")->excludes(seeds_opt);
    eval->add_option("--duration", ea.duration, "Episode length in seconds");
    eval->add_option("--out", ea.out, "Output directory");
    eval->add_flag("--trace", ea.trace, "Write one event trace per seed");

    auto* replay = app.add_subcommand("replay", "Recompute metrics from an event trace");
    std::string replay_file;
    std::string replay_out;
    replay->add_option("trace", replay_file, "Trace file")->required()->check(CLI::ExistingFile);
    replay->add_option("--out", replay_out, "Directory for replay.json");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try
    {
        if (gen->parsed())
        {
            const auto kind = env::scenario_kind_from_string(gen_kind);
            const auto cfg = env::build_scenario(kind, gen_seed);
            const fs::path path = fs::path(gen_out) / (gen_kind + "_seed" + std::to_string(gen_seed) + ".json");
            fs::create_directories(gen_out);
            env::save_scenario(cfg, path);
            std::cout << path.string() << "\n";
        }
        else if (train->parsed())
        {
            const auto cfg = resolve_scenario(train_scenario);
            harness::TrainOptions opts;
            opts.seed = train_seed;
            opts.env_steps = train_steps;
            opts.episode_duration = seconds_arg(train_duration);
            opts.progress = [](const std::string& s) { std::cerr << s << "\n"; };
            const auto result = harness::train(cfg, opts);
            fs::create_directories(train_out);
            learn::save_checkpoint(result.best, fs::path(train_out) / "best.ckpt");
            learn::save_checkpoint(result.last, fs::path(train_out) / "last.ckpt");
            harness::write_text(fs::path(train_out) / "curve.csv", harness::curve_csv(result.curve));
            std::cout << "steps " << result.env_steps << " updates " << result.updates << " episodes "
                      << result.episodes << " best step " << result.best_step << "\n";
        }
        else if (eval->parsed())
        {
            return run_eval(ea);
        }
        else if (replay->parsed())
        {
            std::ifstream in(replay_file);
            const auto m = harness::replay_trace(in);
            const auto text = harness::metrics_json(m);
            if (!replay_out.empty())
                harness::write_text(fs::path(replay_out) / "replay.json", text);
            std::cout << text;
        }
    }
    catch (const CLI::ParseError& e)
    {
        std::cerr << e.what() << "\n" << app.help();
        return 1;
    }
    catch (const std::invalid_argument& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
