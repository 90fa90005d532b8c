#include "aimac/harness/report.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace aimac::harness
{

using nlohmann::json;

namespace
{

std::string num(double v)
{
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

json metric_set(const MetricSet& m)
{
    return json{{"empty", m.empty},          {"latency_ms", m.latency_ms}, {"jitter_ms", m.jitter_ms},
                {"loss_rate", m.loss_rate},  {"tail_prob", m.tail_prob},   {"generated", m.generated},
                {"delivered", m.delivered}};
}

json aggregate(const Aggregate& a)
{
    return json{{"mean", a.mean}, {"std", a.std}};
}

json episode(const EpisodeMetrics& m)
{
    return json{{"overall", metric_set(m.overall)},
                {"uplink", metric_set(m.uplink)},
                {"downlink", metric_set(m.downlink)},
                {"dropped", m.dropped},
                {"queued", m.queued},
                {"tx_attempts", m.counters.tx_attempts},
                {"ack_timeouts", m.counters.ack_timeouts},
                {"successes", m.counters.successes},
                {"drops", m.counters.drops}};
}

} // namespace

std::string report_csv(const EvalReport& r)
{
    std::ostringstream out;
    out << "seed,policy,scenario,latency_ms,jitter_ms,loss_rate,tail_prob,tx_attempts,ack_timeouts\n";
    for (std::size_t i = 0; i < r.seeds.size(); ++i)
    {
        const auto& m = r.per_seed[i];
        out << r.seeds[i] << ',' << env::to_string(r.policy) << ',' << r.scenario << ',' << num(m.overall.latency_ms)
            << ',' << num(m.overall.jitter_ms) << ',' << num(m.overall.loss_rate) << ','
            << num(m.overall.tail_prob) << ',' << m.counters.tx_attempts << ',' << m.counters.ack_timeouts << '\n';
    }
    return out.str();
}

std::string report_json(const EvalReport& r)
{
    json rows = json::array();
    for (std::size_t i = 0; i < r.seeds.size(); ++i)
    {
        json row = episode(r.per_seed[i]);
        row["seed"] = r.seeds[i];
        rows.push_back(row);
    }
    json j{{"scenario", r.scenario},
           {"policy", env::to_string(r.policy)},
           {"seeds", r.seeds},
           {"seed_count", r.seeds.size()},
           {"non_empty", r.non_empty},
           {"latency_ms", aggregate(r.latency_ms)},
           {"jitter_ms", aggregate(r.jitter_ms)},
           {"loss_rate", aggregate(r.loss_rate)},
           {"tail_prob", aggregate(r.tail_prob)},
           {"tx_attempts", aggregate(r.tx_attempts)},
           {"ack_timeouts", aggregate(r.ack_timeouts)},
           {"per_seed", rows}};
    return j.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
}

void write_report(const EvalReport& r, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    write_text(dir / "report.csv", report_csv(r));
    write_text(dir / "report.json", report_json(r));
}

std::string curve_csv(const std::vector<CurvePoint>& curve)
{
    std::ostringstream out;
    out << "step,loss,epsilon,mean_r_tot\n";
    for (const auto& c : curve)
        out << c.step << ',' << num(c.loss) << ',' << num(c.epsilon) << ',' << num(c.mean_r_tot) << '\n';
    return out.str();
}

std::string reward_csv(const std::vector<RewardSample>& rows)
{
    std::ostringstream out;
    out << "t_us,r_state,r_ca,r_rc,r_tot,v_delay,v_jitter,v_loss,utilization\n";
    for (const auto& r : rows)
    {
        out << r.t.micros << ',' << num(r.r_state) << ',' << num(r.r_ca) << ',' << num(r.r_rc) << ','
            << num(r.r_tot) << ',' << num(r.service.v_delay) << ',' << num(r.service.v_jitter) << ','
            << num(r.service.v_loss) << ',' << num(r.utilization) << '\n';
    }
    return out.str();
}

std::string experience_json(const agents::Experience& e)
{
    auto term = [](const std::optional<qos::AgentReward>& t) -> json {
        if (!t)
            return nullptr;
        return json{{"t_us", t->t_i.micros}, {"reward", t->reward}};
    };
    json j{{"t_us", e.t.micros},
           {"global_state", e.global_state.values},
           {"ca_obs", e.ca_obs},
           {"rc_obs", e.rc_obs},
           {"a_ca", e.a_ca},
           {"a_rc", e.a_rc},
           {"r_tot", e.r_tot},
           {"r_state", e.r_state},
           {"ca_term", term(e.ca_term)},
           {"rc_term", term(e.rc_term)},
           {"gamma", e.gamma},
           {"next_global_state", e.next_global_state.values},
           {"next_ca_obs", e.next_ca_obs},
           {"next_rc_obs", e.next_rc_obs},
           {"done", e.done}};
    return j.dump();
}

std::string metrics_json(const EpisodeMetrics& m)
{
    return episode(m).dump(2) + "\n";
}

EpisodeMetrics replay_trace(std::istream& trace, double tail_threshold_ms)
{
    struct Gen
    {
        bool uplink = true;
        bool resolved = false;
    };
    std::unordered_map<std::uint64_t, Gen> packets;
    FlowLog ul, dl;
    mac::MacCounters counters;
    int dut = -1;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(trace, line))
    {
        ++line_no;
        if (line.empty())
            continue;
        // time_us,seq,kind,device_id,detail
        std::size_t pos = 0;
        std::string fields[4];
        for (auto& f : fields)
        {
            const auto comma = line.find(',', pos);
            if (comma == std::string::npos)
            {
                throw std::runtime_error("trace line " + std::to_string(line_no) + " has too few fields");
            }
            f = line.substr(pos, comma - pos);
            pos = comma + 1;
        }
        const int device = std::stoi(fields[3]);
        std::istringstream detail(line.substr(pos));
        std::string tok;
        while (detail >> tok)
        {
            const auto eq = tok.find('=');
            const std::string key = tok.substr(0, eq);
            const std::string val = eq == std::string::npos ? "" : tok.substr(eq + 1);
            if (key == "dut_gen")
            {
                const auto slash = val.find('/');
                const bool up = val.substr(slash + 1) == "ul";
                packets[std::stoull(val.substr(0, slash))] = Gen{up, false};
                ++(up ? ul : dl).generated;
                if (up && dut < 0)
                    dut = device;
            }
            else if (key == "dut_deliver" || key == "dut_drop")
            {
                const auto colon = val.find(':');
                const auto id = std::stoull(val.substr(0, colon));
                auto it = packets.find(id);
                if (it == packets.end() || it->second.resolved)
                {
                    throw std::runtime_error("trace line " + std::to_string(line_no) + " resolves unknown packet " +
                                             std::to_string(id));
                }
                it->second.resolved = true;
                FlowLog& f = it->second.uplink ? ul : dl;
                if (key == "dut_drop")
                {
                    ++f.dropped;
                    continue;
                }
                ++f.delivered;
                f.delays_ms.push_back(static_cast<double>(std::stoll(val.substr(colon + 1))) / 1000.0);
            }
            else if (key == "acked")
            {
                if (std::stoi(val) == dut)
                    ++counters.successes;
            }
            else if (key == "retry_drop")
            {
                const auto colon = val.find(':');
                if (std::stoi(val.substr(0, colon)) == dut)
                    counters.drops += std::stoull(val.substr(colon + 1));
            }
            else if (device == dut && key == "tx")
            {
                ++counters.tx_attempts;
            }
            else if (device == dut && key == "timeout")
            {
                ++counters.ack_timeouts;
            }
        }
    }
    EpisodeLog log;
    log.uplink = std::move(ul);
    log.downlink = std::move(dl);
    for (const auto& [id, g] : packets)
    {
        if (!g.resolved)
            ++(g.uplink ? log.uplink : log.downlink).queued;
    }
    log.dut_counters = counters;
    return metrics_from_log(log, tail_threshold_ms);
}

} // namespace aimac::harness
