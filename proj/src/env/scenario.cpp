#include "aimac/env/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace aimac::env
{

using nlohmann::json;

std::string_view to_string(ScenarioKind kind) noexcept
{
    switch (kind)
    {
    case ScenarioKind::Home:
        return "home";
    case ScenarioKind::Office:
        return "office";
    case ScenarioKind::Mall:
        return "mall";
    case ScenarioKind::Custom:
        return "custom";
    }
    return "unknown";
}

std::string_view to_string(Role role) noexcept
{
    switch (role)
    {
    case Role::Ap:
        return "ap";
    case Role::Sta:
        return "sta";
    case Role::UnassociatedSta:
        return "unassociated_sta";
    }
    return "unknown";
}

std::string_view to_string(PolicyKind policy) noexcept
{
    return policy == PolicyKind::Aimac ? "aimac" : "baseline";
}

ScenarioKind scenario_kind_from_string(std::string_view s)
{
    if (s == "home")
        return ScenarioKind::Home;
    if (s == "office")
        return ScenarioKind::Office;
    if (s == "mall")
        return ScenarioKind::Mall;
    if (s == "custom")
        return ScenarioKind::Custom;
    throw std::invalid_argument("unknown scenario kind: " + std::string(s));
}

Role role_from_string(std::string_view s)
{
    if (s == "ap")
        return Role::Ap;
    if (s == "sta")
        return Role::Sta;
    if (s == "unassociated_sta")
        return Role::UnassociatedSta;
    throw ConfigError("unknown device role: " + std::string(s));
}

PolicyKind policy_from_string(std::string_view s)
{
    if (s == "baseline")
        return PolicyKind::Baseline;
    if (s == "aimac")
        return PolicyKind::Aimac;
    throw std::invalid_argument("unknown policy: " + std::string(s));
}

void ScenarioConfig::validate() const
{
    if (schema_version != kScenarioSchemaVersion)
    {
        throw ConfigError("unsupported schema_version " + std::to_string(schema_version));
    }
    if (duration < sim::SimTime{0})
    {
        throw ConfigError("duration must be non-negative");
    }
    try
    {
        phy::validate_mcs_table(phy.mcs_table);
    }
    catch (const std::invalid_argument& e)
    {
        throw ConfigError(e.what());
    }
    int dut_count = 0;
    for (std::size_t i = 0; i < devices.size(); ++i)
    {
        const auto& d = devices[i];
        const std::string where = "device " + std::to_string(i) + ": ";
        if (d.id != static_cast<int>(i))
        {
            throw ConfigError(where + "ids must equal their position in the device list");
        }
        if (!(d.rssi_target >= kMinRssiTarget && d.rssi_target <= kMaxRssiTarget))
        {
            throw ConfigError(where + "rssi_target outside [-90, -30] dBm");
        }
        if (d.burst_length < 1)
        {
            throw ConfigError(where + "burst_length must be >= 1");
        }
        for (const auto& p : d.profiles)
        {
            try
            {
                p.validate();
            }
            catch (const std::invalid_argument& e)
            {
                throw ConfigError(where + e.what());
            }
        }
        switch (d.role)
        {
        case Role::Ap:
            if (d.associated_with)
                throw ConfigError(where + "an AP cannot be associated");
            if (!d.profiles.empty())
                throw ConfigError(where + "AP traffic is declared on its STAs");
            break;
        case Role::Sta: {
            if (!d.associated_with)
                throw ConfigError(where + "STA must reference an AP");
            const int ap = *d.associated_with;
            if (ap < 0 || ap >= static_cast<int>(devices.size()) || devices[static_cast<std::size_t>(ap)].role != Role::Ap)
                throw ConfigError(where + "associated_with does not name an AP");
            for (const auto& p : d.profiles)
                if (p.kind == TrafficKind::ProbeMgmt)
                    throw ConfigError(where + "associated STAs do not probe");
            break;
        }
        case Role::UnassociatedSta:
            if (d.associated_with)
                throw ConfigError(where + "unassociated STA references an AP");
            for (const auto& p : d.profiles)
                if (p.kind != TrafficKind::ProbeMgmt)
                    throw ConfigError(where + "unassociated STAs carry only probe_mgmt profiles");
            break;
        }
        if (d.device_under_test)
        {
            ++dut_count;
            if (d.role != Role::Sta)
                throw ConfigError(where + "the device under test must be an associated STA");
            if (d.burst_length != 1)
                throw ConfigError(where + "the device under test sends one packet per frame");
        }
        else if (d.policy == PolicyKind::Aimac)
        {
            throw ConfigError(where + "only the device under test may run aimac");
        }
    }
    if (dut_count != 1)
    {
        throw ConfigError("exactly one device must be marked device_under_test");
    }
}

int ScenarioConfig::dut() const
{
    for (const auto& d : devices)
    {
        if (d.device_under_test)
            return d.id;
    }
    throw ConfigError("no device_under_test");
}

double ScenarioConfig::offered_load_bytes_per_s() const
{
    double total = 0.0;
    for (const auto& d : devices)
    {
        for (const auto& p : d.profiles)
        {
            const double per_flow = p.burst_frames * p.mean_size_bytes() * 1000.0 / p.mean_interval_ms();
            total += p.direction == Direction::Both ? 2.0 * per_flow : per_flow;
        }
    }
    return total;
}

namespace
{

struct Population
{
    int interfering_aps = 0;
    int stas = 0;
    int probers = 0;
    double ap_rssi_lo = -80.0, ap_rssi_hi = -60.0;
    double sta_rssi_lo = -60.0, sta_rssi_hi = -40.0;
    double prober_rssi_lo = -85.0, prober_rssi_hi = -55.0;
    TrafficProfile bulk;
    int burst_length = 1;
};

Population population_for(ScenarioKind kind)
{
    Population p;
    p.bulk.kind = TrafficKind::Bulk;
    p.bulk.direction = Direction::Both;
    switch (kind)
    {
    case ScenarioKind::Home:
        p.interfering_aps = 2;
        p.stas = 4;
        p.ap_rssi_lo = -84.0;
        p.ap_rssi_hi = -74.0;
        p.sta_rssi_lo = -55.0;
        p.sta_rssi_hi = -45.0;
        p.bulk.size_mu = 600.0;
        p.bulk.size_beta = 100.0;
        p.bulk.interval_mu = 40.0;
        p.bulk.interval_beta = 10.0;
        p.burst_length = 2;
        break;
    case ScenarioKind::Office:
        p.interfering_aps = 8;
        p.stas = 40;
        p.ap_rssi_lo = -75.0;
        p.ap_rssi_hi = -50.0;
        p.sta_rssi_lo = -60.0;
        p.sta_rssi_hi = -40.0;
        p.bulk.size_mu = 450.0;
        p.bulk.size_beta = 100.0;
        p.bulk.interval_mu = 20.0;
        p.bulk.interval_beta = 5.0;
        p.burst_length = 3;
        break;
    case ScenarioKind::Mall:
        p.interfering_aps = 12;
        p.stas = 10;
        p.probers = 60;
        p.ap_rssi_lo = -85.0;
        p.ap_rssi_hi = -60.0;
        p.sta_rssi_lo = -65.0;
        p.sta_rssi_hi = -45.0;
        p.bulk.size_mu = 300.0;
        p.bulk.size_beta = 50.0;
        p.bulk.interval_mu = 50.0;
        p.bulk.interval_beta = 10.0;
        p.burst_length = 2;
        break;
    case ScenarioKind::Custom:
        throw std::invalid_argument("build_scenario: custom scenarios are authored as configuration files");
    }
    return p;
}

double uniform_in(sim::RngStream& rng, double lo, double hi)
{
    return lo + (hi - lo) * rng.next_uniform();
}

double round_to(double v, double step)
{
    return std::round(v / step) * step;
}

} // namespace

ScenarioConfig build_scenario(ScenarioKind kind, std::uint64_t seed)
{
    const Population pop = population_for(kind);
    sim::RngStream rng(seed, "scenario");

    ScenarioConfig cfg;
    cfg.kind = kind;
    cfg.seed = seed;

    DeviceSpec dut_ap;
    dut_ap.id = 0;
    dut_ap.role = Role::Ap;
    dut_ap.rssi_target = -30.0;
    cfg.devices.push_back(dut_ap);

    DeviceSpec dut;
    dut.id = 1;
    dut.role = Role::Sta;
    dut.associated_with = 0;
    dut.rssi_target = round_to(uniform_in(rng, -55.0, -45.0), 0.1);
    dut.profiles.push_back(TrafficProfile::gaming());
    dut.device_under_test = true;
    cfg.devices.push_back(dut);

    std::vector<int> ap_ids;
    for (int i = 0; i < pop.interfering_aps; ++i)
    {
        DeviceSpec ap;
        ap.id = static_cast<int>(cfg.devices.size());
        ap.role = Role::Ap;
        ap.rssi_target = round_to(uniform_in(rng, pop.ap_rssi_lo, pop.ap_rssi_hi), 0.1);
        ap.burst_length = pop.burst_length;
        ap_ids.push_back(ap.id);
        cfg.devices.push_back(ap);
    }
    for (int i = 0; i < pop.stas; ++i)
    {
        DeviceSpec sta;
        sta.id = static_cast<int>(cfg.devices.size());
        sta.role = Role::Sta;
        sta.associated_with = ap_ids[static_cast<std::size_t>(i) % ap_ids.size()];
        sta.rssi_target = round_to(uniform_in(rng, pop.sta_rssi_lo, pop.sta_rssi_hi), 0.1);
        sta.profiles.push_back(pop.bulk);
        sta.burst_length = pop.burst_length;
        cfg.devices.push_back(sta);
    }
    for (int i = 0; i < pop.probers; ++i)
    {
        DeviceSpec prober;
        prober.id = static_cast<int>(cfg.devices.size());
        prober.role = Role::UnassociatedSta;
        prober.rssi_target = round_to(uniform_in(rng, pop.prober_rssi_lo, pop.prober_rssi_hi), 0.1);
        prober.profiles.push_back(TrafficProfile::probe());
        cfg.devices.push_back(prober);
    }
    cfg.validate();
    return cfg;
}

std::vector<phy::Position> place_devices(const std::vector<DeviceSpec>& devices, const phy::PhyConfig& phy,
                                         sim::RngStream& stream)
{
    std::vector<phy::Position> out(devices.size());
    std::vector<bool> placed(devices.size(), false);
    auto place = [&](std::size_t i, phy::Position ref) {
        const auto& d = devices[i];
        if (!(d.rssi_target >= kMinRssiTarget && d.rssi_target <= kMaxRssiTarget))
        {
            throw ConfigError("place_devices: rssi_target outside [-90, -30] dBm for device " + std::to_string(d.id));
        }
        const double r = phy::distance_for_rssi(d.tx_power_dbm(phy), d.rssi_target, phy);
        const double bearing = 2.0 * std::numbers::pi * stream.next_uniform();
        out[i] = phy::Position{ref.x + r * std::cos(bearing), ref.y + r * std::sin(bearing)};
        placed[i] = true;
    };
    // APs and unassociated STAs first so every STA's reference exists.
    for (std::size_t i = 0; i < devices.size(); ++i)
    {
        if (devices[i].role != Role::Sta)
            place(i, phy::Position{});
    }
    for (std::size_t i = 0; i < devices.size(); ++i)
    {
        if (devices[i].role == Role::Sta)
        {
            const int ap = devices[i].associated_with.value_or(-1);
            if (ap < 0 || static_cast<std::size_t>(ap) >= devices.size() || !placed[static_cast<std::size_t>(ap)])
            {
                throw ConfigError("place_devices: STA " + std::to_string(devices[i].id) + " has no placed AP");
            }
            place(i, out[static_cast<std::size_t>(ap)]);
        }
    }
    return out;
}

// --- serialization -------------------------------------------------------------

namespace
{

json profile_to_json(const TrafficProfile& p)
{
    return json{{"kind", to_string(p.kind)},
                {"direction", to_string(p.direction)},
                {"size_mu", p.size_mu},
                {"size_beta", p.size_beta},
                {"interval_mu", p.interval_mu},
                {"interval_beta", p.interval_beta},
                {"burst_frames", p.burst_frames}};
}

TrafficProfile profile_from_json(const json& j)
{
    TrafficProfile p;
    p.kind = traffic_kind_from_string(j.at("kind").get<std::string>());
    p.direction = direction_from_string(j.at("direction").get<std::string>());
    p.size_mu = j.at("size_mu").get<double>();
    p.size_beta = j.at("size_beta").get<double>();
    p.interval_mu = j.at("interval_mu").get<double>();
    p.interval_beta = j.at("interval_beta").get<double>();
    p.burst_frames = j.value("burst_frames", 1);
    return p;
}

json phy_to_json(const phy::PhyConfig& p)
{
    json table = json::array();
    for (const auto& m : p.mcs_table)
    {
        table.push_back(json{{"index", m.index}, {"data_rate", m.data_rate}, {"snr50", m.snr50}});
    }
    return json{{"noise_dbm", p.noise_dbm},
                {"cca_threshold_dbm", p.cca_threshold_dbm},
                {"capture_threshold_db", p.capture_threshold_db},
                {"per_sigma_db", p.per_sigma_db},
                {"pl0_db", p.pl0_db},
                {"pl_exponent", p.pl_exponent},
                {"ap_tx_dbm", p.ap_tx_dbm},
                {"sta_tx_dbm", p.sta_tx_dbm},
                {"preamble_us", p.preamble_us},
                {"symbol_us", p.symbol_us},
                {"ack_airtime_us", p.ack_airtime_us},
                {"ack_bytes", p.ack_bytes},
                {"mcs_table", table}};
}

phy::PhyConfig phy_from_json(const json& j)
{
    phy::PhyConfig p;
    p.noise_dbm = j.value("noise_dbm", p.noise_dbm);
    p.cca_threshold_dbm = j.value("cca_threshold_dbm", p.cca_threshold_dbm);
    p.capture_threshold_db = j.value("capture_threshold_db", p.capture_threshold_db);
    p.per_sigma_db = j.value("per_sigma_db", p.per_sigma_db);
    p.pl0_db = j.value("pl0_db", p.pl0_db);
    p.pl_exponent = j.value("pl_exponent", p.pl_exponent);
    p.ap_tx_dbm = j.value("ap_tx_dbm", p.ap_tx_dbm);
    p.sta_tx_dbm = j.value("sta_tx_dbm", p.sta_tx_dbm);
    p.preamble_us = j.value("preamble_us", p.preamble_us);
    p.symbol_us = j.value("symbol_us", p.symbol_us);
    p.ack_airtime_us = j.value("ack_airtime_us", p.ack_airtime_us);
    p.ack_bytes = j.value("ack_bytes", p.ack_bytes);
    if (j.contains("mcs_table"))
    {
        p.mcs_table.clear();
        for (const auto& m : j.at("mcs_table"))
        {
            p.mcs_table.push_back(
                phy::McsEntry{m.at("index").get<int>(), m.at("data_rate").get<double>(), m.at("snr50").get<double>()});
        }
    }
    return p;
}

} // namespace

std::string to_json_text(const ScenarioConfig& cfg)
{
    json devices = json::array();
    for (const auto& d : cfg.devices)
    {
        json profiles = json::array();
        for (const auto& p : d.profiles)
        {
            profiles.push_back(profile_to_json(p));
        }
        json jd{{"id", d.id},
                {"role", to_string(d.role)},
                {"associated_with", d.associated_with ? json(*d.associated_with) : json(nullptr)},
                {"rssi_target", d.rssi_target},
                {"profiles", profiles},
                {"policy", to_string(d.policy)},
                {"device_under_test", d.device_under_test},
                {"burst_length", d.burst_length}};
        devices.push_back(jd);
    }
    json root{{"schema_version", cfg.schema_version},
              {"kind", to_string(cfg.kind)},
              {"seed", cfg.seed},
              {"duration", cfg.duration.micros},
              {"phy", phy_to_json(cfg.phy)},
              {"devices", devices}};
    return root.dump(2) + "\n";
}

ScenarioConfig from_json_text(std::string_view text)
{
    ScenarioConfig cfg;
    try
    {
        const json root = json::parse(text);
        cfg.schema_version = root.at("schema_version").get<int>();
        if (cfg.schema_version != kScenarioSchemaVersion)
        {
            throw ConfigError("unsupported schema_version " + std::to_string(cfg.schema_version));
        }
        cfg.kind = scenario_kind_from_string(root.at("kind").get<std::string>());
        cfg.seed = root.value("seed", std::uint64_t{1});
        cfg.duration = sim::SimTime{root.value("duration", sim::seconds(15).micros)};
        if (root.contains("phy"))
        {
            cfg.phy = phy_from_json(root.at("phy"));
        }
        for (const auto& jd : root.at("devices"))
        {
            DeviceSpec d;
            d.id = jd.at("id").get<int>();
            d.role = role_from_string(jd.at("role").get<std::string>());
            if (jd.contains("associated_with") && !jd.at("associated_with").is_null())
            {
                d.associated_with = jd.at("associated_with").get<int>();
            }
            d.rssi_target = jd.at("rssi_target").get<double>();
            for (const auto& jp : jd.value("profiles", json::array()))
            {
                d.profiles.push_back(profile_from_json(jp));
            }
            d.policy = policy_from_string(jd.value("policy", std::string("baseline")));
            d.device_under_test = jd.value("device_under_test", false);
            d.burst_length = jd.value("burst_length", 1);
            cfg.devices.push_back(std::move(d));
        }
    }
    catch (const json::exception& e)
    {
        throw ConfigError(std::string("scenario file: ") + e.what());
    }
    catch (const std::invalid_argument& e)
    {
        throw ConfigError(std::string("scenario file: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

void save_scenario(const ScenarioConfig& cfg, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << to_json_text(cfg);
}

ScenarioConfig load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw ConfigError("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

} // namespace aimac::env
