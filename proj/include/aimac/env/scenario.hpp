#pragma once

#include "aimac/env/traffic.hpp"
#include "aimac/phy/phy.hpp"
#include "aimac/sim/rng.hpp"
#include "aimac/sim/time.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace aimac::env
{

enum class ScenarioKind
{
    Home,
    Office,
    Mall,
    Custom,
};

enum class Role
{
    Ap,
    Sta,
    UnassociatedSta,
};

enum class PolicyKind
{
    Baseline,
    Aimac,
};

std::string_view to_string(ScenarioKind kind) noexcept;
std::string_view to_string(Role role) noexcept;
std::string_view to_string(PolicyKind policy) noexcept;
ScenarioKind scenario_kind_from_string(std::string_view s);
Role role_from_string(std::string_view s);
PolicyKind policy_from_string(std::string_view s);

/// Configuration files that violate the schema.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kScenarioSchemaVersion = 1;
inline constexpr double kMinRssiTarget = -90.0;
inline constexpr double kMaxRssiTarget = -30.0;

struct DeviceSpec
{
    int id = 0;
    Role role = Role::Sta;
    std::optional<int> associated_with;
    double rssi_target = -50.0; ///< dBm at the placement reference point
    std::vector<TrafficProfile> profiles;
    PolicyKind policy = PolicyKind::Baseline;
    bool device_under_test = false;
    int burst_length = 1; ///< max packets carried per transmission

    double tx_power_dbm(const phy::PhyConfig& phy) const noexcept
    {
        return role == Role::Ap ? phy.ap_tx_dbm : phy.sta_tx_dbm;
    }
};

struct ScenarioConfig
{
    int schema_version = kScenarioSchemaVersion;
    ScenarioKind kind = ScenarioKind::Custom;
    std::vector<DeviceSpec> devices;
    phy::PhyConfig phy;
    sim::SimTime duration = sim::seconds(15);
    std::uint64_t seed = 1;

    /// Throws ConfigError describing the first violated invariant.
    void validate() const;

    /// Index of the device-under-test STA.
    int dut() const;

    /// Sum over all flows of mean bytes per second.
    double offered_load_bytes_per_s() const;
};

/// Home, office, or mall population plus the device-under-test pair, as a pure
/// function of (kind, seed). Throws std::invalid_argument for Custom.
ScenarioConfig build_scenario(ScenarioKind kind, std::uint64_t seed);

/// Places every device so its received power at the placement reference point
/// matches rssi_target, with a uniform bearing. APs and unassociated STAs are
/// referenced to the origin, associated STAs to their AP.
std::vector<phy::Position> place_devices(const std::vector<DeviceSpec>& devices, const phy::PhyConfig& phy,
                                         sim::RngStream& stream);

std::string to_json_text(const ScenarioConfig& cfg);
ScenarioConfig from_json_text(std::string_view text);
void save_scenario(const ScenarioConfig& cfg, const std::filesystem::path& path);
ScenarioConfig load_scenario(const std::filesystem::path& path);

} // namespace aimac::env
