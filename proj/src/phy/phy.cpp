#include "aimac/phy/phy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace aimac::phy
{

std::vector<McsEntry> default_mcs_table()
{
    static constexpr double kRates[] = {8.6, 17.2, 25.8, 34.4, 51.6, 68.8, 77.4, 86.0, 103.2, 114.7, 129.0, 143.4};
    std::vector<McsEntry> table;
    table.reserve(std::size(kRates));
    for (int i = 0; i < static_cast<int>(std::size(kRates)); ++i)
    {
        table.push_back(McsEntry{i, kRates[i], 2.0 + 3.0 * i});
    }
    return table;
}

void validate_mcs_table(const std::vector<McsEntry>& table)
{
    if (table.empty())
    {
        throw std::invalid_argument("MCS table is empty");
    }
    for (std::size_t i = 0; i < table.size(); ++i)
    {
        if (table[i].index != static_cast<int>(i))
        {
            throw std::invalid_argument("MCS table index mismatch at position " + std::to_string(i));
        }
        if (!(table[i].data_rate > 0.0))
        {
            throw std::invalid_argument("MCS data rate must be positive");
        }
        if (i > 0 && !(table[i].data_rate > table[i - 1].data_rate && table[i].snr50 > table[i - 1].snr50))
        {
            throw std::invalid_argument("MCS table must be strictly increasing in rate and snr50");
        }
    }
}

const McsEntry& PhyConfig::mcs(int index) const
{
    if (index < 0 || index >= static_cast<int>(mcs_table.size()))
    {
        throw std::out_of_range("MCS index " + std::to_string(index));
    }
    return mcs_table[static_cast<std::size_t>(index)];
}

double distance(Position a, Position b) noexcept
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

double path_loss_db(double distance_m, const PhyConfig& cfg)
{
    const double d = std::max(distance_m, 0.1);
    return cfg.pl0_db + 10.0 * cfg.pl_exponent * std::log10(d);
}

double distance_for_rssi(double tx_dbm, double rssi_dbm, const PhyConfig& cfg)
{
    return std::max(0.1, std::pow(10.0, (tx_dbm - rssi_dbm - cfg.pl0_db) / (10.0 * cfg.pl_exponent)));
}

sim::SimTime frame_airtime(const McsEntry& mcs, int bytes, const PhyConfig& cfg)
{
    if (bytes <= 0)
    {
        throw std::invalid_argument("frame payload must be positive");
    }
    const double payload_us = 8.0 * bytes / mcs.data_rate;
    // Small tolerance keeps exact multiples (e.g. 13.6 * 7) from rounding up a symbol.
    const double symbols = std::ceil(payload_us / cfg.symbol_us - 1e-9);
    const double total = static_cast<double>(cfg.preamble_us) + symbols * cfg.symbol_us;
    return sim::SimTime{static_cast<std::int64_t>(std::ceil(total - 1e-9))};
}

double packet_error_rate(const McsEntry& mcs, double snr_db, double sigma_db)
{
    const double z = (snr_db - mcs.snr50) / sigma_db;
    if (z > 700.0)
    {
        return 0.0;
    }
    return 1.0 / (1.0 + std::exp(z));
}

double mw_to_dbm(double mw) noexcept
{
    if (mw <= 0.0)
    {
        return -std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(mw);
}

} // namespace aimac::phy
