#pragma once

#include "aimac/sim/time.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace aimac::phy
{

struct McsEntry
{
    int index = 0;
    double data_rate = 0.0; ///< bits per microsecond
    double snr50 = 0.0;     ///< dB at which PER = 0.5
};

/// HE-MCS 0..11, one spatial stream, 0.8 us guard interval, 20 MHz rates.
std::vector<McsEntry> default_mcs_table();

/// Throws std::invalid_argument unless rates and snr50 are strictly increasing.
void validate_mcs_table(const std::vector<McsEntry>& table);

struct PhyConfig
{
    double noise_dbm = -94.0;
    double cca_threshold_dbm = -82.0;
    double capture_threshold_db = 10.0;
    double per_sigma_db = 1.0;
    double pl0_db = 46.7;
    double pl_exponent = 3.0;
    double ap_tx_dbm = 20.0;
    double sta_tx_dbm = 15.0;
    std::int64_t preamble_us = 40;
    double symbol_us = 13.6;
    std::int64_t ack_airtime_us = 32;
    int ack_bytes = 14;
    std::vector<McsEntry> mcs_table = default_mcs_table();

    const McsEntry& mcs(int index) const;
    int max_mcs() const noexcept { return static_cast<int>(mcs_table.size()) - 1; }
};

struct Position
{
    double x = 0.0;
    double y = 0.0;
};

double distance(Position a, Position b) noexcept;

/// Log-distance path loss; distances below 0.1 m are clamped.
double path_loss_db(double distance_m, const PhyConfig& cfg = {});

/// Distance at which a transmitter of `tx_dbm` is received at `rssi_dbm`.
double distance_for_rssi(double tx_dbm, double rssi_dbm, const PhyConfig& cfg = {});

/// Preamble plus payload rounded up to whole OFDM symbols, rounded up to whole
/// microseconds. Throws std::invalid_argument for bytes <= 0.
sim::SimTime frame_airtime(const McsEntry& mcs, int bytes, const PhyConfig& cfg = {});

/// Logistic packet-error curve centred on the entry's snr50.
double packet_error_rate(const McsEntry& mcs, double snr_db, double sigma_db = 1.0);

inline double dbm_to_mw(double dbm) noexcept { return std::pow(10.0, dbm / 10.0); }
double mw_to_dbm(double mw) noexcept;

} // namespace aimac::phy
