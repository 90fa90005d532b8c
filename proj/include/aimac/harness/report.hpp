#pragma once

#include "aimac/agents/experience.hpp"
#include "aimac/harness/metrics.hpp"
#include "aimac/harness/network.hpp"
#include "aimac/harness/runner.hpp"
#include "aimac/harness/train.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace aimac::harness
{

/// `seed,policy,scenario,latency_ms,jitter_ms,loss_rate,tail_prob,tx_attempts,ack_timeouts`, one row per seed.
std::string report_csv(const EvalReport& r);

/// Means, standard deviations and the per-seed rows.
std::string report_json(const EvalReport& r);

/// Writes report.csv and report.json into `dir`, creating it if needed.
void write_report(const EvalReport& r, const std::filesystem::path& dir);

/// `step,loss,epsilon,mean_r_tot`.
std::string curve_csv(const std::vector<CurvePoint>& curve);

/// `t_us,r_state,r_ca,r_rc,r_tot,v_delay,v_jitter,v_loss,utilization`.
std::string reward_csv(const std::vector<RewardSample>& rows);

/// One JSON object per line.
std::string experience_json(const agents::Experience& e);

std::string metrics_json(const EpisodeMetrics& m);

/// Recomputes device-under-test metrics from an event trace using its
/// generation, delivery and drop annotations. Throws std::runtime_error on
/// malformed lines.
EpisodeMetrics replay_trace(std::istream& trace, double tail_threshold_ms = kDefaultTailThresholdMs);

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace aimac::harness
