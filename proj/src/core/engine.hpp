// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/estimation.hpp"
#include "core/scenario.hpp"

namespace uwbsim {

struct BleSample {
    bool received = false;
    double rssi_dbm = 0.0;
    double distance_m = 0.0;
};

struct ExchangeRecord {
    double time_s = 0.0;
    int tag_id = 0;
    int anchor_id = 0;
    int mode_id = 0;
    RangingScheme scheme = RangingScheme::SingleSided;
    ExchangeOutcome outcome = ExchangeOutcome::Lost;
    double true_distance_m = 0.0;
    bool los_truth = true; // geometric line of sight (no obstruction crossed)

    bool has_estimate = false;
    double raw_m = 0.0;       // plain two-way time of flight
    double corrected_m = 0.0; // drift-corrected (or double-sided)
    double final_m = 0.0;     // after bias correction
    double ratio_used = 1.0;
    double reply_delay_s = 0.0;

    bool nlos = false;
    double p_rxl_dbm = 0.0;
    double p_fp_dbm = 0.0;

    std::optional<BleSample> ble;
    double tag_charge_mah = 0.0;
};

struct PositionRecord {
    double time_s = 0.0;
    int tag_id = 0;
    RangingMethod method = RangingMethod::UwbTof;
    bool success = false;     // produced a usable fix
    bool intersected = false; // distance circles genuinely intersected
    int n_anchors = 0;
    double est_x = 0.0, est_y = 0.0;
    double true_x = 0.0, true_y = 0.0;
    double error_m = 0.0;
    double residual_m = 0.0;
};

struct NodeLedgerRecord {
    int node_id = 0;
    NodeRole role = NodeRole::Tag;
    std::map<RadioState, double> state_seconds;
    double radio_charge_mah = 0.0;
    double host_charge_mah = 0.0;
    double total_charge_mah = 0.0;
    double average_current_ma = 0.0;
    double projected_lifetime_h = 0.0;
};

struct RunResult {
    std::string scenario_name;
    std::uint64_t seed = 0;
    double duration_s = 0.0;
    int mode_id = 0;
    std::size_t event_count = 0;

    std::vector<ExchangeRecord> exchanges;
    std::vector<PositionRecord> positions;
    std::vector<NodeLedgerRecord> ledgers;
    std::vector<std::string> log;
};

/// Executes a scenario. Deterministic: the same scenario and seed produce an
/// identical result, event for event.
RunResult run(const Scenario &scenario);
RunResult run(const Scenario &scenario, std::uint64_t seed_override);

struct SweepPointResult {
    int index = 0;
    int mode_id = 0;
    std::optional<double> distance_m;
    double rx_delay_s = 0.0;
    std::uint64_t seed = 0;
    bool failed = false;
    std::string error;
    RunResult result; // empty when failed
};

/// One run per grid point with substream seeds derived from the master seed.
/// Failing points are recorded and the sweep continues. Throws on an empty
/// grid.
std::vector<SweepPointResult> sweep(const Scenario &scenario);
std::vector<SweepPointResult> sweep(const Scenario &scenario, std::uint64_t seed_override);

} // namespace uwbsim
