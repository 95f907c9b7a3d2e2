// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "core/engine.hpp"

namespace uwbsim {

/// Deviation statistics of one estimate stream.
struct MethodStats {
    int attempted = 0;
    int received = 0;
    double reception_rate = 0.0;
    double mean_m = 0.0;        // mean estimate
    double mean_dev_m = 0.0;    // mean (estimate - truth)
    double std_dev_m = 0.0;     // sample standard deviation of the deviations
    double max_abs_dev_m = 0.0; // max |estimate - truth|
};

struct PositionStats {
    int attempted = 0;
    int successful = 0;
    double success_rate = 0.0;
    double rms_error_m = 0.0; // over successful fixes
};

/// Filtered statistics over a run's exchanges.
struct StatsFilter {
    bool ble = false; // BLE samples instead of ToF estimates
    double min_true_distance_m = 0.0;
    double max_true_distance_m = 1e18;
    int los_filter = -1; // -1 any, 0 LOS only, 1 NLOS only
};

MethodStats collect_stats(const RunResult &result, const StatsFilter &filter = {});
PositionStats collect_position_stats(const RunResult &result, RangingMethod method);

/// Serialization. All output is deterministic for identical inputs.
std::string result_to_json(const RunResult &result);
std::string exchanges_to_csv(const RunResult &result);
std::string sweep_to_json(const std::vector<SweepPointResult> &points);
std::string sweep_to_csv(const std::vector<SweepPointResult> &points);

/// Report tables. A results document (run or sweep JSON produced above) feeds
/// the precision/comparison/nlos tables; the power table derives from the
/// built-in profile. format is "csv" or "json".
extern const char *const kTableIds[4]; // precision, comparison, nlos, power
std::string render_table(const std::string &table_id, const std::string &results_json_text,
                         const std::string &format);

/// Summary statistics of a per-exchange CSV file (schema written by
/// exchanges_to_csv). Malformed rows raise an error listing their numbers.
std::string stats_from_csv(const std::string &csv_text, const std::string &format);

} // namespace uwbsim
