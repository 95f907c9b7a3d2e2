// SPDX-License-Identifier: Apache-2.0
#include "uwbsim.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "core/engine.hpp"
#include "core/error.hpp"
#include "core/report.hpp"
#include "core/scenario.hpp"

namespace {

thread_local std::string g_last_error;

uwbsim_status status_of(uwbsim::ErrorCode code)
{
    using uwbsim::ErrorCode;
    switch (code) {
    case ErrorCode::Io: return UWBSIM_ERR_IO;
    case ErrorCode::Parse: return UWBSIM_ERR_PARSE;
    case ErrorCode::Validation: return UWBSIM_ERR_VALIDATION;
    case ErrorCode::Config: return UWBSIM_ERR_CONFIG;
    case ErrorCode::Domain: return UWBSIM_ERR_DOMAIN;
    case ErrorCode::Geometry: return UWBSIM_ERR_GEOMETRY;
    case ErrorCode::Solver: return UWBSIM_ERR_SOLVER;
    case ErrorCode::Protocol: return UWBSIM_ERR_PROTOCOL;
    case ErrorCode::Integrity: return UWBSIM_ERR_INTEGRITY;
    case ErrorCode::Usage: return UWBSIM_ERR_USAGE;
    case ErrorCode::Internal: return UWBSIM_ERR_INTERNAL;
    }
    return UWBSIM_ERR_INTERNAL;
}

template <typename Fn> uwbsim_status guarded(Fn &&fn)
{
    try {
        fn();
        g_last_error.clear();
        return UWBSIM_OK;
    } catch (const uwbsim::Error &e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::exception &e) {
        g_last_error = e.what();
        return UWBSIM_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return UWBSIM_ERR_INTERNAL;
    }
}

char *copy_string(const std::string &text)
{
    char *out = new char[text.size() + 1];
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

void require_arg(bool ok, const char *message)
{
    if (!ok)
        uwbsim::fail(uwbsim::ErrorCode::Usage, message);
}

std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        uwbsim::fail(uwbsim::ErrorCode::Io, "cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string &path, const std::string &content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        uwbsim::fail(uwbsim::ErrorCode::Io, "cannot write file: " + path);
    out << content;
    if (!out)
        uwbsim::fail(uwbsim::ErrorCode::Io, "write failed: " + path);
}

} // namespace

struct uwbsim_scenario {
    uwbsim::Scenario scenario;
};

struct uwbsim_result {
    bool is_sweep = false;
    uwbsim::RunResult run;
    std::vector<uwbsim::SweepPointResult> points;
};

extern "C" {

const char *uwbsim_version(void)
{
    return "0.1.0";
}

const char *uwbsim_last_error(void)
{
    return g_last_error.c_str();
}

void uwbsim_string_free(char *str)
{
    delete[] str;
}

uwbsim_status uwbsim_scenario_from_file(const char *path, uwbsim_scenario **out)
{
    return guarded([&] {
        require_arg(path && out, "path and out must be non-null");
        auto scenario = new uwbsim_scenario{uwbsim::scenario_from_file(path)};
        *out = scenario;
    });
}

uwbsim_status uwbsim_scenario_from_json(const char *json_text, uwbsim_scenario **out)
{
    return guarded([&] {
        require_arg(json_text && out, "json_text and out must be non-null");
        auto scenario = new uwbsim_scenario{uwbsim::scenario_from_json_text(json_text)};
        *out = scenario;
    });
}

void uwbsim_scenario_free(uwbsim_scenario *scenario)
{
    delete scenario;
}

uwbsim_status uwbsim_scenario_set_seed(uwbsim_scenario *scenario, uint64_t seed)
{
    return guarded([&] {
        require_arg(scenario != nullptr, "scenario must be non-null");
        scenario->scenario.seed = seed;
    });
}

uwbsim_status uwbsim_scenario_describe(const uwbsim_scenario *scenario, char **out)
{
    return guarded([&] {
        require_arg(scenario && out, "scenario and out must be non-null");
        *out = copy_string(uwbsim::describe(scenario->scenario));
    });
}

uwbsim_status uwbsim_run(const uwbsim_scenario *scenario, uwbsim_result **out)
{
    return guarded([&] {
        require_arg(scenario && out, "scenario and out must be non-null");
        auto result = new uwbsim_result;
        result->run = uwbsim::run(scenario->scenario);
        *out = result;
    });
}

uwbsim_status uwbsim_sweep(const uwbsim_scenario *scenario, uwbsim_result **out)
{
    return guarded([&] {
        require_arg(scenario && out, "scenario and out must be non-null");
        auto result = new uwbsim_result;
        result->is_sweep = true;
        result->points = uwbsim::sweep(scenario->scenario);
        *out = result;
    });
}

void uwbsim_result_free(uwbsim_result *result)
{
    delete result;
}

uwbsim_status uwbsim_result_json(const uwbsim_result *result, char **out)
{
    return guarded([&] {
        require_arg(result && out, "result and out must be non-null");
        *out = copy_string(result->is_sweep ? uwbsim::sweep_to_json(result->points)
                                            : uwbsim::result_to_json(result->run));
    });
}

uwbsim_status uwbsim_result_csv(const uwbsim_result *result, char **out)
{
    return guarded([&] {
        require_arg(result && out, "result and out must be non-null");
        *out = copy_string(result->is_sweep ? uwbsim::sweep_to_csv(result->points)
                                            : uwbsim::exchanges_to_csv(result->run));
    });
}

uwbsim_status uwbsim_result_write(const uwbsim_result *result, const char *json_path,
                                  const char *csv_path)
{
    return guarded([&] {
        require_arg(result != nullptr, "result must be non-null");
        if (json_path)
            write_file(json_path, result->is_sweep ? uwbsim::sweep_to_json(result->points)
                                                   : uwbsim::result_to_json(result->run));
        if (csv_path)
            write_file(csv_path, result->is_sweep ? uwbsim::sweep_to_csv(result->points)
                                                  : uwbsim::exchanges_to_csv(result->run));
    });
}

uwbsim_status uwbsim_table(const char *table_id, const char *results_json_path,
                           const char *format, char **out)
{
    return guarded([&] {
        require_arg(table_id && out, "table_id and out must be non-null");
        const std::string results =
            results_json_path ? read_file(results_json_path) : std::string();
        *out = copy_string(
            uwbsim::render_table(table_id, results, format ? format : "csv"));
    });
}

uwbsim_status uwbsim_stats(const char *csv_path, const char *format, char **out)
{
    return guarded([&] {
        require_arg(csv_path && out, "csv_path and out must be non-null");
        *out = copy_string(uwbsim::stats_from_csv(read_file(csv_path), format ? format : "csv"));
    });
}

uwbsim_status uwbsim_fspl_db(double distance_m, double frequency_hz, double *out)
{
    return guarded([&] {
        require_arg(out != nullptr, "out must be non-null");
        *out = uwbsim::fspl_db(distance_m, frequency_hz);
    });
}

uwbsim_status uwbsim_airtime_s(int mode_id, int payload_bytes, double *out)
{
    return guarded([&] {
        require_arg(out != nullptr, "out must be non-null");
        *out = uwbsim::airtime_s(uwbsim::mode(mode_id), payload_bytes);
    });
}

uwbsim_status uwbsim_distance_from_rssi_m(double rssi_dbm, double ref_power_1m_dbm,
                                          double exponent, double *out)
{
    return guarded([&] {
        require_arg(out != nullptr, "out must be non-null");
        *out = uwbsim::distance_from_rssi_m(rssi_dbm, ref_power_1m_dbm, exponent);
    });
}

uwbsim_status uwbsim_classify_nlos(double p_rxl_dbm, double p_fp_dbm, double threshold_db,
                                   int *out_is_nlos)
{
    return guarded([&] {
        require_arg(out_is_nlos != nullptr, "out must be non-null");
        *out_is_nlos =
            uwbsim::classify_nlos(p_rxl_dbm, p_fp_dbm, threshold_db) == uwbsim::PathClass::Nlos
                ? 1
                : 0;
    });
}

uwbsim_status uwbsim_multilaterate(const double *anchors_xy, const double *distances_m,
                                   const double *weights, size_t n, double *out_x,
                                   double *out_y, double *out_residual_m)
{
    return guarded([&] {
        require_arg(anchors_xy && distances_m && out_x && out_y,
                    "anchors, distances and outputs must be non-null");
        std::vector<uwbsim::AnchorMeasurement> measurements(n);
        for (size_t i = 0; i < n; ++i) {
            measurements[i].position = {anchors_xy[2 * i], anchors_xy[2 * i + 1]};
            measurements[i].distance_m = distances_m[i];
            measurements[i].weight = weights ? weights[i] : 1.0;
        }
        const uwbsim::SolveResult solved = uwbsim::multilaterate(
            std::span<const uwbsim::AnchorMeasurement>(measurements));
        *out_x = solved.position.x;
        *out_y = solved.position.y;
        if (out_residual_m)
            *out_residual_m = solved.position.residual_m;
        if (!solved.converged)
            uwbsim::fail(uwbsim::ErrorCode::Solver,
                         "solver did not converge; best iterate returned");
    });
}

uwbsim_status uwbsim_mode_average_current_ma(int mode_id, double rx_delay_s, double *out)
{
    return guarded([&] {
        require_arg(out != nullptr, "out must be non-null");
        *out = uwbsim::exchange_charge(uwbsim::PowerProfile::defaults(), mode_id, rx_delay_s)
                   .average_current_ma;
    });
}

uwbsim_status uwbsim_battery_lifetime_h(double capacity_mah, int mode_id, double rx_delay_s,
                                        double *out)
{
    return guarded([&] {
        require_arg(out != nullptr, "out must be non-null");
        *out = uwbsim::battery_lifetime_hours_continuous(uwbsim::PowerProfile::defaults(),
                                                         capacity_mah, mode_id, rx_delay_s);
    });
}

} // extern "C"
