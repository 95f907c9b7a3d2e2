/* SPDX-License-Identifier: Apache-2.0
 *
 * uwbsim — C API of the UWB/BLE asset-tracking ranging simulator.
 *
 * Every function returns a uwbsim_status; on failure uwbsim_last_error()
 * holds a message describing what went wrong (thread-local). Objects are
 * opaque handles owned by the caller and released with the matching _free
 * function. Strings returned through char** out-parameters are released with
 * uwbsim_string_free().
 */
#ifndef UWBSIM_H
#define UWBSIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum uwbsim_status {
    UWBSIM_OK = 0,
    UWBSIM_ERR_IO = 1,
    UWBSIM_ERR_PARSE = 2,
    UWBSIM_ERR_VALIDATION = 3,
    UWBSIM_ERR_CONFIG = 4,
    UWBSIM_ERR_DOMAIN = 5,
    UWBSIM_ERR_GEOMETRY = 6,
    UWBSIM_ERR_SOLVER = 7,
    UWBSIM_ERR_PROTOCOL = 8,
    UWBSIM_ERR_INTEGRITY = 9,
    UWBSIM_ERR_USAGE = 10,
    UWBSIM_ERR_INTERNAL = 11,
} uwbsim_status;

typedef struct uwbsim_scenario uwbsim_scenario;
typedef struct uwbsim_result uwbsim_result;

const char *uwbsim_version(void);

/* Message of the most recent failure on this thread; empty string if none. */
const char *uwbsim_last_error(void);

void uwbsim_string_free(char *str);

/* ---- Scenarios ---------------------------------------------------------- */

/* Loading parses and fully validates; validation problems carry JSON paths. */
uwbsim_status uwbsim_scenario_from_file(const char *path, uwbsim_scenario **out);
uwbsim_status uwbsim_scenario_from_json(const char *json_text, uwbsim_scenario **out);
void uwbsim_scenario_free(uwbsim_scenario *scenario);

uwbsim_status uwbsim_scenario_set_seed(uwbsim_scenario *scenario, uint64_t seed);
uwbsim_status uwbsim_scenario_describe(const uwbsim_scenario *scenario, char **out);

/* ---- Simulation --------------------------------------------------------- */

/* Deterministic: the same scenario and seed give byte-identical outputs. */
uwbsim_status uwbsim_run(const uwbsim_scenario *scenario, uwbsim_result **out);

/* One run per grid point of the scenario's sweep section. */
uwbsim_status uwbsim_sweep(const uwbsim_scenario *scenario, uwbsim_result **out);

void uwbsim_result_free(uwbsim_result *result);

uwbsim_status uwbsim_result_json(const uwbsim_result *result, char **out);
uwbsim_status uwbsim_result_csv(const uwbsim_result *result, char **out);

/* Writes the JSON document and the per-exchange CSV; either path may be NULL
 * to skip that file. */
uwbsim_status uwbsim_result_write(const uwbsim_result *result, const char *json_path,
                                  const char *csv_path);

/* ---- Reports ------------------------------------------------------------ */

/* table_id: "precision" | "comparison" | "nlos" | "power".
 * results_json_path may be NULL for the power table. format: "csv" | "json". */
uwbsim_status uwbsim_table(const char *table_id, const char *results_json_path,
                           const char *format, char **out);

/* Summary statistics of a per-exchange CSV file. format: "csv" | "json". */
uwbsim_status uwbsim_stats(const char *csv_path, const char *format, char **out);

/* ---- Direct computations ------------------------------------------------ */

uwbsim_status uwbsim_fspl_db(double distance_m, double frequency_hz, double *out);
uwbsim_status uwbsim_airtime_s(int mode_id, int payload_bytes, double *out);
uwbsim_status uwbsim_distance_from_rssi_m(double rssi_dbm, double ref_power_1m_dbm,
                                          double exponent, double *out);

/* *out_is_nlos is 1 when the level spread reaches the threshold (dB). */
uwbsim_status uwbsim_classify_nlos(double p_rxl_dbm, double p_fp_dbm, double threshold_db,
                                   int *out_is_nlos);

/* anchors_xy holds n (x, y) pairs; weights may be NULL for uniform weights. */
uwbsim_status uwbsim_multilaterate(const double *anchors_xy, const double *distances_m,
                                   const double *weights, size_t n, double *out_x,
                                   double *out_y, double *out_residual_m);

/* Average current (mA) of one ranging round for a mode, with an optional
 * receive delay. */
uwbsim_status uwbsim_mode_average_current_ma(int mode_id, double rx_delay_s, double *out);

/* Continuous-ranging battery lifetime (hours). */
uwbsim_status uwbsim_battery_lifetime_h(double capacity_mah, int mode_id, double rx_delay_s,
                                        double *out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* UWBSIM_H */
