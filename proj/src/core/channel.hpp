// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "core/bias.hpp"
#include "core/radio.hpp"
#include "core/rng.hpp"

namespace uwbsim {

/// One obstruction between two nodes. fp_gap_db, when set, is the expected
/// spread between total and first-path receive level behind this obstruction.
struct Obstruction {
    std::string material;
    double thickness_mm = 0.0;
    double excess_loss_db = 0.0;
    std::optional<double> fp_gap_db;
};

struct LinkGeometry {
    double distance_m = 0.0;
    std::vector<Obstruction> obstructions;

    bool los() const { return obstructions.empty(); }
    double total_excess_loss_db() const;
};

/// Observables of one transmission attempt. When received is false the other
/// fields must not be consumed downstream.
struct ChannelDraw {
    double rssi_dbm = 0.0;
    double p_rxl_dbm = 0.0; // total received level
    double p_fp_dbm = 0.0;  // first-path level
    double tof_true_s = 0.0;
    double tof_noise_s = 0.0; // bias + jitter applied to the arrival timestamp
    bool received = false;
};

/// Channel constants. Sensitivities and noise levels ship calibrated against
/// the prototype measurement campaign; every field can be overridden from the
/// scenario file.
struct ChannelCalibration {
    double tx_power_uwb_dbm = kDefaultTxPowerDbm;

    // Reception model: a full poll/response round succeeds when both one-way
    // legs do; per-leg success is logistic in the margin above sensitivity.
    double logistic_scale_db = 1.5;
    std::array<double, kModeCount> sensitivity_dbm{};

    // Per-mode one-sigma of the end-to-end ranging error (m), split at 10 m.
    std::array<double, kModeCount> sigma_near_m{};
    std::array<double, kModeCount> sigma_far_m{};

    // First-path gap statistics.
    double los_fp_gap_db = 1.43;
    double nlos_fp_gap_db = 7.59; // used when an obstruction does not specify one
    double fp_gap_sigma_db = 1.0;

    // Obstructed links read systematically long by about one sigma.
    double nlos_range_bias_sigmas = 1.0;

    // Deterministic short/long-range bias replay, removed again by the
    // estimation-side correction table. Applied to the most precise mode only.
    bool replay_range_bias = true;
    int range_bias_mode = 4;

    // Drift-ratio estimator noise (ppm) applied to the reported clock ratio.
    double ratio_noise_ppm = 0.3;

    // BLE narrowband model: log-distance path loss around a 1 m reference.
    double ble_ref_power_1m_dbm = -40.0;
    double ble_path_loss_exponent = 2.0;
    double ble_sigma_los_db = 2.45;
    double ble_sigma_nlos_db = 2.60;
    double ble_reception_los = 0.8983;
    double ble_reception_nlos = 0.7974;

    static ChannelCalibration defaults();

    double sigma_m(int mode_id, double distance_m) const;
    double range_bias_m(int mode_id, double distance_m, bool nlos) const;
};

/// Friis free-space path loss in dB; throws on non-positive inputs.
double fspl_db(double distance_m, double frequency_hz);

/// Success probability of a full two-leg exchange at a given distance.
double exchange_success_probability(const ChannelCalibration &cal, const RadioConfig &config,
                                    double p_rxl_dbm);

/// Per-leg reception probability (square root of the exchange probability).
double leg_success_probability(const ChannelCalibration &cal, const RadioConfig &config,
                               double p_rxl_dbm);

/// Deterministic receive level for a link (transmit power minus path and
/// obstruction losses).
double uwb_rx_level_dbm(const LinkGeometry &geometry, const RadioConfig &config,
                        const ChannelCalibration &cal);

ChannelDraw draw_uwb(const LinkGeometry &geometry, const RadioConfig &config,
                     const ChannelCalibration &cal, Rng &rng);

ChannelDraw draw_ble(const LinkGeometry &geometry, const ChannelCalibration &cal, Rng &rng);

} // namespace uwbsim
