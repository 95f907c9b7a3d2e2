// SPDX-License-Identifier: Apache-2.0
#include "core/channel.hpp"

#include <cmath>
#include <string>

#include "core/constants.hpp"
#include "core/error.hpp"

namespace uwbsim {

namespace {

double logit(double p)
{
    return std::log(p / (1.0 - p));
}

double logistic(double x)
{
    return 1.0 / (1.0 + std::exp(-x));
}

/// Sensitivity that yields a target exchange success rate at a given range.
double sensitivity_for_target(double target_exchange_rate, double distance_m, int channel,
                              double scale_db)
{
    const double leg_rate = std::sqrt(target_exchange_rate);
    const double level =
        kDefaultTxPowerDbm - fspl_db(distance_m, channel_center_frequency_hz(channel));
    return level - scale_db * logit(leg_rate);
}

} // namespace

double LinkGeometry::total_excess_loss_db() const
{
    double total = 0.0;
    for (const Obstruction &o : obstructions)
        total += o.excess_loss_db;
    return total;
}

ChannelCalibration ChannelCalibration::defaults()
{
    ChannelCalibration cal;

    // Anchor points of the reception curve, all stated as full-exchange rates:
    // the low-power mode completes 17.78% of rounds at the 10 m test distance,
    // the fast modes reach half success at their observed maximum ranges, and
    // the long-range mode holds 50% out at 622 m.
    cal.sensitivity_dbm[0] = sensitivity_for_target(0.1778, 10.0, 1, cal.logistic_scale_db);
    cal.sensitivity_dbm[1] = sensitivity_for_target(0.5, 124.0, 1, cal.logistic_scale_db);
    cal.sensitivity_dbm[2] = sensitivity_for_target(0.5, 124.0, 1, cal.logistic_scale_db);
    cal.sensitivity_dbm[3] = sensitivity_for_target(0.5, 109.0, 5, cal.logistic_scale_db);
    cal.sensitivity_dbm[4] = sensitivity_for_target(0.5, 622.0, 1, cal.logistic_scale_db);
    cal.sensitivity_dbm[5] = sensitivity_for_target(0.5, 118.0, 4, cal.logistic_scale_db);

    // Measured ranging precision per mode (one sigma, m) inside 10 m.
    cal.sigma_near_m = {0.0436, 0.0650, 0.0542, 0.0244, 0.1355, 0.0523};
    // Beyond 10 m, chosen so that a sweep with 40% of its samples inside 10 m
    // pools to the measured 0-30 m precision.
    const std::array<double, kModeCount> pooled{0.0436, 0.0594, 0.0648, 0.0404, 0.1958, 0.0404};
    constexpr double kNearFraction = 0.4;
    for (int i = 0; i < kModeCount; ++i) {
        const double near_var = cal.sigma_near_m[i] * cal.sigma_near_m[i];
        const double pooled_var = pooled[i] * pooled[i];
        const double far_var = (pooled_var - kNearFraction * near_var) / (1.0 - kNearFraction);
        cal.sigma_far_m[i] = far_var > near_var ? std::sqrt(far_var) : cal.sigma_near_m[i];
    }
    return cal;
}

double ChannelCalibration::sigma_m(int mode_id, double distance_m) const
{
    require(mode_id >= 1 && mode_id <= kModeCount, ErrorCode::Config,
            "unknown mode " + std::to_string(mode_id));
    return distance_m <= 10.0 ? sigma_near_m[mode_id - 1] : sigma_far_m[mode_id - 1];
}

double ChannelCalibration::range_bias_m(int mode_id, double distance_m, bool nlos) const
{
    double bias = 0.0;
    if (replay_range_bias && mode_id == range_bias_mode)
        bias += BiasTable::mode4_default().bias_m(distance_m);
    if (nlos)
        bias += nlos_range_bias_sigmas * sigma_m(mode_id, distance_m);
    return bias;
}

double fspl_db(double distance_m, double frequency_hz)
{
    require(distance_m > 0.0, ErrorCode::Domain, "fspl: distance must be positive");
    require(frequency_hz > 0.0, ErrorCode::Domain, "fspl: frequency must be positive");
    constexpr double four_pi_over_c = 4.0 * 3.14159265358979323846 / kSpeedOfLight;
    return kDbmPerDecade * std::log10(distance_m) + kDbmPerDecade * std::log10(frequency_hz) +
           kDbmPerDecade * std::log10(four_pi_over_c);
}

double leg_success_probability(const ChannelCalibration &cal, const RadioConfig &config,
                               double p_rxl_dbm)
{
    const double margin = p_rxl_dbm - cal.sensitivity_dbm[config.mode_id - 1];
    return logistic(margin / cal.logistic_scale_db);
}

double exchange_success_probability(const ChannelCalibration &cal, const RadioConfig &config,
                                    double p_rxl_dbm)
{
    const double leg = leg_success_probability(cal, config, p_rxl_dbm);
    return leg * leg;
}

double uwb_rx_level_dbm(const LinkGeometry &geometry, const RadioConfig &config,
                        const ChannelCalibration &cal)
{
    return cal.tx_power_uwb_dbm - fspl_db(geometry.distance_m, config.center_frequency_hz) -
           geometry.total_excess_loss_db();
}

ChannelDraw draw_uwb(const LinkGeometry &geometry, const RadioConfig &config,
                     const ChannelCalibration &cal, Rng &rng)
{
    require(geometry.distance_m > 0.0, ErrorCode::Domain, "link distance must be positive");

    ChannelDraw draw;
    draw.tof_true_s = geometry.distance_m / kSpeedOfLight;
    draw.p_rxl_dbm = uwb_rx_level_dbm(geometry, config, cal);
    draw.rssi_dbm = draw.p_rxl_dbm;

    const bool nlos = !geometry.los();
    double gap_mean = cal.los_fp_gap_db;
    if (nlos) {
        gap_mean = cal.nlos_fp_gap_db;
        for (const Obstruction &o : geometry.obstructions) {
            if (o.fp_gap_db) {
                gap_mean = *o.fp_gap_db;
                break;
            }
        }
    }
    const double gap = std::max(0.0, rng.normal(gap_mean, cal.fp_gap_sigma_db));
    draw.p_fp_dbm = draw.p_rxl_dbm - gap;

    // One-way timestamp perturbation. Each leg carries the full distance bias
    // and sigma/sqrt(2) of jitter so a two-leg round averages back to the
    // configured end-to-end figures.
    const double sigma_leg =
        cal.sigma_m(config.mode_id, geometry.distance_m) * std::sqrt(2.0) / kSpeedOfLight;
    const double bias_leg =
        cal.range_bias_m(config.mode_id, geometry.distance_m, nlos) / kSpeedOfLight;
    draw.tof_noise_s = bias_leg + rng.normal(0.0, sigma_leg);

    draw.received = rng.bernoulli(leg_success_probability(cal, config, draw.p_rxl_dbm));
    return draw;
}

ChannelDraw draw_ble(const LinkGeometry &geometry, const ChannelCalibration &cal, Rng &rng)
{
    require(geometry.distance_m > 0.0, ErrorCode::Domain, "link distance must be positive");

    const bool nlos = !geometry.los();
    ChannelDraw draw;
    draw.tof_true_s = geometry.distance_m / kSpeedOfLight;
    const double path_loss =
        10.0 * cal.ble_path_loss_exponent * std::log10(geometry.distance_m);
    const double sigma = nlos ? cal.ble_sigma_nlos_db : cal.ble_sigma_los_db;
    draw.rssi_dbm = cal.ble_ref_power_1m_dbm - path_loss - geometry.total_excess_loss_db() +
                    rng.normal(0.0, sigma);
    draw.p_rxl_dbm = draw.rssi_dbm;
    draw.p_fp_dbm = draw.rssi_dbm;
    draw.received = rng.bernoulli(nlos ? cal.ble_reception_nlos : cal.ble_reception_los);
    return draw;
}

} // namespace uwbsim
