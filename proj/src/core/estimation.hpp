// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "core/bias.hpp"
#include "core/twr.hpp"

namespace uwbsim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

enum class RangingMethod {
    UwbTof,
    BleRssi,
};

enum class PathClass {
    Los,
    Nlos,
};

struct DistanceEstimate {
    double meters = 0.0;
    RangingMethod method = RangingMethod::UwbTof;
    bool nlos_flag = false;
    double raw_tof_s = 0.0; // UWB only
};

struct Position2D {
    double x = 0.0;
    double y = 0.0;
    double residual_m = 0.0;
    std::optional<Vec2> ambiguity; // second circle-intersection solution
};

inline constexpr double kNlosThresholdDb = 7.0;
inline constexpr double kNlosDownWeight = 0.25;

/// Plain single-sided time of flight: ((t4-t1) - (t3-t2)) / 2 in tick
/// arithmetic, wraparound-safe. Throws on a negative round.
double tof_sstwr_s(const RangingExchange &exchange);

/// Analytic ranging error an uncorrected single-sided round carries:
/// c * reply/2 * (drift_anchor - drift_tag) ppm. This is the shortfall of the
/// estimate, i.e. the amount a perfect correction adds back.
double drift_error_m(double reply_s, double drift_tag_ppm, double drift_anchor_ppm);

/// Drift-corrected time of flight: (t_round - ratio * t_reply) / 2 where
/// ratio is the tag/anchor clock-rate ratio. Throws when the ratio leaves the
/// +-100 ppm plausibility band.
double correct_drift_s(const RangingExchange &exchange, double clock_offset_ratio);

/// Double-sided time of flight (Ra*Rb - Da*Db) / (Ra+Rb+Da+Db); first-order
/// drift-insensitive. Requires the second round pair.
double tof_dstwr_s(const RangingExchange &exchange);

/// Removes the tabulated distance-dependent bias: raw - bias(raw).
double correct_bias_m(double raw_m, const BiasTable &table);

/// Log-distance inversion of a received signal strength.
double distance_from_rssi_m(double rssi_dbm, double ref_power_1m_dbm, double exponent);

/// NLOS iff the spread between total and first-path level reaches the
/// threshold. Throws when the first path exceeds the total level.
PathClass classify_nlos(double p_rxl_dbm, double p_fp_dbm,
                        double threshold_db = kNlosThresholdDb);

/// Intersection of two distance circles. Two solutions populate ambiguity;
/// non-intersecting circles yield the closest-approach midpoint with
/// residual = gap/2. Throws for coincident anchors.
Position2D intersect_two_circles(Vec2 a1, double r1, Vec2 a2, double r2);

/// Picks the circle-intersection solution lying on the same side of the
/// anchor axis as the given half-plane point.
Position2D resolve_half_plane(const Position2D &fix, Vec2 a1, Vec2 a2, Vec2 half_plane_point);

struct AnchorMeasurement {
    Vec2 position;
    double distance_m = 0.0;
    double weight = 1.0;
};

struct SolveOptions {
    int max_iterations = 50;
    double step_tolerance_m = 1e-12;
    double nlos_weight = kNlosDownWeight;
};

struct SolveResult {
    Position2D position;
    bool converged = false;
    int iterations = 0;
};

/// Weighted nonlinear least squares (Gauss-Newton) over >= 3 non-collinear
/// anchors. Throws on degenerate geometry; a non-converged solve returns the
/// best iterate with converged = false.
SolveResult multilaterate(std::span<const AnchorMeasurement> anchors,
                          const SolveOptions &options = {});

/// Convenience overload: NLOS-flagged estimates get the configured down-weight.
SolveResult multilaterate(std::span<const std::pair<Vec2, DistanceEstimate>> anchors,
                          const SolveOptions &options = {});

} // namespace uwbsim
