// SPDX-License-Identifier: Apache-2.0
#include "core/estimation.hpp"

#include <cmath>
#include <string>

#include "core/constants.hpp"
#include "core/error.hpp"

namespace uwbsim {

namespace {

void require_complete(const RangingExchange &exchange)
{
    require(exchange.outcome == ExchangeOutcome::Complete, ErrorCode::Protocol,
            "exchange did not complete");
}

double norm(Vec2 v)
{
    return std::hypot(v.x, v.y);
}

double cross(Vec2 a, Vec2 b)
{
    return a.x * b.y - a.y * b.x;
}

} // namespace

double tof_sstwr_s(const RangingExchange &exchange)
{
    require_complete(exchange);
    const std::uint64_t round = wrap_diff(exchange.t4_rx_resp, exchange.t1_tx_poll);
    const std::uint64_t reply = wrap_diff(exchange.t3_tx_resp, exchange.t2_rx_poll);
    require(round > reply, ErrorCode::Protocol,
            "round shorter than reply: corrupted timestamps");
    const double tof_ticks = (static_cast<double>(round) - static_cast<double>(reply)) / 2.0;
    return tof_ticks * kTickSeconds;
}

double drift_error_m(double reply_s, double drift_tag_ppm, double drift_anchor_ppm)
{
    require(reply_s > 0.0, ErrorCode::Domain, "reply time must be positive");
    return kSpeedOfLight * (reply_s / 2.0) * (drift_anchor_ppm - drift_tag_ppm) * 1e-6;
}

double correct_drift_s(const RangingExchange &exchange, double clock_offset_ratio)
{
    require_complete(exchange);
    require(std::abs(clock_offset_ratio - 1.0) < 100e-6, ErrorCode::Integrity,
            "clock ratio outside the +-100 ppm plausibility band");
    const std::uint64_t round = wrap_diff(exchange.t4_rx_resp, exchange.t1_tx_poll);
    const std::uint64_t reply = wrap_diff(exchange.t3_tx_resp, exchange.t2_rx_poll);
    const double tof_ticks =
        (static_cast<double>(round) - clock_offset_ratio * static_cast<double>(reply)) / 2.0;
    require(tof_ticks > 0.0, ErrorCode::Protocol,
            "round shorter than corrected reply: corrupted timestamps");
    return tof_ticks * kTickSeconds;
}

double tof_dstwr_s(const RangingExchange &exchange)
{
    require_complete(exchange);
    require(exchange.scheme == RangingScheme::DoubleSided, ErrorCode::Protocol,
            "second round pair missing: not a double-sided exchange");
    const std::uint64_t ra = wrap_diff(exchange.t4_rx_resp, exchange.t1_tx_poll);
    const std::uint64_t db = wrap_diff(exchange.t3_tx_resp, exchange.t2_rx_poll);
    const std::uint64_t rb = wrap_diff(exchange.t6_rx_final, exchange.t3_tx_resp);
    const std::uint64_t da = wrap_diff(exchange.t5_tx_final, exchange.t4_rx_resp);
    // Products exceed 2^53; keep them exact in 128-bit before the division.
    const __int128 numerator = static_cast<__int128>(ra) * static_cast<__int128>(rb) -
                               static_cast<__int128>(da) * static_cast<__int128>(db);
    const double denominator =
        static_cast<double>(ra) + static_cast<double>(rb) + static_cast<double>(da) +
        static_cast<double>(db);
    require(denominator > 0.0, ErrorCode::Protocol, "degenerate double-sided exchange");
    const double tof_ticks = static_cast<double>(numerator) / denominator;
    require(tof_ticks > 0.0, ErrorCode::Protocol,
            "negative double-sided time of flight: corrupted timestamps");
    return tof_ticks * kTickSeconds;
}

double correct_bias_m(double raw_m, const BiasTable &table)
{
    require(raw_m >= 0.0, ErrorCode::Domain, "distance must be non-negative");
    return raw_m - table.bias_m(raw_m);
}

double distance_from_rssi_m(double rssi_dbm, double ref_power_1m_dbm, double exponent)
{
    require(exponent > 0.0, ErrorCode::Domain, "path-loss exponent must be positive");
    return std::pow(10.0, (ref_power_1m_dbm - rssi_dbm) / (10.0 * exponent));
}

PathClass classify_nlos(double p_rxl_dbm, double p_fp_dbm, double threshold_db)
{
    require(p_fp_dbm <= p_rxl_dbm, ErrorCode::Integrity,
            "first-path level above total received level");
    return (p_rxl_dbm - p_fp_dbm) >= threshold_db ? PathClass::Nlos : PathClass::Los;
}

Position2D intersect_two_circles(Vec2 a1, double r1, Vec2 a2, double r2)
{
    const Vec2 axis{a2.x - a1.x, a2.y - a1.y};
    const double separation = norm(axis);
    require(separation > 1e-12, ErrorCode::Geometry, "coincident anchors");
    const Vec2 dir{axis.x / separation, axis.y / separation};

    Position2D fix;
    const double outer_gap = separation - (r1 + r2);
    const double inner_gap = std::abs(r1 - r2) - separation;
    if (outer_gap > 0.0) {
        // Disjoint circles: midpoint of the radial gap.
        const double along = r1 + outer_gap / 2.0;
        fix.x = a1.x + dir.x * along;
        fix.y = a1.y + dir.y * along;
        fix.residual_m = outer_gap / 2.0;
        return fix;
    }
    if (inner_gap > 0.0) {
        // One circle inside the other.
        const double along = r1 >= r2 ? (r1 + separation + r2) / 2.0
                                      : (separation - r2 - r1) / 2.0;
        fix.x = a1.x + dir.x * along;
        fix.y = a1.y + dir.y * along;
        fix.residual_m = inner_gap / 2.0;
        return fix;
    }

    const double along = (separation * separation + r1 * r1 - r2 * r2) / (2.0 * separation);
    const double offset_sq = r1 * r1 - along * along;
    const double offset = offset_sq > 0.0 ? std::sqrt(offset_sq) : 0.0;
    const Vec2 normal{-dir.y, dir.x};
    fix.x = a1.x + dir.x * along + normal.x * offset;
    fix.y = a1.y + dir.y * along + normal.y * offset;
    fix.residual_m = 0.0;
    if (offset > 1e-9 * std::max(1.0, separation)) {
        fix.ambiguity = Vec2{a1.x + dir.x * along - normal.x * offset,
                             a1.y + dir.y * along - normal.y * offset};
    }
    return fix;
}

Position2D resolve_half_plane(const Position2D &fix, Vec2 a1, Vec2 a2, Vec2 half_plane_point)
{
    if (!fix.ambiguity)
        return fix;
    const Vec2 axis{a2.x - a1.x, a2.y - a1.y};
    const double wanted = cross(axis, {half_plane_point.x - a1.x, half_plane_point.y - a1.y});
    const double primary = cross(axis, {fix.x - a1.x, fix.y - a1.y});
    if (wanted == 0.0 || (wanted > 0.0) == (primary > 0.0))
        return fix;
    Position2D flipped = fix;
    flipped.x = fix.ambiguity->x;
    flipped.y = fix.ambiguity->y;
    flipped.ambiguity = Vec2{fix.x, fix.y};
    return flipped;
}

namespace {

/// Linearized initial estimate: subtracting the first range equation from the
/// others leaves a linear system in the position.
bool linear_init(std::span<const AnchorMeasurement> anchors, Vec2 &out)
{
    const auto &first = anchors[0];
    double ata[3] = {0.0, 0.0, 0.0}; // packed symmetric 2x2
    double atb[2] = {0.0, 0.0};
    for (std::size_t i = 1; i < anchors.size(); ++i) {
        const auto &a = anchors[i];
        const double rx = 2.0 * (a.position.x - first.position.x);
        const double ry = 2.0 * (a.position.y - first.position.y);
        const double rhs = first.distance_m * first.distance_m - a.distance_m * a.distance_m +
                           a.position.x * a.position.x - first.position.x * first.position.x +
                           a.position.y * a.position.y - first.position.y * first.position.y;
        ata[0] += rx * rx;
        ata[1] += rx * ry;
        ata[2] += ry * ry;
        atb[0] += rx * rhs;
        atb[1] += ry * rhs;
    }
    const double det = ata[0] * ata[2] - ata[1] * ata[1];
    if (std::abs(det) < 1e-12)
        return false;
    out.x = (atb[0] * ata[2] - atb[1] * ata[1]) / det;
    out.y = (atb[1] * ata[0] - atb[0] * ata[1]) / det;
    return true;
}

double weighted_rms_residual(std::span<const AnchorMeasurement> anchors, Vec2 p)
{
    double sum = 0.0;
    double weight_sum = 0.0;
    for (const auto &a : anchors) {
        const double range = norm({p.x - a.position.x, p.y - a.position.y});
        const double r = range - a.distance_m;
        sum += a.weight * r * r;
        weight_sum += a.weight;
    }
    return weight_sum > 0.0 ? std::sqrt(sum / weight_sum) : 0.0;
}

} // namespace

SolveResult multilaterate(std::span<const AnchorMeasurement> anchors,
                          const SolveOptions &options)
{
    require(anchors.size() >= 3, ErrorCode::Geometry,
            "need at least three anchors for a unique 2D fix");
    for (const auto &a : anchors)
        require(a.weight >= 0.0 && a.distance_m >= 0.0, ErrorCode::Domain,
                "weights and distances must be non-negative");

    // Collinearity check via the spread of anchor positions.
    {
        Vec2 mean{0.0, 0.0};
        for (const auto &a : anchors) {
            mean.x += a.position.x;
            mean.y += a.position.y;
        }
        mean.x /= static_cast<double>(anchors.size());
        mean.y /= static_cast<double>(anchors.size());
        double sxx = 0.0, sxy = 0.0, syy = 0.0;
        for (const auto &a : anchors) {
            const double dx = a.position.x - mean.x;
            const double dy = a.position.y - mean.y;
            sxx += dx * dx;
            sxy += dx * dy;
            syy += dy * dy;
        }
        const double trace = sxx + syy;
        const double det = sxx * syy - sxy * sxy;
        const double disc = std::sqrt(std::max(0.0, trace * trace / 4.0 - det));
        const double lambda_min = trace / 2.0 - disc;
        require(trace > 0.0 && lambda_min > 1e-9 * trace, ErrorCode::Geometry,
                "collinear anchors: degenerate geometry");
    }

    Vec2 p;
    if (!linear_init(anchors, p)) {
        p = Vec2{0.0, 0.0};
        for (const auto &a : anchors) {
            p.x += a.position.x;
            p.y += a.position.y;
        }
        p.x /= static_cast<double>(anchors.size());
        p.y /= static_cast<double>(anchors.size());
    }

    SolveResult result;
    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        double jtj[3] = {0.0, 0.0, 0.0};
        double jtr[2] = {0.0, 0.0};
        for (const auto &a : anchors) {
            Vec2 d{p.x - a.position.x, p.y - a.position.y};
            double range = norm(d);
            if (range < 1e-12) {
                d = {1e-9, 0.0};
                range = 1e-9;
            }
            const double jx = d.x / range;
            const double jy = d.y / range;
            const double r = range - a.distance_m;
            jtj[0] += a.weight * jx * jx;
            jtj[1] += a.weight * jx * jy;
            jtj[2] += a.weight * jy * jy;
            jtr[0] += a.weight * jx * r;
            jtr[1] += a.weight * jy * r;
        }
        const double det = jtj[0] * jtj[2] - jtj[1] * jtj[1];
        if (std::abs(det) < 1e-300)
            break;
        const double step_x = -(jtr[0] * jtj[2] - jtr[1] * jtj[1]) / det;
        const double step_y = -(jtr[1] * jtj[0] - jtr[0] * jtj[1]) / det;
        p.x += step_x;
        p.y += step_y;
        result.iterations = iter;
        if (std::hypot(step_x, step_y) < options.step_tolerance_m) {
            result.converged = true;
            break;
        }
    }

    result.position.x = p.x;
    result.position.y = p.y;
    result.position.residual_m = weighted_rms_residual(anchors, p);
    return result;
}

SolveResult multilaterate(std::span<const std::pair<Vec2, DistanceEstimate>> anchors,
                          const SolveOptions &options)
{
    std::vector<AnchorMeasurement> measurements;
    measurements.reserve(anchors.size());
    for (const auto &[position, estimate] : anchors) {
        measurements.push_back(
            {position, estimate.meters, estimate.nlos_flag ? options.nlos_weight : 1.0});
    }
    return multilaterate(std::span<const AnchorMeasurement>(measurements), options);
}

} // namespace uwbsim
