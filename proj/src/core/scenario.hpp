// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/bias.hpp"
#include "core/channel.hpp"
#include "core/estimation.hpp"
#include "core/power.hpp"
#include "core/twr.hpp"

namespace uwbsim {

enum class NodeRole {
    Tag,
    Anchor,
    Gateway,
};

const char *node_role_name(NodeRole role);

struct ScenarioNode {
    int id = 0;
    NodeRole role = NodeRole::Tag;
    Vec2 position;
    double drift_ppm = 0.0;
    std::optional<double> clock_phase_s; // absent: seeded random phase
};

/// A wall-like obstacle: a 2D segment that attenuates every link crossing it.
struct ScenarioObstacle {
    Vec2 a;
    Vec2 b;
    std::string material = "wall";
    double thickness_mm = 0.0;
    double excess_loss_db = 0.0;
    std::optional<double> fp_gap_db;
};

struct MotionWaypoint {
    double t_s = 0.0;
    Vec2 position;
};

struct MotionTrace {
    int node_id = 0;
    std::vector<MotionWaypoint> waypoints;
};

struct RangingPlan {
    enum class Schedule { Interval, Policy };
    Schedule schedule = Schedule::Interval;
    RangingScheme scheme = RangingScheme::SingleSided;
    std::vector<std::pair<int, int>> pairs; // (tag, anchor); Interval only
    int count = 0;                          // cycles; Interval only
    double interval_s = 1.0;
    bool with_ble = false; // draw a BLE measurement alongside each round
};

struct PositioningPlan {
    bool enabled = false;
    std::optional<Vec2> half_plane; // disambiguation side for two-anchor fixes
};

struct SweepPlan {
    std::vector<int> modes;
    std::vector<double> distances_m;
    std::vector<double> rx_delays_s;

    bool empty() const { return modes.empty() && distances_m.empty() && rx_delays_s.empty(); }
};

struct Scenario {
    int schema_version = 1;
    std::string name;
    std::uint64_t seed = 1;
    double duration_s = 0.0;
    int mode_id = 4;

    ProtocolTiming timing;
    DutyCyclePolicy policy;
    ChannelCalibration calibration = ChannelCalibration::defaults();
    PowerProfile profile = PowerProfile::defaults();
    double battery_capacity_mah = 200.0;
    double mesh_latency_s = 0.05;

    std::vector<ScenarioNode> nodes;
    std::vector<ScenarioObstacle> obstacles;
    std::vector<MotionTrace> motion;
    RangingPlan ranging;
    PositioningPlan positioning;
    SweepPlan sweep;
    std::optional<BiasTable> bias_table; // estimation-side correction table

    const ScenarioNode *find_node(int id) const;
};

/// Parses and validates a scenario document; every problem is reported with
/// its JSON path, all collected into one Validation error.
Scenario scenario_from_json_text(const std::string &text);
Scenario scenario_from_file(const std::string &path);

/// The correction table the estimation pipeline applies for this scenario.
BiasTable effective_bias_table(const Scenario &scenario);

/// One-paragraph human-readable description (used by the validate command).
std::string describe(const Scenario &scenario);

} // namespace uwbsim
