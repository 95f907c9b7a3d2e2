// SPDX-License-Identifier: Apache-2.0
#include "core/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "core/error.hpp"

namespace uwbsim {

using nlohmann::json;

namespace {

/// Collects every problem with its JSON path before giving up.
class Validator {
  public:
    void error(const std::string &path, const std::string &message)
    {
        errors_.push_back(path + ": " + message);
    }

    void finish() const
    {
        if (errors_.empty())
            return;
        std::string joined = "scenario validation failed:";
        for (const std::string &e : errors_)
            joined += "\n  " + e;
        fail(ErrorCode::Validation, joined);
    }

    bool ok() const { return errors_.empty(); }

  private:
    std::vector<std::string> errors_;
};

double get_number(const json &j, const std::string &path, const char *key, double fallback,
                  Validator &v)
{
    if (!j.contains(key))
        return fallback;
    if (!j[key].is_number()) {
        v.error(path + "/" + key, "expected a number");
        return fallback;
    }
    return j[key].get<double>();
}

int get_int(const json &j, const std::string &path, const char *key, int fallback, Validator &v)
{
    if (!j.contains(key))
        return fallback;
    if (!j[key].is_number_integer()) {
        v.error(path + "/" + key, "expected an integer");
        return fallback;
    }
    return j[key].get<int>();
}

bool get_bool(const json &j, const std::string &path, const char *key, bool fallback,
              Validator &v)
{
    if (!j.contains(key))
        return fallback;
    if (!j[key].is_boolean()) {
        v.error(path + "/" + key, "expected a boolean");
        return fallback;
    }
    return j[key].get<bool>();
}

std::optional<Vec2> get_point(const json &j, const std::string &path, Validator &v)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        v.error(path, "expected [x, y]");
        return std::nullopt;
    }
    return Vec2{j[0].get<double>(), j[1].get<double>()};
}

void parse_calibration(const json &j, const std::string &path, ChannelCalibration &cal,
                       Validator &v)
{
    cal.tx_power_uwb_dbm = get_number(j, path, "tx_power_uwb_dbm", cal.tx_power_uwb_dbm, v);
    cal.logistic_scale_db = get_number(j, path, "logistic_scale_db", cal.logistic_scale_db, v);
    cal.los_fp_gap_db = get_number(j, path, "los_fp_gap_db", cal.los_fp_gap_db, v);
    cal.nlos_fp_gap_db = get_number(j, path, "nlos_fp_gap_db", cal.nlos_fp_gap_db, v);
    cal.fp_gap_sigma_db = get_number(j, path, "fp_gap_sigma_db", cal.fp_gap_sigma_db, v);
    cal.nlos_range_bias_sigmas =
        get_number(j, path, "nlos_range_bias_sigmas", cal.nlos_range_bias_sigmas, v);
    cal.replay_range_bias = get_bool(j, path, "replay_range_bias", cal.replay_range_bias, v);
    cal.range_bias_mode = get_int(j, path, "range_bias_mode", cal.range_bias_mode, v);
    cal.ratio_noise_ppm = get_number(j, path, "ratio_noise_ppm", cal.ratio_noise_ppm, v);
    cal.ble_ref_power_1m_dbm =
        get_number(j, path, "ble_ref_power_1m_dbm", cal.ble_ref_power_1m_dbm, v);
    cal.ble_path_loss_exponent =
        get_number(j, path, "ble_path_loss_exponent", cal.ble_path_loss_exponent, v);
    cal.ble_sigma_los_db = get_number(j, path, "ble_sigma_los_db", cal.ble_sigma_los_db, v);
    cal.ble_sigma_nlos_db = get_number(j, path, "ble_sigma_nlos_db", cal.ble_sigma_nlos_db, v);
    cal.ble_reception_los = get_number(j, path, "ble_reception_los", cal.ble_reception_los, v);
    cal.ble_reception_nlos =
        get_number(j, path, "ble_reception_nlos", cal.ble_reception_nlos, v);

    for (const char *key : {"sigma_near_m", "sigma_far_m", "sensitivity_dbm"}) {
        if (!j.contains(key))
            continue;
        const json &arr = j[key];
        if (!arr.is_array() || arr.size() != kModeCount) {
            v.error(path + "/" + key, "expected an array of 6 numbers");
            continue;
        }
        for (int i = 0; i < kModeCount; ++i) {
            if (!arr[i].is_number()) {
                v.error(path + "/" + key, "expected an array of 6 numbers");
                break;
            }
            const double value = arr[i].get<double>();
            if (std::string(key) == "sigma_near_m")
                cal.sigma_near_m[i] = value;
            else if (std::string(key) == "sigma_far_m")
                cal.sigma_far_m[i] = value;
            else
                cal.sensitivity_dbm[i] = value;
        }
    }
}

std::optional<BiasTable> parse_bias_table(const json &j, const std::string &path, Validator &v)
{
    if (!j.is_array()) {
        v.error(path, "expected an array of [distance_m, bias_m] pairs");
        return std::nullopt;
    }
    std::vector<BiasTable::Breakpoint> points;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json &row = j[i];
        if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number()) {
            v.error(path + "/" + std::to_string(i), "expected [distance_m, bias_m]");
            return std::nullopt;
        }
        points.push_back({row[0].get<double>(), row[1].get<double>()});
    }
    try {
        return BiasTable(points);
    } catch (const Error &e) {
        v.error(path, e.what());
        return std::nullopt;
    }
}

} // namespace

const char *node_role_name(NodeRole role)
{
    switch (role) {
    case NodeRole::Tag: return "tag";
    case NodeRole::Anchor: return "anchor";
    case NodeRole::Gateway: return "gateway";
    }
    return "?";
}

const ScenarioNode *Scenario::find_node(int id) const
{
    for (const ScenarioNode &node : nodes)
        if (node.id == id)
            return &node;
    return nullptr;
}

Scenario scenario_from_json_text(const std::string &text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        // Translate the byte offset into a line number for the message.
        std::size_t line = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
            if (text[i] == '\n')
                ++line;
        fail(ErrorCode::Parse, "line " + std::to_string(line) + ": " + e.what());
    }

    Validator v;
    Scenario s;

    if (!j.is_object()) {
        v.error("/", "expected a JSON object");
        v.finish();
    }

    s.schema_version = get_int(j, "", "schema_version", 0, v);
    if (s.schema_version != 1)
        v.error("/schema_version", "required and must be 1");
    s.name = j.value("name", std::string("unnamed"));
    if (j.contains("seed")) {
        if (j["seed"].is_number_unsigned() || j["seed"].is_number_integer())
            s.seed = j["seed"].get<std::uint64_t>();
        else
            v.error("/seed", "expected an integer");
    }
    s.duration_s = get_number(j, "", "duration_s", 0.0, v);
    if (s.duration_s <= 0.0)
        v.error("/duration_s", "must be positive");

    if (j.contains("radio")) {
        const json &radio = j["radio"];
        s.mode_id = get_int(radio, "/radio", "mode", s.mode_id, v);
        if (s.mode_id < 1 || s.mode_id > kModeCount)
            v.error("/radio/mode", "must be in 1..6");
        if (radio.contains("tx_power_dbm"))
            s.calibration.tx_power_uwb_dbm =
                get_number(radio, "/radio", "tx_power_dbm", s.calibration.tx_power_uwb_dbm, v);
    }

    if (j.contains("timing")) {
        const json &t = j["timing"];
        s.timing.anchor_processing_s =
            get_number(t, "/timing", "anchor_processing_s", s.timing.anchor_processing_s, v);
        s.timing.tag_processing_s =
            get_number(t, "/timing", "tag_processing_s", s.timing.tag_processing_s, v);
        s.timing.rx_delay_s = get_number(t, "/timing", "rx_delay_s", s.timing.rx_delay_s, v);
        s.timing.response_timeout_s =
            get_number(t, "/timing", "response_timeout_s", s.timing.response_timeout_s, v);
        if (s.timing.anchor_processing_s <= 0.0)
            v.error("/timing/anchor_processing_s", "must be positive");
        if (s.timing.rx_delay_s < 0.0)
            v.error("/timing/rx_delay_s", "must be non-negative");
    }

    if (j.contains("policy")) {
        const json &p = j["policy"];
        s.policy.t_offset_s = get_number(p, "/policy", "t_offset_s", s.policy.t_offset_s, v);
        s.policy.n_range_m = get_number(p, "/policy", "n_range_m", s.policy.n_range_m, v);
        s.policy.f_update = get_int(p, "/policy", "f_update", s.policy.f_update, v);
        s.policy.update_interval_s =
            get_number(p, "/policy", "update_interval_s", s.policy.update_interval_s, v);
        s.policy.advertise_interval_s =
            get_number(p, "/policy", "advertise_interval_s", s.policy.advertise_interval_s, v);
        s.policy.mesh_hop_limit =
            get_int(p, "/policy", "mesh_hop_limit", s.policy.mesh_hop_limit, v);
        if (s.policy.t_offset_s <= 0.0 || s.policy.n_range_m <= 0.0 || s.policy.f_update <= 0 ||
            s.policy.update_interval_s <= 0.0 || s.policy.advertise_interval_s <= 0.0)
            v.error("/policy", "all policy parameters must be positive");
        if (s.policy.mesh_hop_limit < 0)
            v.error("/policy/mesh_hop_limit", "must be non-negative");
    }

    if (j.contains("battery")) {
        const json &b = j["battery"];
        s.battery_capacity_mah =
            get_number(b, "/battery", "capacity_mah", s.battery_capacity_mah, v);
        if (s.battery_capacity_mah <= 0.0)
            v.error("/battery/capacity_mah", "must be positive");
        if (b.contains("base_preset")) {
            const std::string preset = b["base_preset"].is_string()
                                           ? b["base_preset"].get<std::string>()
                                           : std::string();
            if (preset == "debug")
                s.profile.base_node_current_ma = 0.85;
            else if (preset == "productive")
                s.profile.base_node_current_ma = s.profile.base_node_current_trim_ma;
            else
                v.error("/battery/base_preset", "expected \"debug\" or \"productive\"");
        }
        s.profile.base_node_current_ma = get_number(b, "/battery", "base_node_current_ma",
                                                    s.profile.base_node_current_ma, v);
    }

    if (j.contains("mesh"))
        s.mesh_latency_s = get_number(j["mesh"], "/mesh", "latency_s", s.mesh_latency_s, v);
    if (s.mesh_latency_s < 0.0)
        v.error("/mesh/latency_s", "must be non-negative");

    if (j.contains("calibration")) {
        parse_calibration(j["calibration"], "/calibration", s.calibration, v);
        if (j["calibration"].contains("bias_table_m"))
            s.bias_table = parse_bias_table(j["calibration"]["bias_table_m"],
                                            "/calibration/bias_table_m", v);
    }

    std::set<int> ids;
    if (!j.contains("nodes") || !j["nodes"].is_array() || j["nodes"].empty()) {
        v.error("/nodes", "at least one node is required");
    } else {
        const json &nodes = j["nodes"];
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const std::string path = "/nodes/" + std::to_string(i);
            const json &n = nodes[i];
            ScenarioNode node;
            node.id = get_int(n, path, "id", -1, v);
            if (node.id < 0)
                v.error(path + "/id", "required non-negative integer");
            else if (!ids.insert(node.id).second)
                v.error(path + "/id", "duplicate id " + std::to_string(node.id));
            const std::string role = n.value("role", std::string());
            if (role == "tag")
                node.role = NodeRole::Tag;
            else if (role == "anchor")
                node.role = NodeRole::Anchor;
            else if (role == "gateway")
                node.role = NodeRole::Gateway;
            else
                v.error(path + "/role", "expected tag, anchor or gateway");
            if (n.contains("position")) {
                if (auto p = get_point(n["position"], path + "/position", v))
                    node.position = *p;
            } else {
                v.error(path + "/position", "required");
            }
            node.drift_ppm = get_number(n, path, "drift_ppm", 0.0, v);
            if (std::abs(node.drift_ppm) > 20.0)
                v.error(path + "/drift_ppm", "must stay within +-20 ppm");
            if (n.contains("clock_phase_s"))
                node.clock_phase_s = get_number(n, path, "clock_phase_s", 0.0, v);
            s.nodes.push_back(node);
        }
    }

    if (j.contains("obstacles")) {
        const json &obstacles = j["obstacles"];
        if (!obstacles.is_array()) {
            v.error("/obstacles", "expected an array");
        } else {
            for (std::size_t i = 0; i < obstacles.size(); ++i) {
                const std::string path = "/obstacles/" + std::to_string(i);
                const json &o = obstacles[i];
                ScenarioObstacle obstacle;
                if (o.contains("segment") && o["segment"].is_array() &&
                    o["segment"].size() == 2) {
                    if (auto a = get_point(o["segment"][0], path + "/segment/0", v))
                        obstacle.a = *a;
                    if (auto b = get_point(o["segment"][1], path + "/segment/1", v))
                        obstacle.b = *b;
                } else {
                    v.error(path + "/segment", "expected [[x1,y1],[x2,y2]]");
                }
                obstacle.material = o.value("material", obstacle.material);
                obstacle.thickness_mm = get_number(o, path, "thickness_mm", 0.0, v);
                obstacle.excess_loss_db = get_number(o, path, "excess_loss_db", 0.0, v);
                if (obstacle.excess_loss_db < 0.0)
                    v.error(path + "/excess_loss_db", "must be non-negative");
                if (o.contains("fp_gap_db"))
                    obstacle.fp_gap_db = get_number(o, path, "fp_gap_db", 0.0, v);
                s.obstacles.push_back(obstacle);
            }
        }
    }

    if (j.contains("motion")) {
        const json &motion = j["motion"];
        if (!motion.is_array()) {
            v.error("/motion", "expected an array");
        } else {
            for (std::size_t i = 0; i < motion.size(); ++i) {
                const std::string path = "/motion/" + std::to_string(i);
                const json &m = motion[i];
                MotionTrace trace;
                trace.node_id = get_int(m, path, "node", -1, v);
                if (!m.contains("waypoints") || !m["waypoints"].is_array() ||
                    m["waypoints"].size() < 2) {
                    v.error(path + "/waypoints", "expected at least two waypoints");
                } else {
                    const json &wps = m["waypoints"];
                    for (std::size_t k = 0; k < wps.size(); ++k) {
                        const std::string wpath = path + "/waypoints/" + std::to_string(k);
                        MotionWaypoint wp;
                        wp.t_s = get_number(wps[k], wpath, "t", -1.0, v);
                        if (wp.t_s < 0.0 || wp.t_s > s.duration_s)
                            v.error(wpath + "/t", "must lie within [0, duration_s]");
                        if (!trace.waypoints.empty() && wp.t_s <= trace.waypoints.back().t_s)
                            v.error(wpath + "/t", "waypoint times must increase");
                        wp.position.x = get_number(wps[k], wpath, "x", 0.0, v);
                        wp.position.y = get_number(wps[k], wpath, "y", 0.0, v);
                        trace.waypoints.push_back(wp);
                    }
                }
                s.motion.push_back(trace);
            }
        }
    }

    if (j.contains("ranging")) {
        const json &r = j["ranging"];
        const std::string schedule = r.value("schedule", std::string("interval"));
        if (schedule == "interval")
            s.ranging.schedule = RangingPlan::Schedule::Interval;
        else if (schedule == "policy")
            s.ranging.schedule = RangingPlan::Schedule::Policy;
        else
            v.error("/ranging/schedule", "expected interval or policy");
        const std::string scheme = r.value("scheme", std::string("ss"));
        if (scheme == "ss")
            s.ranging.scheme = RangingScheme::SingleSided;
        else if (scheme == "ds")
            s.ranging.scheme = RangingScheme::DoubleSided;
        else
            v.error("/ranging/scheme", "expected ss or ds");
        s.ranging.count = get_int(r, "/ranging", "count", 0, v);
        s.ranging.interval_s = get_number(r, "/ranging", "interval_s", s.ranging.interval_s, v);
        s.ranging.with_ble = get_bool(r, "/ranging", "with_ble", false, v);
        if (r.contains("pairs")) {
            if (!r["pairs"].is_array()) {
                v.error("/ranging/pairs", "expected an array of [tag, anchor] pairs");
            } else {
                for (std::size_t i = 0; i < r["pairs"].size(); ++i) {
                    const json &pair = r["pairs"][i];
                    const std::string path = "/ranging/pairs/" + std::to_string(i);
                    if (!pair.is_array() || pair.size() != 2 ||
                        !pair[0].is_number_integer() || !pair[1].is_number_integer()) {
                        v.error(path, "expected [tag_id, anchor_id]");
                        continue;
                    }
                    s.ranging.pairs.emplace_back(pair[0].get<int>(), pair[1].get<int>());
                }
            }
        }
    }

    if (j.contains("positioning")) {
        const json &p = j["positioning"];
        s.positioning.enabled = get_bool(p, "/positioning", "enabled", true, v);
        if (p.contains("half_plane"))
            if (auto hp = get_point(p["half_plane"], "/positioning/half_plane", v))
                s.positioning.half_plane = *hp;
    }

    if (j.contains("sweep")) {
        const json &sw = j["sweep"];
        if (sw.contains("modes") && sw["modes"].is_array())
            for (const json &m : sw["modes"])
                s.sweep.modes.push_back(m.is_number_integer() ? m.get<int>() : 0);
        if (sw.contains("distances_m") && sw["distances_m"].is_array())
            for (const json &d : sw["distances_m"])
                s.sweep.distances_m.push_back(d.is_number() ? d.get<double>() : 0.0);
        if (sw.contains("rx_delays_s") && sw["rx_delays_s"].is_array())
            for (const json &d : sw["rx_delays_s"])
                s.sweep.rx_delays_s.push_back(d.is_number() ? d.get<double>() : 0.0);
        for (int m : s.sweep.modes)
            if (m < 1 || m > kModeCount)
                v.error("/sweep/modes", "modes must be in 1..6");
        for (double d : s.sweep.distances_m)
            if (d <= 0.0)
                v.error("/sweep/distances_m", "distances must be positive");
        for (double d : s.sweep.rx_delays_s)
            if (d < 0.0)
                v.error("/sweep/rx_delays_s", "delays must be non-negative");
    }

    // Cross-references and schedule feasibility.
    if (v.ok()) {
        for (std::size_t i = 0; i < s.motion.size(); ++i) {
            const MotionTrace &trace = s.motion[i];
            const ScenarioNode *node = s.find_node(trace.node_id);
            if (!node)
                v.error("/motion/" + std::to_string(i) + "/node", "unknown node id");
            else if (node->role != NodeRole::Tag)
                v.error("/motion/" + std::to_string(i) + "/node", "motion traces attach to tags");
        }
        for (std::size_t i = 0; i < s.ranging.pairs.size(); ++i) {
            const auto &[tag_id, anchor_id] = s.ranging.pairs[i];
            const std::string path = "/ranging/pairs/" + std::to_string(i);
            const ScenarioNode *tag = s.find_node(tag_id);
            const ScenarioNode *anchor = s.find_node(anchor_id);
            if (!tag || tag->role != NodeRole::Tag)
                v.error(path, "first entry must be a tag id");
            if (!anchor || anchor->role != NodeRole::Anchor)
                v.error(path, "second entry must be an anchor id");
        }
        if (s.ranging.schedule == RangingPlan::Schedule::Interval) {
            if (s.ranging.pairs.empty())
                v.error("/ranging/pairs", "interval schedule needs at least one pair");
            if (s.ranging.count <= 0)
                v.error("/ranging/count", "interval schedule needs a positive cycle count");
            if (s.ranging.interval_s <= 0.0)
                v.error("/ranging/interval_s", "must be positive");
            else if (s.ranging.count * s.ranging.interval_s > s.duration_s)
                v.error("/ranging", "count * interval_s exceeds duration_s");
        }
        try {
            effective_rx_window_s(s.timing, s.mode_id, s.profile);
        } catch (const Error &e) {
            v.error("/timing", e.what());
        }
    }

    v.finish();
    return s;
}

Scenario scenario_from_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(ErrorCode::Io, "cannot open scenario file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return scenario_from_json_text(buffer.str());
    } catch (const Error &e) {
        throw Error(e.code(), path + ": " + e.what());
    }
}

BiasTable effective_bias_table(const Scenario &scenario)
{
    if (scenario.bias_table)
        return *scenario.bias_table;
    if (scenario.calibration.replay_range_bias &&
        scenario.mode_id == scenario.calibration.range_bias_mode)
        return BiasTable::mode4_default();
    return BiasTable();
}

std::string describe(const Scenario &scenario)
{
    std::ostringstream out;
    int tags = 0, anchors = 0, gateways = 0;
    for (const ScenarioNode &n : scenario.nodes) {
        if (n.role == NodeRole::Tag)
            ++tags;
        else if (n.role == NodeRole::Anchor)
            ++anchors;
        else
            ++gateways;
    }
    out << "scenario '" << scenario.name << "': mode " << scenario.mode_id << ", " << tags
        << " tag(s), " << anchors << " anchor(s), " << gateways << " gateway(s), "
        << scenario.obstacles.size() << " obstacle(s), duration " << scenario.duration_s
        << " s, seed " << scenario.seed;
    if (scenario.ranging.schedule == RangingPlan::Schedule::Interval)
        out << ", " << scenario.ranging.count << " ranging cycle(s) over "
            << scenario.ranging.pairs.size() << " pair(s)";
    else
        out << ", policy-driven ranging";
    if (!scenario.sweep.empty())
        out << ", sweep grid attached";
    return out.str();
}

} // namespace uwbsim
