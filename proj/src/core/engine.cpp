// SPDX-License-Identifier: Apache-2.0
#include "core/engine.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "core/constants.hpp"
#include "core/error.hpp"
#include "core/rng.hpp"

namespace uwbsim {

namespace {

double segment_orientation(Vec2 a, Vec2 b, Vec2 c)
{
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2)
{
    const double o1 = segment_orientation(p1, p2, q1);
    const double o2 = segment_orientation(p1, p2, q2);
    const double o3 = segment_orientation(q1, q2, p1);
    const double o4 = segment_orientation(q1, q2, p2);
    return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

enum class EventKind {
    Cycle,
    MotionStart,
    MotionStop,
    Advertise,
    MeshDeliver,
    UpdateRound,
    AnchorSleepDeadline,
};

struct Event {
    double time_s;
    std::uint64_t seq;
    EventKind kind;
    int node_id;
    int aux;

    bool operator>(const Event &other) const
    {
        if (time_s != other.time_s)
            return time_s > other.time_s;
        return seq > other.seq;
    }
};

struct MotionInterval {
    double begin_s;
    double end_s;
};

class Engine {
  public:
    Engine(const Scenario &scenario, std::uint64_t seed)
        : scenario_(scenario), seed_(seed), rng_(seed)
    {
    }

    RunResult execute();

  private:
    struct NodeRt {
        ScenarioNode def;
        DeviceClock clock;
        PowerLedger ledger;
        RadioState background = RadioState::Sleep;
        double cursor_s = 0.0;     // ledger filled up to here
        double busy_until_s = 0.0; // exchange occupancy
        bool awake = true;
        bool moving = false;
        double sleep_deadline_s = -1.0;
        const MotionTrace *trace = nullptr;
    };

    void schedule(double time_s, EventKind kind, int node_id, int aux = 0)
    {
        queue_.push({time_s, next_seq_++, kind, node_id, aux});
    }

    NodeRt &node(int id)
    {
        return nodes_.at(index_.at(id));
    }

    Vec2 position_of(const NodeRt &n, double t) const;
    bool is_moving(const NodeRt &n, double t) const;
    LinkGeometry link_between(const NodeRt &a, const NodeRt &b, double t) const;

    double background_current_ma(const NodeRt &n) const;
    void fill_background(NodeRt &n, double until_s);
    void set_background(NodeRt &n, RadioState state, double t);
    double apply_segments(NodeRt &n, const std::vector<StateSegment> &segments);

    void wake_anchor(NodeRt &anchor, double t);
    void sleep_anchor(NodeRt &anchor, double t);

    ExchangeRecord execute_exchange(NodeRt &tag, NodeRt &anchor, double start_s);
    void run_cycle(int cycle_index, double t);
    void advertise(NodeRt &tag, double t);
    void update_round(NodeRt &tag, double t);
    void compute_fix(int tag_id, double t, const std::vector<ExchangeRecord> &records);
    void compute_ble_fix(int tag_id, double t, const std::vector<ExchangeRecord> &records);

    void log(double t, const std::string &message);

    const Scenario &scenario_;
    std::uint64_t seed_;
    Rng rng_;
    RadioConfig config_;
    BiasTable bias_table_;
    std::vector<NodeRt> nodes_;
    std::map<int, std::size_t> index_;
    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> queue_;
    std::uint64_t next_seq_ = 0;
    RunResult result_;
};

Vec2 Engine::position_of(const NodeRt &n, double t) const
{
    const MotionTrace *trace = n.trace;
    if (!trace || trace->waypoints.empty())
        return n.def.position;
    const auto &wps = trace->waypoints;
    if (t <= wps.front().t_s)
        return wps.front().position;
    if (t >= wps.back().t_s)
        return wps.back().position;
    for (std::size_t i = 1; i < wps.size(); ++i) {
        if (t <= wps[i].t_s) {
            const MotionWaypoint &a = wps[i - 1];
            const MotionWaypoint &b = wps[i];
            const double u = (t - a.t_s) / (b.t_s - a.t_s);
            return {a.position.x + u * (b.position.x - a.position.x),
                    a.position.y + u * (b.position.y - a.position.y)};
        }
    }
    return wps.back().position;
}

bool Engine::is_moving(const NodeRt &n, double t) const
{
    const MotionTrace *trace = n.trace;
    if (!trace)
        return false;
    const auto &wps = trace->waypoints;
    for (std::size_t i = 1; i < wps.size(); ++i) {
        if (t >= wps[i - 1].t_s && t < wps[i].t_s) {
            const double dx = wps[i].position.x - wps[i - 1].position.x;
            const double dy = wps[i].position.y - wps[i - 1].position.y;
            return std::hypot(dx, dy) > 1e-9;
        }
    }
    return false;
}

LinkGeometry Engine::link_between(const NodeRt &a, const NodeRt &b, double t) const
{
    const Vec2 pa = position_of(a, t);
    const Vec2 pb = position_of(b, t);
    LinkGeometry geometry;
    geometry.distance_m = std::max(1e-3, std::hypot(pb.x - pa.x, pb.y - pa.y));
    for (const ScenarioObstacle &o : scenario_.obstacles) {
        if (segments_intersect(pa, pb, o.a, o.b)) {
            Obstruction obstruction;
            obstruction.material = o.material;
            obstruction.thickness_mm = o.thickness_mm;
            obstruction.excess_loss_db = o.excess_loss_db;
            obstruction.fp_gap_db = o.fp_gap_db;
            geometry.obstructions.push_back(obstruction);
        }
    }
    return geometry;
}

double Engine::background_current_ma(const NodeRt &n) const
{
    switch (n.background) {
    case RadioState::DeepSleep: return scenario_.profile.deep_sleep_current_ma;
    case RadioState::Sleep: return scenario_.profile.sleep_current_ma;
    case RadioState::Rx: return scenario_.profile.mode(scenario_.mode_id).rx_ma;
    default: return scenario_.profile.state_current_ma(scenario_.mode_id, n.background);
    }
}

void Engine::fill_background(NodeRt &n, double until_s)
{
    if (until_s <= n.cursor_s)
        return;
    n.ledger.add(n.background, until_s - n.cursor_s, background_current_ma(n));
    n.cursor_s = until_s;
}

void Engine::set_background(NodeRt &n, RadioState state, double t)
{
    fill_background(n, std::max(n.cursor_s, t));
    n.background = state;
}

double Engine::apply_segments(NodeRt &n, const std::vector<StateSegment> &segments)
{
    double charge = 0.0;
    for (const StateSegment &segment : segments) {
        const double begin = std::max(segment.begin_s, n.cursor_s);
        const double end = segment.begin_s + segment.duration_s;
        if (end <= begin)
            continue;
        fill_background(n, begin);
        const double current =
            scenario_.profile.state_current_ma(scenario_.mode_id, segment.state);
        n.ledger.add(segment.state, end - begin, current);
        charge += (end - begin) / 3600.0 * current;
        n.cursor_s = end;
    }
    return charge;
}

void Engine::wake_anchor(NodeRt &anchor, double t)
{
    if (anchor.awake)
        return;
    anchor.awake = true;
    // Crystal start-up, then the receiver listens.
    const ModePower &power = scenario_.profile.mode(scenario_.mode_id);
    fill_background(anchor, t);
    anchor.ledger.add(RadioState::Init, power.init_ms * 1e-3, power.init_ma);
    anchor.cursor_s = t + power.init_ms * 1e-3;
    anchor.background = RadioState::Rx;
    log(t, "anchor " + std::to_string(anchor.def.id) + " wakes");
}

void Engine::sleep_anchor(NodeRt &anchor, double t)
{
    if (!anchor.awake)
        return;
    anchor.awake = false;
    anchor.sleep_deadline_s = -1.0;
    set_background(anchor, RadioState::DeepSleep, t);
    log(t, "anchor " + std::to_string(anchor.def.id) + " enters deep sleep");
}

ExchangeRecord Engine::execute_exchange(NodeRt &tag, NodeRt &anchor, double start_s)
{
    const double begin = std::max({start_s, tag.busy_until_s, anchor.busy_until_s});
    const LinkGeometry geometry = link_between(tag, anchor, begin);

    RangingEndpoint tag_ep{static_cast<std::uint8_t>(tag.def.id & 0xff), tag.clock, true};
    RangingEndpoint anchor_ep{static_cast<std::uint8_t>(anchor.def.id & 0xff), anchor.clock,
                              anchor.awake};

    ExchangeResult exchange =
        scenario_.ranging.scheme == RangingScheme::DoubleSided
            ? run_dstwr(tag_ep, anchor_ep, geometry, config_, scenario_.timing,
                        scenario_.calibration, scenario_.profile, begin, rng_)
            : run_sstwr(tag_ep, anchor_ep, geometry, config_, scenario_.timing,
                        scenario_.calibration, scenario_.profile, begin, rng_);

    ExchangeRecord record;
    record.time_s = begin;
    record.tag_id = tag.def.id;
    record.anchor_id = anchor.def.id;
    record.mode_id = scenario_.mode_id;
    record.scheme = exchange.exchange.scheme;
    record.outcome = exchange.exchange.outcome;
    record.true_distance_m = geometry.distance_m;
    record.los_truth = geometry.los();
    record.reply_delay_s = exchange.exchange.reply_delay_s;

    record.tag_charge_mah = apply_segments(tag, exchange.tag_segments);
    apply_segments(anchor, exchange.anchor_segments);
    tag.busy_until_s = std::max(tag.busy_until_s, exchange.end_s);
    anchor.busy_until_s = std::max(anchor.busy_until_s, exchange.end_s);

    if (record.outcome == ExchangeOutcome::Complete) {
        const RangingExchange &ex = exchange.exchange;
        record.p_rxl_dbm = ex.diagnostics.p_rxl_dbm;
        record.p_fp_dbm = ex.diagnostics.p_fp_dbm;
        try {
            record.nlos = classify_nlos(record.p_rxl_dbm, record.p_fp_dbm) == PathClass::Nlos;
            record.raw_m = kSpeedOfLight * tof_sstwr_s(ex);
            if (ex.scheme == RangingScheme::DoubleSided) {
                record.corrected_m = kSpeedOfLight * tof_dstwr_s(ex);
                record.ratio_used = 1.0;
            } else {
                const double ratio =
                    exchange.clock_ratio +
                    rng_.normal(0.0, scenario_.calibration.ratio_noise_ppm * 1e-6);
                record.corrected_m = kSpeedOfLight * correct_drift_s(ex, ratio);
                record.ratio_used = ratio;
            }
            record.final_m = correct_bias_m(record.corrected_m, bias_table_);
            record.has_estimate = true;
        } catch (const Error &e) {
            log(begin, "estimate dropped (" + std::string(e.what()) + ")");
            record.has_estimate = false;
        }
    }
    return record;
}

void Engine::run_cycle(int cycle_index, double t)
{
    std::map<int, std::vector<ExchangeRecord>> per_tag;
    double start = t;
    for (const auto &[tag_id, anchor_id] : scenario_.ranging.pairs) {
        NodeRt &tag = node(tag_id);
        NodeRt &anchor = node(anchor_id);
        ExchangeRecord record = execute_exchange(tag, anchor, start);
        start = std::max(tag.busy_until_s, start) + 1e-3;

        if (scenario_.ranging.with_ble) {
            const LinkGeometry geometry = link_between(tag, anchor, t);
            const ChannelDraw draw = draw_ble(geometry, scenario_.calibration, rng_);
            BleSample sample;
            sample.received = draw.received;
            if (draw.received) {
                sample.rssi_dbm = draw.rssi_dbm;
                sample.distance_m = distance_from_rssi_m(
                    draw.rssi_dbm, scenario_.calibration.ble_ref_power_1m_dbm,
                    scenario_.calibration.ble_path_loss_exponent);
            }
            record.ble = sample;
        }

        result_.exchanges.push_back(record);
        per_tag[tag_id].push_back(record);
    }
    (void)cycle_index;

    if (scenario_.positioning.enabled) {
        for (auto &[tag_id, records] : per_tag) {
            if (records.size() >= 2) {
                compute_fix(tag_id, t, records);
                if (scenario_.ranging.with_ble)
                    compute_ble_fix(tag_id, t, records);
            }
        }
    }
}

void Engine::compute_fix(int tag_id, double t, const std::vector<ExchangeRecord> &records)
{
    PositionRecord fix;
    fix.time_s = t;
    fix.tag_id = tag_id;
    fix.method = RangingMethod::UwbTof;
    const Vec2 truth = position_of(node(tag_id), t);
    fix.true_x = truth.x;
    fix.true_y = truth.y;

    std::vector<std::pair<Vec2, DistanceEstimate>> measurements;
    for (const ExchangeRecord &record : records) {
        if (record.outcome != ExchangeOutcome::Complete || !record.has_estimate)
            continue;
        DistanceEstimate estimate;
        estimate.meters = record.final_m;
        estimate.method = RangingMethod::UwbTof;
        estimate.nlos_flag = record.nlos;
        measurements.emplace_back(position_of(node(record.anchor_id), t), estimate);
    }
    fix.n_anchors = static_cast<int>(measurements.size());
    if (measurements.size() < 2) {
        result_.positions.push_back(fix);
        return;
    }

    try {
        Position2D position;
        if (measurements.size() == 2) {
            position = intersect_two_circles(measurements[0].first, measurements[0].second.meters,
                                             measurements[1].first, measurements[1].second.meters);
            if (scenario_.positioning.half_plane)
                position = resolve_half_plane(position, measurements[0].first,
                                              measurements[1].first,
                                              *scenario_.positioning.half_plane);
            fix.intersected = position.residual_m == 0.0;
            fix.success = true;
        } else {
            const SolveResult solved = multilaterate(
                std::span<const std::pair<Vec2, DistanceEstimate>>(measurements));
            position = solved.position;
            fix.intersected = solved.converged;
            fix.success = solved.converged;
        }
        fix.est_x = position.x;
        fix.est_y = position.y;
        fix.residual_m = position.residual_m;
        fix.error_m = std::hypot(position.x - truth.x, position.y - truth.y);
    } catch (const Error &e) {
        log(t, "position fix failed (" + std::string(e.what()) + ")");
        fix.success = false;
    }
    result_.positions.push_back(fix);
}

void Engine::compute_ble_fix(int tag_id, double t, const std::vector<ExchangeRecord> &records)
{
    PositionRecord fix;
    fix.time_s = t;
    fix.tag_id = tag_id;
    fix.method = RangingMethod::BleRssi;
    const Vec2 truth = position_of(node(tag_id), t);
    fix.true_x = truth.x;
    fix.true_y = truth.y;

    std::vector<std::pair<Vec2, double>> circles;
    for (const ExchangeRecord &record : records) {
        if (!record.ble || !record.ble->received)
            continue;
        circles.emplace_back(position_of(node(record.anchor_id), t), record.ble->distance_m);
    }
    fix.n_anchors = static_cast<int>(circles.size());
    if (circles.size() < 2) {
        result_.positions.push_back(fix);
        return;
    }

    try {
        if (circles.size() == 2) {
            Position2D position = intersect_two_circles(circles[0].first, circles[0].second,
                                                        circles[1].first, circles[1].second);
            fix.intersected = position.residual_m == 0.0;
            fix.success = fix.intersected;
            if (scenario_.positioning.half_plane)
                position = resolve_half_plane(position, circles[0].first, circles[1].first,
                                              *scenario_.positioning.half_plane);
            fix.est_x = position.x;
            fix.est_y = position.y;
            fix.residual_m = position.residual_m;
        } else {
            std::vector<AnchorMeasurement> measurements;
            for (const auto &[pos, dist] : circles)
                measurements.push_back({pos, dist, 1.0});
            const SolveResult solved =
                multilaterate(std::span<const AnchorMeasurement>(measurements));
            fix.intersected = solved.converged;
            fix.success = solved.converged;
            fix.est_x = solved.position.x;
            fix.est_y = solved.position.y;
            fix.residual_m = solved.position.residual_m;
        }
        fix.error_m = std::hypot(fix.est_x - truth.x, fix.est_y - truth.y);
    } catch (const Error &e) {
        log(t, "ble fix failed (" + std::string(e.what()) + ")");
        fix.success = false;
    }
    result_.positions.push_back(fix);
}

void Engine::advertise(NodeRt &tag, double t)
{
    if (!tag.moving)
        return;
    bool relayed = false;
    for (NodeRt &other : nodes_) {
        if (other.def.role != NodeRole::Anchor)
            continue;
        const LinkGeometry geometry = link_between(tag, other, t);
        const ChannelDraw draw = draw_ble(geometry, scenario_.calibration, rng_);
        if (!draw.received)
            continue;
        if (geometry.distance_m <= scenario_.policy.n_range_m && !other.awake) {
            NodePolicyState state{false, other.awake, other.sleep_deadline_s, 0};
            state = step_policy(state, {PolicyEventKind::MeshWake, t, geometry.distance_m},
                                scenario_.policy);
            if (state.awake) {
                wake_anchor(other, t);
                other.sleep_deadline_s = state.sleep_deadline_s;
                schedule(state.sleep_deadline_s, EventKind::AnchorSleepDeadline, other.def.id);
            }
        }
        relayed = true;
    }
    if (relayed && scenario_.policy.mesh_hop_limit >= 1)
        schedule(t + scenario_.mesh_latency_s, EventKind::MeshDeliver, tag.def.id);
    if (tag.moving)
        schedule(t + scenario_.policy.advertise_interval_s, EventKind::Advertise, tag.def.id);
}

void Engine::update_round(NodeRt &tag, double t)
{
    if (!tag.moving)
        return;
    std::vector<ExchangeRecord> records;
    double start = t;
    for (NodeRt &other : nodes_) {
        if (other.def.role != NodeRole::Anchor || !other.awake)
            continue;
        const LinkGeometry geometry = link_between(tag, other, t);
        if (geometry.distance_m > scenario_.policy.n_range_m)
            continue;
        ExchangeRecord record = execute_exchange(tag, other, start);
        start = std::max(tag.busy_until_s, start) + 1e-3;
        result_.exchanges.push_back(record);
        records.push_back(record);
        if (record.outcome == ExchangeOutcome::Complete) {
            NodePolicyState state{false, other.awake, other.sleep_deadline_s, 0};
            state = step_policy(state, {PolicyEventKind::ExchangeDone, start, 0.0},
                                scenario_.policy);
            other.sleep_deadline_s = state.sleep_deadline_s;
            schedule(state.sleep_deadline_s, EventKind::AnchorSleepDeadline, other.def.id);
        }
    }
    if (scenario_.positioning.enabled && records.size() >= 2)
        compute_fix(tag.def.id, t, records);
    schedule(t + scenario_.policy.update_interval_s / scenario_.policy.f_update,
             EventKind::UpdateRound, tag.def.id);
}

void Engine::log(double t, const std::string &message)
{
    char stamp[32];
    std::snprintf(stamp, sizeof stamp, "%012.6f  ", t);
    result_.log.push_back(stamp + message);
}

RunResult Engine::execute()
{
    config_ = mode(scenario_.mode_id);
    config_.tx_power_dbm = scenario_.calibration.tx_power_uwb_dbm;
    bias_table_ = effective_bias_table(scenario_);

    result_.scenario_name = scenario_.name;
    result_.seed = seed_;
    result_.duration_s = scenario_.duration_s;
    result_.mode_id = scenario_.mode_id;

    const bool policy_mode = scenario_.ranging.schedule == RangingPlan::Schedule::Policy;

    // Instantiate nodes; unspecified clock phases draw from the run's seed so
    // counter wraps land differently per node.
    for (const ScenarioNode &def : scenario_.nodes) {
        NodeRt n;
        n.def = def;
        n.clock.drift_ppm = def.drift_ppm;
        n.clock.phase_offset_s = def.clock_phase_s
                                     ? *def.clock_phase_s
                                     : rng_.uniform(0.0, kTickWrap * kTickSeconds);
        for (const MotionTrace &trace : scenario_.motion)
            if (trace.node_id == def.id)
                n.trace = &trace;
        if (def.role == NodeRole::Anchor) {
            n.awake = !policy_mode;
            n.background = n.awake ? RadioState::Rx : RadioState::DeepSleep;
        } else {
            n.awake = true;
            n.background = policy_mode ? RadioState::DeepSleep : RadioState::Sleep;
        }
        index_[def.id] = nodes_.size();
        nodes_.push_back(n);
    }

    if (policy_mode) {
        for (NodeRt &n : nodes_) {
            if (n.def.role != NodeRole::Tag || !n.trace)
                continue;
            const auto &wps = n.trace->waypoints;
            for (std::size_t i = 1; i < wps.size(); ++i) {
                const double dx = wps[i].position.x - wps[i - 1].position.x;
                const double dy = wps[i].position.y - wps[i - 1].position.y;
                if (std::hypot(dx, dy) > 1e-9) {
                    schedule(wps[i - 1].t_s, EventKind::MotionStart, n.def.id);
                    schedule(wps[i].t_s, EventKind::MotionStop, n.def.id);
                }
            }
        }
    } else {
        for (int k = 0; k < scenario_.ranging.count; ++k)
            schedule(k * scenario_.ranging.interval_s, EventKind::Cycle, 0, k);
    }

    while (!queue_.empty()) {
        const Event event = queue_.top();
        queue_.pop();
        if (event.time_s > scenario_.duration_s)
            continue;
        ++result_.event_count;
        switch (event.kind) {
        case EventKind::Cycle:
            run_cycle(event.aux, event.time_s);
            break;
        case EventKind::MotionStart: {
            NodeRt &tag = node(event.node_id);
            if (tag.moving)
                break;
            NodePolicyState state{true, tag.background != RadioState::DeepSleep, -1.0, 0};
            state = step_policy(state, {PolicyEventKind::MotionStart, event.time_s, 0.0},
                                scenario_.policy);
            tag.moving = state.awake;
            set_background(tag, RadioState::Sleep, event.time_s);
            log(event.time_s, "tag " + std::to_string(tag.def.id) + " starts moving");
            schedule(event.time_s, EventKind::Advertise, tag.def.id);
            schedule(event.time_s + 0.01, EventKind::UpdateRound, tag.def.id);
            break;
        }
        case EventKind::MotionStop: {
            NodeRt &tag = node(event.node_id);
            if (!tag.moving || is_moving(tag, event.time_s))
                break;
            NodePolicyState state{true, true, -1.0, 0};
            state = step_policy(state, {PolicyEventKind::MotionStop, event.time_s, 0.0},
                                scenario_.policy);
            tag.moving = state.awake;
            set_background(tag, RadioState::DeepSleep, event.time_s);
            log(event.time_s, "tag " + std::to_string(tag.def.id) + " stops, deep sleep");
            break;
        }
        case EventKind::Advertise:
            advertise(node(event.node_id), event.time_s);
            break;
        case EventKind::MeshDeliver: {
            NodeRt &tag = node(event.node_id);
            for (NodeRt &other : nodes_) {
                if (other.def.role != NodeRole::Anchor || other.awake)
                    continue;
                const double distance =
                    std::hypot(position_of(other, event.time_s).x -
                                   position_of(tag, event.time_s).x,
                               position_of(other, event.time_s).y -
                                   position_of(tag, event.time_s).y);
                NodePolicyState state{false, false, -1.0, 0};
                state = step_policy(state, {PolicyEventKind::MeshWake, event.time_s, distance},
                                    scenario_.policy);
                if (state.awake) {
                    wake_anchor(other, event.time_s);
                    other.sleep_deadline_s = state.sleep_deadline_s;
                    schedule(state.sleep_deadline_s, EventKind::AnchorSleepDeadline,
                             other.def.id);
                }
            }
            break;
        }
        case EventKind::UpdateRound:
            update_round(node(event.node_id), event.time_s);
            break;
        case EventKind::AnchorSleepDeadline: {
            NodeRt &anchor = node(event.node_id);
            if (!anchor.awake || anchor.sleep_deadline_s < 0.0 ||
                event.time_s + 1e-9 < anchor.sleep_deadline_s)
                break;
            sleep_anchor(anchor, std::max(event.time_s, anchor.busy_until_s));
            break;
        }
        }
    }

    // Close ledgers at a common end instant.
    double end_s = scenario_.duration_s;
    for (const NodeRt &n : nodes_)
        end_s = std::max(end_s, n.cursor_s);
    for (NodeRt &n : nodes_) {
        fill_background(n, end_s);
        n.ledger.add_host(end_s, scenario_.profile.base_node_current_ma);

        NodeLedgerRecord record;
        record.node_id = n.def.id;
        record.role = n.def.role;
        record.state_seconds = n.ledger.state_times();
        record.radio_charge_mah = n.ledger.radio_charge_mah();
        record.host_charge_mah = n.ledger.host_charge_mah();
        record.total_charge_mah = n.ledger.total_charge_mah();
        record.average_current_ma = end_s > 0.0 ? record.total_charge_mah * 3600.0 / end_s : 0.0;
        record.projected_lifetime_h = battery_lifetime_hours_at_current(
            scenario_.battery_capacity_mah, record.average_current_ma);
        result_.ledgers.push_back(record);
    }
    return result_;
}

} // namespace

RunResult run(const Scenario &scenario)
{
    return run(scenario, scenario.seed);
}

RunResult run(const Scenario &scenario, std::uint64_t seed_override)
{
    Engine engine(scenario, seed_override);
    return engine.execute();
}

std::vector<SweepPointResult> sweep(const Scenario &scenario)
{
    return sweep(scenario, scenario.seed);
}

std::vector<SweepPointResult> sweep(const Scenario &scenario, std::uint64_t seed_override)
{
    require(!scenario.sweep.empty(), ErrorCode::Usage,
            "sweep requires a non-empty grid in the scenario's sweep section");

    std::vector<int> modes = scenario.sweep.modes;
    if (modes.empty())
        modes.push_back(scenario.mode_id);
    std::vector<std::optional<double>> distances;
    if (scenario.sweep.distances_m.empty())
        distances.push_back(std::nullopt);
    else
        for (double d : scenario.sweep.distances_m)
            distances.push_back(d);
    std::vector<double> delays = scenario.sweep.rx_delays_s;
    if (delays.empty())
        delays.push_back(scenario.timing.rx_delay_s);

    std::vector<SweepPointResult> results;
    int point_index = 0;
    for (int mode_id : modes) {
        for (const auto &distance : distances) {
            for (double delay : delays) {
                SweepPointResult point;
                point.index = point_index;
                point.mode_id = mode_id;
                point.distance_m = distance;
                point.rx_delay_s = delay;
                point.seed = Rng::derive(seed_override, static_cast<std::uint64_t>(point_index));
                ++point_index;

                Scenario variant = scenario;
                variant.mode_id = mode_id;
                variant.timing.rx_delay_s = delay;
                if (distance) {
                    // Move every ranging anchor to the given distance along its
                    // current direction from the paired tag.
                    for (const auto &[tag_id, anchor_id] : variant.ranging.pairs) {
                        const ScenarioNode *tag = variant.find_node(tag_id);
                        for (ScenarioNode &n : variant.nodes) {
                            if (n.id != anchor_id || !tag)
                                continue;
                            const double dx = n.position.x - tag->position.x;
                            const double dy = n.position.y - tag->position.y;
                            const double length = std::hypot(dx, dy);
                            const Vec2 dir = length > 1e-12 ? Vec2{dx / length, dy / length}
                                                            : Vec2{1.0, 0.0};
                            n.position = {tag->position.x + dir.x * *distance,
                                          tag->position.y + dir.y * *distance};
                        }
                    }
                }
                try {
                    effective_rx_window_s(variant.timing, variant.mode_id, variant.profile);
                    point.result = run(variant, point.seed);
                } catch (const Error &e) {
                    point.failed = true;
                    point.error = e.what();
                }
                results.push_back(std::move(point));
            }
        }
    }
    return results;
}

} // namespace uwbsim
