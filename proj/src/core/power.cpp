// SPDX-License-Identifier: Apache-2.0
#include "core/power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace uwbsim {

const char *radio_state_name(RadioState state)
{
    switch (state) {
    case RadioState::DeepSleep: return "deep_sleep";
    case RadioState::Sleep: return "sleep";
    case RadioState::Init: return "init";
    case RadioState::Idle: return "idle";
    case RadioState::Tx: return "tx";
    case RadioState::Rx: return "rx";
    }
    return "?";
}

double ModePower::state_duration_ms(RadioState state) const
{
    switch (state) {
    case RadioState::Tx: return tx_ms;
    case RadioState::Rx: return rx_ms;
    case RadioState::Idle: return idle_ms;
    case RadioState::Init: return init_ms;
    default: return 0.0;
    }
}

double ModePower::state_current_ma(RadioState state) const
{
    switch (state) {
    case RadioState::Tx: return tx_ma;
    case RadioState::Rx: return rx_ma;
    case RadioState::Idle: return idle_ma;
    case RadioState::Init: return init_ma;
    default: return 0.0;
    }
}

PowerProfile PowerProfile::defaults()
{
    PowerProfile profile;
    //                    tx_ms   rx_ms   idle_ms init_ms  tx_ma rx_ma  idle_ma init_ma
    profile.modes[0] = {0.910, 13.820, 4.284, 3.377, 25.0, 76.9, 17.4, 9.1};
    profile.modes[1] = {1.037, 14.075, 4.284, 3.378, 30.7, 79.2, 18.9, 9.0};
    profile.modes[2] = {1.038, 14.074, 4.282, 3.377, 32.5, 85.0, 18.6, 9.0};
    profile.modes[3] = {1.038, 14.076, 4.283, 3.375, 33.4, 91.9, 18.2, 9.1};
    profile.modes[4] = {5.254, 22.909, 4.281, 3.376, 33.4, 85.2, 17.3, 9.0};
    profile.modes[5] = {1.037, 14.075, 4.279, 3.375, 41.5, 101.5, 17.3, 9.0};
    return profile;
}

const ModePower &PowerProfile::mode(int mode_id) const
{
    require(mode_id >= 1 && mode_id <= kModeCount, ErrorCode::Config,
            "unknown mode " + std::to_string(mode_id));
    return modes[mode_id - 1];
}

double PowerProfile::state_current_ma(int mode_id, RadioState state) const
{
    switch (state) {
    case RadioState::DeepSleep: return deep_sleep_current_ma;
    case RadioState::Sleep: return sleep_current_ma;
    default: return mode(mode_id).state_current_ma(state);
    }
}

ExchangeCharge exchange_charge(const PowerProfile &profile, int mode_id, double rx_delay_s)
{
    require(rx_delay_s >= 0.0, ErrorCode::Domain, "rx delay must be non-negative");
    const ModePower &m = profile.mode(mode_id);
    const double delay_ms = std::min(rx_delay_s * 1e3, m.rx_ms);
    const double rx_ms = m.rx_ms - delay_ms;
    const double idle_ms = m.idle_ms + delay_ms;
    const double charge_mams =
        m.tx_ms * m.tx_ma + rx_ms * m.rx_ma + idle_ms * m.idle_ma + m.init_ms * m.init_ma;

    ExchangeCharge result;
    result.duration_s = m.total_ms() * 1e-3;
    result.charge_mah = charge_mams / 3.6e6;
    result.average_current_ma = charge_mams / m.total_ms();
    return result;
}

double battery_lifetime_hours_at_current(double capacity_mah, double average_current_ma)
{
    require(capacity_mah > 0.0, ErrorCode::Domain, "battery capacity must be positive");
    if (average_current_ma <= 0.0)
        return std::numeric_limits<double>::infinity();
    return capacity_mah / average_current_ma;
}

double battery_lifetime_hours_continuous(const PowerProfile &profile, double capacity_mah,
                                         int mode_id, double rx_delay_s)
{
    const ExchangeCharge round = exchange_charge(profile, mode_id, rx_delay_s);
    return battery_lifetime_hours_at_current(
        capacity_mah, round.average_current_ma + profile.base_node_current_ma);
}

double duty_cycle_added_current_ma(const PowerProfile &profile, int mode_id, double rx_delay_s,
                                   const DutyCyclePolicy &policy)
{
    require(policy.update_interval_s > 0.0 && policy.f_update > 0, ErrorCode::Domain,
            "update interval and frequency must be positive");
    const ExchangeCharge round = exchange_charge(profile, mode_id, rx_delay_s);
    const double interval_h = policy.update_interval_s / 3600.0;
    return policy.f_update * round.charge_mah / interval_h;
}

double battery_lifetime_hours(const PowerProfile &profile, double capacity_mah, int mode_id,
                              double rx_delay_s, const DutyCyclePolicy &policy,
                              double motion_fraction)
{
    require(motion_fraction >= 0.0 && motion_fraction <= 1.0, ErrorCode::Domain,
            "motion fraction must lie in [0,1]");
    const double ranging_ma = duty_cycle_added_current_ma(profile, mode_id, rx_delay_s, policy);
    const double moving_ma =
        profile.base_node_current_ma + ranging_ma + profile.sleep_current_ma;
    const double stationary_ma = profile.base_node_current_ma + profile.deep_sleep_current_ma;
    const double blended =
        motion_fraction * moving_ma + (1.0 - motion_fraction) * stationary_ma;
    return battery_lifetime_hours_at_current(capacity_mah, blended);
}

void PowerLedger::add(RadioState state, double seconds, double current_ma)
{
    require(seconds >= -1e-12, ErrorCode::Internal, "ledger segment with negative duration");
    if (seconds <= 0.0)
        return;
    seconds_[state] += seconds;
    radio_charge_mah_ += seconds / 3600.0 * current_ma;
}

void PowerLedger::add_host(double seconds, double current_ma)
{
    require(seconds >= -1e-12, ErrorCode::Internal, "ledger segment with negative duration");
    if (seconds <= 0.0)
        return;
    host_charge_mah_ += seconds / 3600.0 * current_ma;
}

double PowerLedger::state_seconds(RadioState state) const
{
    auto it = seconds_.find(state);
    return it == seconds_.end() ? 0.0 : it->second;
}

double PowerLedger::total_seconds() const
{
    double total = 0.0;
    for (const auto &[state, secs] : seconds_)
        total += secs;
    return total;
}

double PowerLedger::average_current_ma() const
{
    const double secs = total_seconds();
    return secs > 0.0 ? total_charge_mah() * 3600.0 / secs : 0.0;
}

NodePolicyState step_policy(NodePolicyState state, const PolicyEvent &event,
                            const DutyCyclePolicy &policy)
{
    switch (event.kind) {
    case PolicyEventKind::MotionStart:
        if (!state.is_tag) {
            ++state.ignored_events;
            break;
        }
        state.awake = true;
        break;
    case PolicyEventKind::MotionStop:
        if (!state.is_tag) {
            ++state.ignored_events;
            break;
        }
        state.awake = false;
        break;
    case PolicyEventKind::MeshWake:
        if (state.is_tag) {
            ++state.ignored_events;
            break;
        }
        if (event.tag_distance_m <= policy.n_range_m) {
            state.awake = true;
            state.sleep_deadline_s = event.time_s + policy.t_offset_s;
        }
        break;
    case PolicyEventKind::ExchangeDone:
        if (state.is_tag)
            break; // tags stay awake while moving; nothing to extend
        if (state.awake)
            state.sleep_deadline_s = event.time_s + policy.t_offset_s;
        else
            ++state.ignored_events;
        break;
    }
    if (!state.is_tag && state.awake && state.sleep_deadline_s >= 0.0 &&
        event.time_s >= state.sleep_deadline_s) {
        state.awake = false;
        state.sleep_deadline_s = -1.0;
    }
    return state;
}

} // namespace uwbsim
