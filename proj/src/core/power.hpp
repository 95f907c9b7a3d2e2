// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "core/radio.hpp"

namespace uwbsim {

enum class RadioState {
    DeepSleep,
    Sleep,
    Init,
    Idle,
    Tx,
    Rx,
};

const char *radio_state_name(RadioState state);

/// Measured per-state duration and current of one ranging round on the
/// reference hardware, per mode. These are lookup data; the analytic frame
/// airtime is only used for cross-checks and event timing.
struct ModePower {
    double tx_ms = 0.0, rx_ms = 0.0, idle_ms = 0.0, init_ms = 0.0;
    double tx_ma = 0.0, rx_ma = 0.0, idle_ma = 0.0, init_ma = 0.0;

    double total_ms() const { return tx_ms + rx_ms + idle_ms + init_ms; }
    double state_duration_ms(RadioState state) const;
    double state_current_ma(RadioState state) const;
};

struct PowerProfile {
    std::array<ModePower, kModeCount> modes{};
    double sleep_current_ma = 1e-3;        // 1 uA
    double deep_sleep_current_ma = 50e-6;  // 50 nA
    double base_node_current_ma = 0.85;    // host controller with debug interfaces on
    double base_node_current_trim_ma = 0.25; // trimmed build

    static PowerProfile defaults();
    const ModePower &mode(int mode_id) const; // throws on unknown ids
    double state_current_ma(int mode_id, RadioState state) const;
};

struct ExchangeCharge {
    double charge_mah = 0.0;
    double duration_s = 0.0;
    double average_current_ma = 0.0;
};

/// Charge of one ranging round. A receive delay shifts that much time from the
/// RX state into Idle (the radio sits ready while reception is postponed), so
/// the round's duration is unchanged and its charge drops by
/// rx_delay * (I_rx - I_idle).
ExchangeCharge exchange_charge(const PowerProfile &profile, int mode_id, double rx_delay_s);

/// Motion-gated operating parameters.
struct DutyCyclePolicy {
    double t_offset_s = 5.0;        // anchor linger after the last round
    double n_range_m = 10.0;        // wake radius around a moving tag
    int f_update = 3;               // rounds per update interval
    double update_interval_s = 5.0;
    double advertise_interval_s = 1.0;
    int mesh_hop_limit = 1;
};

double battery_lifetime_hours_at_current(double capacity_mah, double average_current_ma);

/// Lifetime under back-to-back ranging rounds plus the host baseline.
double battery_lifetime_hours_continuous(const PowerProfile &profile, double capacity_mah,
                                         int mode_id, double rx_delay_s);

/// Lifetime under the duty-cycle policy, blending moving and stationary
/// consumption by the fraction of time spent in motion.
double battery_lifetime_hours(const PowerProfile &profile, double capacity_mah, int mode_id,
                              double rx_delay_s, const DutyCyclePolicy &policy,
                              double motion_fraction);

/// Average current added by policy-driven ranging while the tag moves.
double duty_cycle_added_current_ma(const PowerProfile &profile, int mode_id, double rx_delay_s,
                                   const DutyCyclePolicy &policy);

/// Per-node charge bookkeeping. All radio time lands in exactly one state.
class PowerLedger {
  public:
    void add(RadioState state, double seconds, double current_ma);
    void add_host(double seconds, double current_ma);

    double state_seconds(RadioState state) const;
    double total_seconds() const;
    double radio_charge_mah() const { return radio_charge_mah_; }
    double host_charge_mah() const { return host_charge_mah_; }
    double total_charge_mah() const { return radio_charge_mah_ + host_charge_mah_; }
    double average_current_ma() const;

    const std::map<RadioState, double> &state_times() const { return seconds_; }

  private:
    std::map<RadioState, double> seconds_;
    double radio_charge_mah_ = 0.0;
    double host_charge_mah_ = 0.0;
};

enum class PolicyEventKind {
    MotionStart,
    MotionStop,
    MeshWake,
    ExchangeDone,
};

struct PolicyEvent {
    PolicyEventKind kind;
    double time_s = 0.0;
    double tag_distance_m = 0.0; // MeshWake only
};

/// Policy-relevant slice of a node's state.
struct NodePolicyState {
    bool is_tag = true;
    bool awake = false;
    double sleep_deadline_s = -1.0; // anchor: time to drop back to deep sleep
    int ignored_events = 0;
};

/// Transition function of the motion-based duty cycle: tags follow motion
/// edges, anchors wake for nearby moving tags and linger t_offset after the
/// last completed round. Events that do not apply are counted and ignored.
NodePolicyState step_policy(NodePolicyState state, const PolicyEvent &event,
                            const DutyCyclePolicy &policy);

} // namespace uwbsim
