// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "core/channel.hpp"
#include "core/clock.hpp"
#include "core/power.hpp"
#include "core/radio.hpp"
#include "core/rng.hpp"

namespace uwbsim {

enum class MessageKind : std::uint8_t {
    Poll = 1,
    Response = 2,
    Final = 3,
};

/// Ranging frame payload. Responses and finals carry the sender's receive and
/// (pre-written) transmit tick stamps; there is no sequence number. Response
/// and Final frames are unaddressed (dest_id 0): pairing is handled by the
/// exchange itself.
struct RangingMessage {
    MessageKind kind = MessageKind::Poll;
    std::uint8_t source_id = 0;
    std::uint8_t dest_id = 0;
    std::uint64_t rx_timestamp = 0; // 40-bit ticks, Response/Final only
    std::uint64_t tx_timestamp = 0; // 40-bit ticks, Response/Final only

    bool operator==(const RangingMessage &) const = default;
};

inline constexpr std::size_t kMessageBytes = 12;

/// Wire format, 12 bytes, little-endian, fields in declaration order:
///   Poll:            kind(1) source(1) dest(1) zero-pad(9)
///   Response/Final:  kind(1) source(1) rx_ticks(5) tx_ticks(5)
std::array<std::uint8_t, kMessageBytes> encode(const RangingMessage &message);
RangingMessage decode(std::span<const std::uint8_t, kMessageBytes> bytes);

enum class ExchangeOutcome {
    Complete,
    Timeout,
    Lost,
};

enum class RangingScheme {
    SingleSided,
    DoubleSided,
};

const char *outcome_name(ExchangeOutcome outcome);

struct ExchangeDiagnostics {
    double p_rxl_dbm = 0.0;
    double p_fp_dbm = 0.0;
    std::optional<double> rssi_ble_dbm;
};

/// Timestamps and diagnostics of one ranging round. t1/t4 are tag-clock
/// ticks, t2/t3 anchor-clock ticks; the double-sided extension adds the
/// second round pair t5 (tag) / t6 (anchor).
struct RangingExchange {
    RangingScheme scheme = RangingScheme::SingleSided;
    ExchangeOutcome outcome = ExchangeOutcome::Lost;
    int mode_id = 0;
    std::uint8_t tag_id = 0;
    std::uint8_t anchor_id = 0;

    std::uint64_t t1_tx_poll = 0;
    std::uint64_t t2_rx_poll = 0;
    std::uint64_t t3_tx_resp = 0;
    std::uint64_t t4_rx_resp = 0;
    std::uint64_t t5_tx_final = 0;
    std::uint64_t t6_rx_final = 0;

    double reply_delay_s = 0.0;     // anchor mark-to-mark reply span
    double tag_reply_delay_s = 0.0; // double-sided second round only
    double true_distance_m = 0.0;
    ExchangeDiagnostics diagnostics;
};

/// Exchange timing knobs. rx_delay and response_timeout are both measured
/// from the poll's on-air instant.
struct ProtocolTiming {
    double anchor_processing_s = 0.010;
    double tag_processing_s = 0.0;     // 0: same as anchor_processing
    double rx_delay_s = 0.010;
    double response_timeout_s = 0.0;   // 0: processing + 2*airtime + guard

    double effective_tag_processing_s() const
    {
        return tag_processing_s > 0.0 ? tag_processing_s : anchor_processing_s;
    }
};

// Anchor processing the reference power measurements were taken with.
inline constexpr double kReferenceProcessingS = 0.010;
inline constexpr double kResponseTimeoutGuardS = 0.002;

double default_response_timeout_s(const ProtocolTiming &timing, const RadioConfig &config);

/// Validates the timing against a mode and returns the tag's RX listening
/// duration once the receive delay is applied.
double effective_rx_window_s(const ProtocolTiming &timing, int mode_id);
double effective_rx_window_s(const ProtocolTiming &timing, int mode_id,
                             const PowerProfile &profile);

struct RangingEndpoint {
    std::uint8_t id = 0;
    DeviceClock clock;
    bool awake = true;
};

struct StateSegment {
    RadioState state;
    double begin_s = 0.0;
    double duration_s = 0.0;
};

struct ExchangeResult {
    RangingExchange exchange;
    std::vector<StateSegment> tag_segments;
    std::vector<StateSegment> anchor_segments;
    double start_s = 0.0;
    double end_s = 0.0;
    double response_arrival_s = 0.0; // global instant of the response mark
    // True tag/anchor clock-rate ratio of this round, for the drift corrector.
    double clock_ratio = 1.0;
};

/// One single-sided round starting at start_s (global time). The tag wakes,
/// writes the poll, transmits, and listens with the configured delay; the
/// anchor answers after its processing time with the pre-written transmit
/// stamp. A sleeping anchor loses the round, a missing response times out.
ExchangeResult run_sstwr(const RangingEndpoint &tag, const RangingEndpoint &anchor,
                         const LinkGeometry &geometry, const RadioConfig &config,
                         const ProtocolTiming &timing, const ChannelCalibration &cal,
                         const PowerProfile &profile, double start_s, Rng &rng);

/// Double-sided round: the single-sided exchange plus a final frame from the
/// tag, giving the second round/reply pair that cancels first-order drift.
ExchangeResult run_dstwr(const RangingEndpoint &tag, const RangingEndpoint &anchor,
                         const LinkGeometry &geometry, const RadioConfig &config,
                         const ProtocolTiming &timing, const ChannelCalibration &cal,
                         const PowerProfile &profile, double start_s, Rng &rng);

} // namespace uwbsim
