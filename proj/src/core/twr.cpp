// SPDX-License-Identifier: Apache-2.0
#include "core/twr.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/error.hpp"

namespace uwbsim {

namespace {

void put_ticks(std::array<std::uint8_t, kMessageBytes> &buffer, std::size_t offset,
               std::uint64_t ticks)
{
    for (int i = 0; i < 5; ++i)
        buffer[offset + i] = static_cast<std::uint8_t>((ticks >> (8 * i)) & 0xff);
}

std::uint64_t get_ticks(std::span<const std::uint8_t, kMessageBytes> bytes, std::size_t offset)
{
    std::uint64_t ticks = 0;
    for (int i = 0; i < 5; ++i)
        ticks |= static_cast<std::uint64_t>(bytes[offset + i]) << (8 * i);
    return ticks;
}

} // namespace

std::array<std::uint8_t, kMessageBytes> encode(const RangingMessage &message)
{
    std::array<std::uint8_t, kMessageBytes> buffer{};
    buffer[0] = static_cast<std::uint8_t>(message.kind);
    buffer[1] = message.source_id;
    switch (message.kind) {
    case MessageKind::Poll:
        buffer[2] = message.dest_id;
        require(message.rx_timestamp == 0 && message.tx_timestamp == 0, ErrorCode::Protocol,
                "poll frames carry no timestamps");
        break;
    case MessageKind::Response:
    case MessageKind::Final:
        require(message.dest_id == 0, ErrorCode::Protocol,
                "response/final frames are unaddressed");
        require(message.rx_timestamp <= kTickMask && message.tx_timestamp <= kTickMask,
                ErrorCode::Protocol, "timestamps exceed the 40-bit counter");
        put_ticks(buffer, 2, message.rx_timestamp);
        put_ticks(buffer, 7, message.tx_timestamp);
        break;
    }
    return buffer;
}

RangingMessage decode(std::span<const std::uint8_t, kMessageBytes> bytes)
{
    RangingMessage message;
    switch (bytes[0]) {
    case 1: message.kind = MessageKind::Poll; break;
    case 2: message.kind = MessageKind::Response; break;
    case 3: message.kind = MessageKind::Final; break;
    default:
        fail(ErrorCode::Protocol, "unknown frame kind " + std::to_string(int(bytes[0])));
    }
    message.source_id = bytes[1];
    if (message.kind == MessageKind::Poll) {
        message.dest_id = bytes[2];
    } else {
        message.rx_timestamp = get_ticks(bytes, 2);
        message.tx_timestamp = get_ticks(bytes, 7);
    }
    return message;
}

const char *outcome_name(ExchangeOutcome outcome)
{
    switch (outcome) {
    case ExchangeOutcome::Complete: return "complete";
    case ExchangeOutcome::Timeout: return "timeout";
    case ExchangeOutcome::Lost: return "lost";
    }
    return "?";
}

double default_response_timeout_s(const ProtocolTiming &timing, const RadioConfig &config)
{
    return timing.anchor_processing_s + 2.0 * ranging_airtime_s(config) +
           kResponseTimeoutGuardS;
}

double effective_rx_window_s(const ProtocolTiming &timing, int mode_id)
{
    return effective_rx_window_s(timing, mode_id, PowerProfile::defaults());
}

double effective_rx_window_s(const ProtocolTiming &timing, int mode_id,
                             const PowerProfile &profile)
{
    const RadioConfig config = mode(mode_id);
    const double air = ranging_airtime_s(config);
    require(timing.rx_delay_s < timing.anchor_processing_s + 2.0 * air, ErrorCode::Config,
            "rx delay reaches past the expected response arrival");
    const double window = profile.mode(mode_id).rx_ms * 1e-3 +
                          (timing.anchor_processing_s - kReferenceProcessingS) -
                          timing.rx_delay_s;
    require(window > 0.0, ErrorCode::Config, "rx window is empty");
    return window;
}

namespace {

struct ExchangeContext {
    const RangingEndpoint &tag;
    const RangingEndpoint &anchor;
    const LinkGeometry &geometry;
    const RadioConfig &config;
    const ProtocolTiming &timing;
    const ChannelCalibration &cal;
    const PowerProfile &profile;
    double start_s;
};

/// Runs the poll/response round shared by both schemes. Fills everything but
/// the final leg.
ExchangeResult run_round(const ExchangeContext &ctx, Rng &rng)
{
    const ModePower &power = ctx.profile.mode(ctx.config.mode_id);
    const double air = ranging_airtime_s(ctx.config);
    const double timeout = ctx.timing.response_timeout_s > 0.0
                               ? ctx.timing.response_timeout_s
                               : default_response_timeout_s(ctx.timing, ctx.config);
    effective_rx_window_s(ctx.timing, ctx.config.mode_id, ctx.profile);

    ExchangeResult result;
    result.start_s = ctx.start_s;
    result.clock_ratio = ctx.tag.clock.rate() / ctx.anchor.clock.rate();

    RangingExchange &ex = result.exchange;
    ex.mode_id = ctx.config.mode_id;
    ex.tag_id = ctx.tag.id;
    ex.anchor_id = ctx.anchor.id;
    ex.true_distance_m = ctx.geometry.distance_m;

    const double init_s = power.init_ms * 1e-3;
    const double idle_s = power.idle_ms * 1e-3;
    const double tx_s = power.tx_ms * 1e-3;
    const double rx_s = power.rx_ms * 1e-3;

    // Tag-side preparation, then the poll goes on air.
    const double poll_onair = ctx.start_s + init_s + idle_s;
    result.tag_segments.push_back({RadioState::Init, ctx.start_s, init_s});
    result.tag_segments.push_back({RadioState::Idle, ctx.start_s + init_s, idle_s});
    result.tag_segments.push_back({RadioState::Tx, poll_onair, tx_s});

    const RangingMessage poll{MessageKind::Poll, ctx.tag.id, ctx.anchor.id, 0, 0};
    (void)encode(poll);
    ex.t1_tx_poll = ctx.tag.clock.timestamp(poll_onair);

    // Tag receive window, relative to the poll's on-air instant.
    const double window_open = poll_onair + ctx.timing.rx_delay_s;
    const double window_close = poll_onair + timeout;
    const double rx_listen_begin = poll_onair + tx_s + ctx.timing.rx_delay_s;
    if (ctx.timing.rx_delay_s > 0.0)
        result.tag_segments.push_back(
            {RadioState::Idle, poll_onair + tx_s, ctx.timing.rx_delay_s});

    const double rx_window_s =
        rx_s + (ctx.timing.anchor_processing_s - kReferenceProcessingS) - ctx.timing.rx_delay_s;

    auto close_as = [&](ExchangeOutcome outcome) {
        ex.outcome = outcome;
        const double rx_end = std::max(window_close, rx_listen_begin);
        result.tag_segments.push_back(
            {RadioState::Rx, rx_listen_begin, rx_end - rx_listen_begin});
        result.end_s = rx_end;
        return result;
    };

    if (!ctx.anchor.awake)
        return close_as(ExchangeOutcome::Lost);

    const ChannelDraw poll_draw = draw_uwb(ctx.geometry, ctx.config, ctx.cal, rng);
    const double poll_mark = poll_onair + poll_draw.tof_true_s + poll_draw.tof_noise_s;
    const double poll_complete = poll_onair + air + poll_draw.tof_true_s;
    if (!poll_draw.received)
        return close_as(ExchangeOutcome::Timeout);

    // Anchor: receive, process, answer with the pre-written transmit stamp.
    result.anchor_segments.push_back({RadioState::Rx, poll_onair, poll_complete - poll_onair});
    const double processing_global =
        ctx.anchor.clock.global_duration(ctx.timing.anchor_processing_s);
    const double resp_onair = poll_mark + air + processing_global;
    result.anchor_segments.push_back(
        {RadioState::Idle, poll_complete, resp_onair - poll_complete});
    result.anchor_segments.push_back({RadioState::Tx, resp_onair, tx_s});

    ex.t2_rx_poll = ctx.anchor.clock.timestamp(poll_mark);
    ex.t3_tx_resp = ctx.anchor.clock.timestamp(resp_onair);
    ex.reply_delay_s = resp_onair - poll_mark;

    const RangingMessage response{MessageKind::Response, ctx.anchor.id, 0, ex.t2_rx_poll,
                                  ex.t3_tx_resp};
    const auto response_bytes = encode(response);

    const ChannelDraw resp_draw = draw_uwb(ctx.geometry, ctx.config, ctx.cal, rng);
    const double resp_mark = resp_onair + resp_draw.tof_true_s + resp_draw.tof_noise_s;
    const double resp_complete = resp_onair + air + resp_draw.tof_true_s;

    const bool delivered =
        resp_draw.received && resp_complete >= window_open && resp_complete <= window_close;
    if (!delivered)
        return close_as(ExchangeOutcome::Timeout);

    const RangingMessage delivered_response = decode(response_bytes);
    result.response_arrival_s = resp_mark;
    ex.t4_rx_resp = ctx.tag.clock.timestamp(resp_mark);
    ex.t2_rx_poll = delivered_response.rx_timestamp;
    ex.t3_tx_resp = delivered_response.tx_timestamp;
    ex.diagnostics.p_rxl_dbm = resp_draw.p_rxl_dbm;
    ex.diagnostics.p_fp_dbm = resp_draw.p_fp_dbm;
    ex.outcome = ExchangeOutcome::Complete;

    // Power bookkeeping follows the measured per-state durations.
    result.tag_segments.push_back({RadioState::Rx, rx_listen_begin, rx_window_s});
    result.end_s = rx_listen_begin + rx_window_s;
    return result;
}

} // namespace

ExchangeResult run_sstwr(const RangingEndpoint &tag, const RangingEndpoint &anchor,
                         const LinkGeometry &geometry, const RadioConfig &config,
                         const ProtocolTiming &timing, const ChannelCalibration &cal,
                         const PowerProfile &profile, double start_s, Rng &rng)
{
    ExchangeContext ctx{tag, anchor, geometry, config, timing, cal, profile, start_s};
    ExchangeResult result = run_round(ctx, rng);
    result.exchange.scheme = RangingScheme::SingleSided;
    return result;
}

ExchangeResult run_dstwr(const RangingEndpoint &tag, const RangingEndpoint &anchor,
                         const LinkGeometry &geometry, const RadioConfig &config,
                         const ProtocolTiming &timing, const ChannelCalibration &cal,
                         const PowerProfile &profile, double start_s, Rng &rng)
{
    ExchangeContext ctx{tag, anchor, geometry, config, timing, cal, profile, start_s};
    ExchangeResult result = run_round(ctx, rng);
    RangingExchange &ex = result.exchange;
    ex.scheme = RangingScheme::DoubleSided;
    if (ex.outcome != ExchangeOutcome::Complete)
        return result;

    const ModePower &power = profile.mode(config.mode_id);
    const double air = ranging_airtime_s(config);
    const double tx_s = power.tx_ms * 1e-3;

    const double resp_mark = result.response_arrival_s;
    const double final_onair =
        resp_mark + air + tag.clock.global_duration(timing.effective_tag_processing_s());
    ex.t5_tx_final = tag.clock.timestamp(final_onair);
    ex.tag_reply_delay_s = final_onair - resp_mark;

    const ChannelDraw final_draw = draw_uwb(geometry, config, cal, rng);
    const double final_mark = final_onair + final_draw.tof_true_s + final_draw.tof_noise_s;
    const double final_complete = final_onair + air + final_draw.tof_true_s;

    // Tag: wait out the processing, then send the final frame.
    const double tag_idle_begin = result.end_s;
    const double tx_begin = std::max(final_onair, tag_idle_begin);
    result.tag_segments.push_back(
        {RadioState::Idle, tag_idle_begin, std::max(0.0, tx_begin - tag_idle_begin)});
    result.tag_segments.push_back({RadioState::Tx, tx_begin, tx_s});

    if (!final_draw.received) {
        ex.outcome = ExchangeOutcome::Timeout;
        result.end_s = tx_begin + tx_s;
        return result;
    }

    const RangingMessage final_msg{MessageKind::Final, tag.id, 0, ex.t4_rx_resp, ex.t5_tx_final};
    (void)encode(final_msg);
    ex.t6_rx_final = anchor.clock.timestamp(final_mark);

    // Anchor listens again for the final frame.
    const double anchor_rx_begin = result.anchor_segments.back().begin_s +
                                   result.anchor_segments.back().duration_s;
    result.anchor_segments.push_back(
        {RadioState::Rx, anchor_rx_begin, std::max(0.0, final_complete - anchor_rx_begin)});
    result.end_s = std::max(tx_begin + tx_s, final_complete);
    return result;
}

} // namespace uwbsim
