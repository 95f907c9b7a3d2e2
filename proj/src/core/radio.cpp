// SPDX-License-Identifier: Apache-2.0
#include "core/radio.hpp"

#include <string>

#include "core/error.hpp"

namespace uwbsim {

namespace {

struct ModeRow {
    int id;
    double rate_bps;
    int prf_mhz;
    int preamble;
    int pac;
    int channel;
};

// Mode table: 1 is the low-power setting, 5 the long-range one, 6 the wideband channel.
constexpr ModeRow kModes[kModeCount] = {
    {1, 6.8e6, 16, 64, 8, 1},
    {2, 6.8e6, 16, 128, 8, 1},
    {3, 6.8e6, 64, 128, 8, 1},
    {4, 6.8e6, 64, 128, 8, 5},
    {5, 110e3, 64, 4096, 64, 1},
    {6, 6.8e6, 64, 128, 8, 4},
};

// Nominal centers for channels 1..6 (MHz). Channel 4 is the wide 1331.2 MHz channel.
constexpr double kChannelCenterMhz[kModeCount] = {
    3494.4, 3993.6, 4492.8, 3993.6, 6489.6, 6988.8,
};

} // namespace

double channel_center_frequency_hz(int channel)
{
    require(channel >= 1 && channel <= 6, ErrorCode::Config,
            "unknown channel " + std::to_string(channel));
    return kChannelCenterMhz[channel - 1] * 1e6;
}

RadioConfig mode(int mode_id)
{
    require(mode_id >= 1 && mode_id <= kModeCount, ErrorCode::Config,
            "unknown mode " + std::to_string(mode_id));
    const ModeRow &row = kModes[mode_id - 1];
    RadioConfig config;
    config.mode_id = row.id;
    config.data_rate_bps = row.rate_bps;
    config.prf_mhz = row.prf_mhz;
    config.preamble_symbols = row.preamble;
    config.pac = row.pac;
    config.channel = row.channel;
    config.center_frequency_hz = channel_center_frequency_hz(row.channel);
    config.tx_power_dbm = kDefaultTxPowerDbm;
    return config;
}

FrameSpec frame_for(const RadioConfig &config, int payload_bytes)
{
    require(payload_bytes >= 0 && payload_bytes <= kMaxPayloadBytes, ErrorCode::Domain,
            "payload length " + std::to_string(payload_bytes) + " outside 0..1023");
    FrameSpec spec;
    spec.preamble_symbol_s = config.prf_mhz == 16 ? kSymbolSecondsPrf16 : kSymbolSecondsPrf64;
    // The low-rate setting uses the long SFD and transmits the PHR at its data
    // rate; the fast settings share the 8-symbol SFD and an 850 kb/s PHR.
    const bool low_rate = config.data_rate_bps < 850e3;
    spec.sfd_symbols = low_rate ? 64 : 8;
    spec.phr_bits = 19;
    spec.phr_rate_bps = low_rate ? config.data_rate_bps : 850e3;
    spec.payload_bytes = payload_bytes;
    return spec;
}

double airtime_s(const RadioConfig &config, int payload_bytes)
{
    const FrameSpec spec = frame_for(config, payload_bytes);
    const double shr = (config.preamble_symbols + spec.sfd_symbols) * spec.preamble_symbol_s;
    const double phr = spec.phr_bits / spec.phr_rate_bps;
    const double payload = payload_bytes * 8.0 / config.data_rate_bps;
    return shr + phr + payload;
}

} // namespace uwbsim
