// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>

namespace uwbsim {

/// One of the six predefined transmission configurations.
struct RadioConfig {
    int mode_id = 0;
    double data_rate_bps = 0.0;
    int prf_mhz = 0;          // 16 or 64
    int preamble_symbols = 0; // 64..4096
    int pac = 0;
    int channel = 0;
    double center_frequency_hz = 0.0;
    double tx_power_dbm = 0.0;
};

/// Physical frame structure used for airtime accounting.
struct FrameSpec {
    double preamble_symbol_s = 0.0;
    int sfd_symbols = 0;
    int phr_bits = 19;
    double phr_rate_bps = 0.0;
    int payload_bytes = 0;
};

inline constexpr int kMaxPayloadBytes = 1023;
inline constexpr int kRangingPayloadBytes = 12;
inline constexpr int kModeCount = 6;

// Preamble symbol period per PRF; the 64 MHz symbol runs 24.04 ns longer.
inline constexpr double kSymbolSecondsPrf16 = 993.59e-9;
inline constexpr double kSymbolSecondsPrf64 = 1017.63e-9;

// Default transmit power: regulatory EIRP limit over a 499.2 MHz channel.
inline constexpr double kDefaultTxPowerDbm = -14.3;

/// Nominal channel center frequency in Hz; throws for channels outside 1..6.
double channel_center_frequency_hz(int channel);

/// Full configuration row for a mode id in 1..6; throws on unknown ids.
RadioConfig mode(int mode_id);

/// Frame layout for a configuration and payload length.
FrameSpec frame_for(const RadioConfig &config, int payload_bytes);

/// On-air duration of a frame: SHR (preamble + SFD), PHR, then payload.
double airtime_s(const RadioConfig &config, int payload_bytes);

inline double ranging_airtime_s(const RadioConfig &config)
{
    return airtime_s(config, kRangingPayloadBytes);
}

} // namespace uwbsim
