// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

#include "core/constants.hpp"

namespace uwbsim {

/// Free-running per-node oscillator with a fixed rate error in ppm and a phase
/// offset. Timestamps are 40-bit tick counts of the local time base.
struct DeviceClock {
    double drift_ppm = 0.0;
    double phase_offset_s = 0.0;

    double rate() const { return 1.0 + drift_ppm * 1e-6; }

    double local_seconds(double global_s) const
    {
        return rate() * global_s + phase_offset_s;
    }

    /// 40-bit timestamp for a global instant; quantization error <= tick/2.
    std::uint64_t timestamp(double global_s) const
    {
        const double ticks = local_seconds(global_s) / kTickSeconds;
        const auto rounded = static_cast<std::uint64_t>(std::llround(ticks));
        return rounded & kTickMask;
    }

    /// Global duration corresponding to a span measured on this clock.
    double global_duration(double local_duration_s) const
    {
        return local_duration_s / rate();
    }
};

/// (later - earlier) in 40-bit wraparound arithmetic.
inline std::uint64_t wrap_diff(std::uint64_t later, std::uint64_t earlier)
{
    return (later - earlier) & kTickMask;
}

inline double ticks_to_seconds(double ticks)
{
    return ticks * kTickSeconds;
}

} // namespace uwbsim
