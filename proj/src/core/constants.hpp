// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace uwbsim {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s

// Timestamp counter: 40-bit register incrementing at 128 * 499.2 MHz.
inline constexpr double kTickSeconds = 1.0 / (128.0 * 499.2e6); // ~15.65 ps
inline constexpr std::uint64_t kTickWrap = 1ull << 40;
inline constexpr std::uint64_t kTickMask = kTickWrap - 1;

inline constexpr double kDbmPerDecade = 20.0;

} // namespace uwbsim
