// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>

namespace uwbsim::refs {

// Reference measurements from the prototype characterization campaign. Report
// tables print these next to simulated values so deviations stay auditable.
// Bump the version when any number changes.
inline constexpr char kVersion[] = "prototype-2021.1";

// Average current per ranging round, by mode (mA).
inline constexpr std::array<double, 6> kAvgCurrentMa = {53.0, 56.0, 59.0, 64.0, 63.0, 70.0};

// Ranging precision by mode (cm). Mode 1 reported a single 4.36 cm figure
// from the strongest received signals only.
inline constexpr std::array<double, 6> kStd0to30Cm = {4.36, 5.94, 6.48, 4.04, 19.58, 4.04};
inline constexpr std::array<double, 6> kStd0to10Cm = {4.36, 6.50, 5.42, 2.44, 13.55, 5.23};
inline constexpr std::array<double, 6> kMaxDiffCm = {0.0, 30.00, 71.02, 32.95, 170.12, 68.11};

// Technology comparison over the 0-30 m campaign:
// columns uwb_los, uwb_nlos, ble_los, ble_nlos.
inline constexpr std::array<const char *, 4> kComparisonGroups = {"uwb_los", "uwb_nlos",
                                                                  "ble_los", "ble_nlos"};
inline constexpr std::array<double, 4> kComparisonReception = {0.9999, 0.9998, 0.8983, 0.7974};
inline constexpr std::array<double, 4> kComparisonStd0to30Cm = {4.04, 3.27, 299.78, 717.66};
inline constexpr std::array<double, 4> kComparisonStd0to10Cm = {2.44, 2.73, 101.16, 148.75};
inline constexpr std::array<double, 4> kComparisonMaxDevCm = {32.95, 75.46, 5657.17, 4016.33};
inline constexpr std::array<double, 4> kComparisonAvgDev250Cm = {11.99, 0.76, 75.82, 185.86};
inline constexpr std::array<double, 4> kComparisonAvgDev750Cm = {5.24, 6.14, 241.83, 699.12};

// Obstruction identification test at roughly ten meters across three rooms:
// columns los, nlos1, nlos2, nlos3.
inline constexpr std::array<const char *, 4> kNlosLevels = {"los", "nlos1", "nlos2", "nlos3"};
inline constexpr std::array<double, 4> kNlosBarrierCm = {0.0, 6.5, 13.0, 17.0};
inline constexpr std::array<double, 4> kNlosDistanceEstCm = {981.0, 1005.0, 996.0, 1005.0};
inline constexpr std::array<double, 4> kNlosBleRssiDbm = {-60.0, -64.0, -72.0, -76.0};
inline constexpr std::array<double, 4> kNlosPFpDbm = {38.73, 29.07, 27.15, 27.57};
inline constexpr std::array<double, 4> kNlosPRxlDbm = {40.16, 36.93, 34.84, 34.00};
inline constexpr std::array<double, 4> kNlosDiffDbm = {1.43, 7.86, 7.69, 7.23};

// Battery arithmetic for the 200 mAh coin cell.
inline constexpr double kBatteryCapacityMah = 200.0;
inline constexpr double kLifetimeContinuousH = 3.0;
inline constexpr double kLifetimeDelayedRxH = 6.5;
inline constexpr double kLifetimeMovingH = 160.0;
inline constexpr double kDutyCycleAddedMa = 0.44;
inline constexpr double kDutyCycleBaseMa = 1.25;

// Reception figures.
inline constexpr double kMode1SuccessRate = 0.1778;
inline constexpr double kBleReceptionLos = 0.8983;
inline constexpr double kBleReceptionNlos = 0.7974;
inline constexpr double kMode5RangeM = 622.0;

} // namespace uwbsim::refs
