// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace uwbsim {

/// Distance-dependent systematic ranging error as a piecewise-linear curve.
/// Breakpoints map distance (m) to the signed bias (m) carried by a raw
/// estimate at that distance; lookups clamp outside the covered range.
class BiasTable {
  public:
    struct Breakpoint {
        double distance_m;
        double bias_m;
    };

    BiasTable() = default;
    explicit BiasTable(std::vector<Breakpoint> breakpoints); // throws if not strictly increasing

    bool empty() const { return points_.empty(); }
    const std::vector<Breakpoint> &breakpoints() const { return points_; }

    /// Interpolated bias at a distance; 0 for the empty table.
    double bias_m(double distance_m) const;

    /// Default correction curve for the most precise mode: strong negative
    /// bias at short range, near zero in the mid band, positive settling
    /// further out.
    static BiasTable mode4_default();

  private:
    std::vector<Breakpoint> points_;
};

} // namespace uwbsim
