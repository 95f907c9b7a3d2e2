// SPDX-License-Identifier: Apache-2.0
#include "core/bias.hpp"

#include "core/error.hpp"

namespace uwbsim {

BiasTable::BiasTable(std::vector<Breakpoint> breakpoints) : points_(std::move(breakpoints))
{
    for (std::size_t i = 1; i < points_.size(); ++i) {
        require(points_[i - 1].distance_m < points_[i].distance_m, ErrorCode::Validation,
                "bias table breakpoints must be strictly increasing in distance");
    }
}

double BiasTable::bias_m(double distance_m) const
{
    if (points_.empty())
        return 0.0;
    if (distance_m <= points_.front().distance_m)
        return points_.front().bias_m;
    if (distance_m >= points_.back().distance_m)
        return points_.back().bias_m;
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (distance_m <= points_[i].distance_m) {
            const Breakpoint &a = points_[i - 1];
            const Breakpoint &b = points_[i];
            const double t = (distance_m - a.distance_m) / (b.distance_m - a.distance_m);
            return a.bias_m + t * (b.bias_m - a.bias_m);
        }
    }
    return points_.back().bias_m;
}

BiasTable BiasTable::mode4_default()
{
    return BiasTable({
        {2.5, -0.25},
        {5.0, -0.09},
        {7.5, 0.00},
        {10.0, 0.09},
        {12.5, 0.15},
        {30.0, 0.15},
    });
}

} // namespace uwbsim
