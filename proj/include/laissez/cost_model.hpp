#pragma once

#include "laissez/model.hpp"

namespace laissez {

/// Granularity of bids; one tick above a standing bid strictly outbids it.
inline constexpr Rate kDefaultRateTick = Rate::micros_per_hour(1'000);

/// Checks a launch table against the cluster and workload. Returns it unchanged.
/// Throws EmptyLaunchTable, UnknownHardware, IncompatibleHardware or DuplicateEntry.
const LaunchTable& validate_launch_table(const LaunchTable& table, const FunctionalCluster& cluster,
                                         const WorkloadProfile& profile);

/// Time left to finish on `accel` from `progress`, rounded half-up to the ms.
Duration remaining_time(const WorkloadProfile& profile, const TypeId& accel, Progress progress);

Money cost_to_complete(const WorkloadProfile& profile, const TypeId& accel, Progress progress, Rate rate);

/// Highest rate on `target` at which finishing there costs no more than
/// finishing on `alt` at `alt_rate` plus `switch_cost`. Rounded down to `tick`.
/// Throws IncompatibleHardware, or CompletedWorkload when nothing remains on target.
Rate break_even_bid(const WorkloadProfile& profile, const TypeId& target, const TypeId& alt,
                    Progress progress, Rate alt_rate, Money switch_cost, Rate tick = kDefaultRateTick);

}  // namespace laissez
