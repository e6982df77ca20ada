#include "laissez/cost_model.hpp"

#include "laissez/error.hpp"

#include <algorithm>
#include <set>

namespace laissez {

const LaunchTable& validate_launch_table(const LaunchTable& table, const FunctionalCluster& cluster,
                                         const WorkloadProfile& profile) {
    if (table.entries.empty()) throw Error(Errc::EmptyLaunchTable, {});
    std::set<TypeId> seen;
    for (const auto& entry : table.entries) {
        if (cluster.find_type(entry.type) == nullptr) throw Error(Errc::UnknownHardware, entry.type);
        if (!profile.compatible(entry.type)) throw Error(Errc::IncompatibleHardware, entry.type);
        if (!seen.insert(entry.type).second) throw Error(Errc::DuplicateEntry, entry.type);
        if (entry.max_bid < Rate{}) throw Error(Errc::InvalidValue, entry.type, "negative max bid");
    }
    return table;
}

Duration remaining_time(const WorkloadProfile& profile, const TypeId& accel, Progress progress) {
    const auto total = profile.total_time(accel).count();
    const auto left = Progress::kOne - std::clamp<std::int64_t>(progress.count(), 0, Progress::kOne);
    return Duration::ms(div_round_half_up(static_cast<__int128>(total) * left, Progress::kOne));
}

Money cost_to_complete(const WorkloadProfile& profile, const TypeId& accel, Progress progress, Rate rate) {
    return rate * remaining_time(profile, accel, progress);
}

Rate break_even_bid(const WorkloadProfile& profile, const TypeId& target, const TypeId& alt,
                    Progress progress, Rate alt_rate, Money switch_cost, Rate tick) {
    const auto target_left = remaining_time(profile, target, progress);
    const auto alt_left = remaining_time(profile, alt, progress);
    if (target_left <= Duration{}) throw Error(Errc::CompletedWorkload, target);

    // rate [u$/h] = (alt_rate [u$/h] * alt_left [ms] + switch_cost [u$] * ms/h) / target_left [ms]
    const __int128 num = static_cast<__int128>(alt_rate.count()) * alt_left.count() +
                         static_cast<__int128>(switch_cost.count()) * kMsPerHour;
    const __int128 den = static_cast<__int128>(target_left.count()) * tick.count();
    return Rate::micros_per_hour(static_cast<std::int64_t>(num / den) * tick.count());
}

}  // namespace laissez
