#pragma once

#include "laissez/units.hpp"

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace laissez {

using TypeId = std::string;
using TenantId = std::string;
using RequestId = std::string;

/// A hardware class offered by the cluster at an operator-defined floor price.
struct AcceleratorType {
    TypeId id;
    std::string name;
    Rate base_rate;
    int instance_count = 1;

    bool operator==(const AcceleratorType&) const = default;
};

struct InstanceRef {
    TypeId type;
    int index = 0;

    auto operator<=>(const InstanceRef&) const = default;
};

std::string to_string(const InstanceRef& ref);

/// One allocatable accelerator. Holds at most one tenant.
struct Instance {
    enum class State { free, allocated, draining };

    InstanceRef ref;
    State state = State::free;
    TenantId tenant;
    Rate rate;
    SimTime since;

    [[nodiscard]] bool is_free() const { return state == State::free; }
};

/// Pool of heterogeneous accelerators serving a single computational function.
class FunctionalCluster {
public:
    FunctionalCluster() = default;
    FunctionalCluster(std::string id, std::string function, std::vector<AcceleratorType> types);

    [[nodiscard]] const std::string& id() const { return id_; }
    [[nodiscard]] const std::string& function() const { return function_; }
    [[nodiscard]] const std::vector<AcceleratorType>& types() const { return types_; }
    [[nodiscard]] const std::vector<Instance>& instances() const { return instances_; }

    [[nodiscard]] const AcceleratorType* find_type(const TypeId& id) const;
    /// Throws UnknownHardware.
    [[nodiscard]] const AcceleratorType& type(const TypeId& id) const;

private:
    std::string id_;
    std::string function_;
    std::vector<AcceleratorType> types_;
    std::vector<Instance> instances_;
};

/// Deterministic execution characteristics of one tenant workload.
struct WorkloadProfile {
    // Types absent from the map are incompatible.
    std::map<TypeId, Duration> exec_time;
    Progress checkpoint_interval = Progress::complete();
    Money restart_surcharge;
    Duration load_delay;

    [[nodiscard]] bool compatible(const TypeId& type) const { return exec_time.contains(type); }
    /// Throws IncompatibleHardware.
    [[nodiscard]] Duration total_time(const TypeId& type) const;
    /// Throws InvalidValue when an invariant does not hold.
    void validate() const;

    bool operator==(const WorkloadProfile&) const = default;
};

struct LaunchEntry {
    TypeId type;
    Rate max_bid;

    bool operator==(const LaunchEntry&) const = default;
};

/// Prioritized (hardware, max bid) list; earlier entries are preferred.
struct LaunchTable {
    std::vector<LaunchEntry> entries;

    [[nodiscard]] const LaunchEntry* find(const TypeId& type) const;
    /// Position of `type` in the table, or npos.
    [[nodiscard]] std::size_t priority(const TypeId& type) const;

    bool operator==(const LaunchTable&) const = default;
};

/// A max bid below the type's floor is kept in the table but never submitted.
bool is_inert(const LaunchEntry& entry, const FunctionalCluster& cluster);

struct UserRequest {
    RequestId id;
    TenantId tenant;
    std::string payload;
    LaunchTable launch_table;
    std::string agent = "static";
    std::string migration_policy = "checkpoint-store";
    Duration timeout = Duration::minutes(60);
    Progress resume_from;

    bool operator==(const UserRequest&) const = default;
};

}  // namespace laissez
