#pragma once

#include "laissez/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace laissez {

enum class TraceKind {
    RequestArrival,
    BidPosted,
    BidUpdated,
    BidExpired,
    PriceChange,
    Assignment,
    LoadComplete,
    RateChange,
    Bill,
    Release,
    CheckpointReached,
    Rollback,
    Migrate,
    Terminate,
    MigrationComplete,
    WorkloadComplete,
    Timeout,
    Cancel,
};

std::string_view to_string(TraceKind kind);
std::optional<TraceKind> trace_kind_from_string(std::string_view name);

/// One line of the run trace.
///
/// Billing is reconstructible from the records alone: an Assignment opens an
/// interval on (tenant, instance), and every Bill closes the open interval at
/// its `rate` and reopens it at the same time. A Rollback record's progress is
/// the amount of work discarded.
struct TraceRecord {
    SimTime time;
    TraceKind kind = TraceKind::RequestArrival;
    TenantId tenant;
    TypeId accel;
    std::optional<int> instance;
    std::optional<Rate> rate;
    std::optional<Progress> progress;
    // Tenant's billed total so far; absent on records without a tenant.
    std::optional<Money> cumulative_cost;

    bool operator==(const TraceRecord&) const = default;
};

struct TraceHeader {
    std::string scenario;
    std::string scenario_hash;
    std::uint64_t seed = 0;
    std::vector<std::pair<TypeId, int>> inventory;

    bool operator==(const TraceHeader&) const = default;
};

struct Trace {
    TraceHeader header;
    std::vector<TraceRecord> records;

    bool operator==(const Trace&) const = default;
};

}  // namespace laissez
