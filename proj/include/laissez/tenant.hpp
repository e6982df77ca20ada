#pragma once

#include "laissez/model.hpp"
#include "laissez/scheduler.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace laissez {

enum class Phase { queued, loading, running, migrating, terminated, completed };

std::string_view to_string(Phase phase);

struct Holding {
    InstanceRef instance;
    Rate rate;
    SimTime since;

    bool operator==(const Holding&) const = default;
};

/// Tenant-side view of one workload's execution.
struct TenantState {
    TenantId id;
    WorkloadProfile profile;
    Progress progress;
    Progress last_checkpoint;
    // Two entries only while migrating with both instances held.
    std::vector<Holding> holdings;
    Phase phase = Phase::queued;
    Money spent;

    [[nodiscard]] bool rollback_free() const { return progress == last_checkpoint; }
    [[nodiscard]] bool live() const { return phase != Phase::terminated && phase != Phase::completed; }
};

struct ProgressEvent {
    enum class Kind { checkpoint_reached, workload_complete };
    Kind kind;
    Progress at;

    bool operator==(const ProgressEvent&) const = default;
};

/// Advances work done on `accel` by `dt`, capped at completion. Reports every
/// checkpoint multiple crossed. Work is floored to the progress unit, and a
/// crossing that overshoots the checkpoint by less than one millisecond of
/// work lands exactly on it.
std::vector<ProgressEvent> advance_progress(TenantState& state, Duration dt, const TypeId& accel);

/// Next checkpoint multiple strictly after `progress`, or completion.
Progress next_milestone(const WorkloadProfile& profile, Progress progress);

/// Smallest whole-millisecond run on `accel` that takes `from` to at least `to`.
Duration time_to_reach(const WorkloadProfile& profile, const TypeId& accel, Progress from, Progress to);

enum class MigrationMode { checkpoint_store, live_overlap };

std::string_view to_string(MigrationMode mode);
std::optional<MigrationMode> migration_mode_from_string(std::string_view id);

struct MigrationPolicy {
    MigrationMode mode = MigrationMode::checkpoint_store;
    Duration load_delay;
    // Tenant-side estimate of moving state; feeds bids, never billed.
    Money transfer_cost;

    bool operator==(const MigrationPolicy&) const = default;
};

enum class BillKind { compute, overlap, load };

std::string_view to_string(BillKind kind);

struct BillingEffect {
    enum class Action { close, open, release };
    Action action;
    InstanceRef instance;
    BillKind kind = BillKind::compute;

    bool operator==(const BillingEffect&) const = default;
};

struct MigrationOutcome {
    std::vector<BillingEffect> billing;
    // Time from dispatch until the workload runs on the destination.
    Duration delay;
    // Work discarded by rolling back to the last checkpoint.
    Progress rolled_back;
    bool no_op = false;
};

/// Moves `state` from `from` onto the dispatched `to`.
///
/// checkpoint-store rolls back to the last checkpoint, releases the source at
/// departure and bills the destination as loading until `delay` elapses.
/// live-overlap keeps the source and bills both as overlap, without rollback.
/// Throws IncompatibleDestination.
MigrationOutcome apply_migration(TenantState& state, const InstanceRef& from, const Assignment& to,
                                 const MigrationPolicy& policy);

}  // namespace laissez
