#include "laissez/tenant.hpp"

#include "laissez/error.hpp"

#include <algorithm>

namespace laissez {

std::string_view to_string(Phase phase) {
    switch (phase) {
        case Phase::queued: return "queued";
        case Phase::loading: return "loading";
        case Phase::running: return "running";
        case Phase::migrating: return "migrating";
        case Phase::terminated: return "terminated";
        case Phase::completed: return "completed";
    }
    return "unknown";
}

std::string_view to_string(MigrationMode mode) {
    return mode == MigrationMode::checkpoint_store ? "checkpoint-store" : "live-overlap";
}

std::optional<MigrationMode> migration_mode_from_string(std::string_view id) {
    if (id == "checkpoint-store") return MigrationMode::checkpoint_store;
    if (id == "live-overlap") return MigrationMode::live_overlap;
    return std::nullopt;
}

std::string_view to_string(BillKind kind) {
    switch (kind) {
        case BillKind::compute: return "compute";
        case BillKind::overlap: return "overlap";
        case BillKind::load: return "load";
    }
    return "unknown";
}

namespace {

// Checkpoint multiples within one unit of completion count as completion.
bool is_completion(Progress p) { return Progress::kOne - p.count() <= 1; }

}  // namespace

Progress next_milestone(const WorkloadProfile& profile, Progress progress) {
    const auto step = profile.checkpoint_interval.count();
    const auto next = (progress.count() / step + 1) * step;
    if (next >= Progress::kOne || is_completion(Progress::nanos(next))) return Progress::complete();
    return Progress::nanos(next);
}

Duration time_to_reach(const WorkloadProfile& profile, const TypeId& accel, Progress from, Progress to) {
    if (to <= from) return Duration{};
    const __int128 total = profile.total_time(accel).count();
    const __int128 need = static_cast<__int128>(to.count() - from.count()) * total;
    return Duration::ms(static_cast<std::int64_t>((need + Progress::kOne - 1) / Progress::kOne));
}

std::vector<ProgressEvent> advance_progress(TenantState& state, Duration dt, const TypeId& accel) {
    std::vector<ProgressEvent> events;
    if (dt <= Duration{} || state.progress.is_complete()) return events;

    const __int128 total = state.profile.total_time(accel).count();
    const auto gained = static_cast<std::int64_t>(static_cast<__int128>(dt.count()) * Progress::kOne / total);
    const auto per_ms = static_cast<std::int64_t>((Progress::kOne + total - 1) / total);
    auto next = std::min(state.progress.count() + gained, Progress::kOne);

    std::optional<Progress> crossed;
    for (auto m = next_milestone(state.profile, state.last_checkpoint);
         !m.is_complete() && m.count() <= next; m = next_milestone(state.profile, m)) {
        events.push_back({ProgressEvent::Kind::checkpoint_reached, m});
        state.last_checkpoint = m;
        crossed = m;
    }
    if (crossed && next - crossed->count() < per_ms) next = crossed->count();
    if (is_completion(Progress::nanos(next))) {
        next = Progress::kOne;
        state.last_checkpoint = Progress::complete();
        events.push_back({ProgressEvent::Kind::workload_complete, Progress::complete()});
    }
    state.progress = Progress::nanos(next);
    return events;
}

MigrationOutcome apply_migration(TenantState& state, const InstanceRef& from, const Assignment& to,
                                 const MigrationPolicy& policy) {
    if (!state.profile.compatible(to.instance.type)) {
        throw Error(Errc::IncompatibleDestination, to.instance.type);
    }
    MigrationOutcome out;
    if (from == to.instance) {
        out.no_op = true;
        return out;
    }
    const Holding dest{to.instance, to.rate, to.decided_at};

    if (policy.mode == MigrationMode::checkpoint_store) {
        out.rolled_back = Progress::nanos(state.progress.count() - state.last_checkpoint.count());
        state.progress = state.last_checkpoint;
        std::erase_if(state.holdings, [&](const Holding& h) { return h.instance == from; });
        state.holdings.push_back(dest);
        state.phase = Phase::loading;
        out.delay = policy.load_delay;
        out.billing = {
            {BillingEffect::Action::release, from, BillKind::compute},
            {BillingEffect::Action::open, to.instance, BillKind::load},
        };
        return out;
    }

    state.holdings.push_back(dest);
    state.phase = Phase::migrating;
    out.delay = policy.load_delay;
    out.billing = {
        {BillingEffect::Action::close, from, BillKind::compute},
        {BillingEffect::Action::open, from, BillKind::overlap},
        {BillingEffect::Action::open, to.instance, BillKind::overlap},
    };
    return out;
}

}  // namespace laissez
