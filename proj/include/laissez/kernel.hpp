#pragma once

#include "laissez/agents.hpp"
#include "laissez/model.hpp"

#include <cstdint>
#include <optional>
#include <queue>
#include <string_view>
#include <vector>

namespace laissez {

enum class EventKind {
    RequestArrival,
    PriceRecompute,
    AgentWake,
    CheckpointReached,
    MigrationComplete,
    LoadComplete,
    WorkloadComplete,
    Timeout,
    Cancel,
};

std::string_view to_string(EventKind kind);

struct EventPayload {
    TenantId tenant;
    RequestId request;
    // Progress events carry the tenant's segment token; stale tokens are dropped.
    std::uint64_t token = 0;
    std::optional<InstanceRef> instance;
    WakeReason reason = WakeReason::periodic;
};

struct SimEvent {
    SimTime time;
    std::uint64_t sequence = 0;
    EventKind kind = EventKind::AgentWake;
    EventPayload payload;
};

/// Deterministic event queue: total order by (time, sequence).
class EventQueue {
public:
    /// Throws TimeTravel when `at` precedes the clock. Returns the sequence number.
    std::uint64_t schedule(SimTime at, EventKind kind, EventPayload payload = {});

    /// Pops the next event and advances the clock to it.
    std::optional<SimEvent> pop();

    [[nodiscard]] SimTime now() const { return clock_; }
    [[nodiscard]] bool empty() const { return heap_.empty(); }
    [[nodiscard]] std::size_t size() const { return heap_.size(); }
    [[nodiscard]] std::optional<SimTime> next_time() const;

    /// Moves the clock forward without an event (used when a run stops early).
    void advance_to(SimTime t);

private:
    struct Later {
        bool operator()(const SimEvent& a, const SimEvent& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.sequence > b.sequence;
        }
    };

    std::priority_queue<SimEvent, std::vector<SimEvent>, Later> heap_;
    SimTime clock_;
    std::uint64_t next_sequence_ = 0;
};

}  // namespace laissez
