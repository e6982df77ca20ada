#include "laissez/kernel.hpp"

#include "laissez/error.hpp"

namespace laissez {

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::RequestArrival: return "RequestArrival";
        case EventKind::PriceRecompute: return "PriceRecompute";
        case EventKind::AgentWake: return "AgentWake";
        case EventKind::CheckpointReached: return "CheckpointReached";
        case EventKind::MigrationComplete: return "MigrationComplete";
        case EventKind::LoadComplete: return "LoadComplete";
        case EventKind::WorkloadComplete: return "WorkloadComplete";
        case EventKind::Timeout: return "Timeout";
        case EventKind::Cancel: return "Cancel";
    }
    return "Unknown";
}

std::uint64_t EventQueue::schedule(SimTime at, EventKind kind, EventPayload payload) {
    if (at < clock_) {
        throw Error(Errc::TimeTravel, std::string{to_string(kind)},
                    "at " + std::to_string(at.ms()) + " ms, clock " + std::to_string(clock_.ms()) + " ms");
    }
    const auto seq = next_sequence_++;
    heap_.push(SimEvent{at, seq, kind, std::move(payload)});
    return seq;
}

std::optional<SimEvent> EventQueue::pop() {
    if (heap_.empty()) return std::nullopt;
    SimEvent ev = heap_.top();
    heap_.pop();
    clock_ = ev.time;
    return ev;
}

std::optional<SimTime> EventQueue::next_time() const {
    if (heap_.empty()) return std::nullopt;
    return heap_.top().time;
}

void EventQueue::advance_to(SimTime t) {
    if (t > clock_) clock_ = t;
}

}  // namespace laissez
