#include "laissez/trace.hpp"

#include <array>

namespace laissez {
namespace {

constexpr std::array<std::pair<TraceKind, std::string_view>, 18> kNames{{
    {TraceKind::RequestArrival, "RequestArrival"},
    {TraceKind::BidPosted, "BidPosted"},
    {TraceKind::BidUpdated, "BidUpdated"},
    {TraceKind::BidExpired, "BidExpired"},
    {TraceKind::PriceChange, "PriceChange"},
    {TraceKind::Assignment, "Assignment"},
    {TraceKind::LoadComplete, "LoadComplete"},
    {TraceKind::RateChange, "RateChange"},
    {TraceKind::Bill, "Bill"},
    {TraceKind::Release, "Release"},
    {TraceKind::CheckpointReached, "CheckpointReached"},
    {TraceKind::Rollback, "Rollback"},
    {TraceKind::Migrate, "Migrate"},
    {TraceKind::Terminate, "Terminate"},
    {TraceKind::MigrationComplete, "MigrationComplete"},
    {TraceKind::WorkloadComplete, "WorkloadComplete"},
    {TraceKind::Timeout, "Timeout"},
    {TraceKind::Cancel, "Cancel"},
}};

}  // namespace

std::string_view to_string(TraceKind kind) {
    for (const auto& [k, name] : kNames) {
        if (k == kind) return name;
    }
    return "Unknown";
}

std::optional<TraceKind> trace_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kNames) {
        if (n == name) return k;
    }
    return std::nullopt;
}

}  // namespace laissez
