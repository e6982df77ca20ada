#pragma once

#include "laissez/trace.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace laissez {

struct TenantSummary {
    TenantId id;
    Money total;
    std::string outcome;  // completed, terminated, cancelled, timed-out, running
    std::optional<SimTime> finished_at;
    int migrations = 0;
    Progress rollback_work;
};

struct AcceleratorSummary {
    TypeId type;
    int instances = 0;
    Duration busy;
    double utilization = 0.0;
};

/// Everything here is recomputed from the trace records alone.
struct RunSummary {
    std::string scenario;
    std::string scenario_hash;
    SimTime makespan;
    std::vector<TenantSummary> tenants;
    std::vector<AcceleratorSummary> accelerators;
    Money revenue;
    int migrations = 0;
    Progress rollback_work;
};

RunSummary summarize(const Trace& trace);

/// Human-readable table, money rounded to cents.
std::string format_summary(const RunSummary& summary);

/// "$0.38": half-up to the cent.
std::string cents(Money m);

}  // namespace laissez
