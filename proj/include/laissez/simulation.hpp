#pragma once

#include "laissez/agents.hpp"
#include "laissez/ledger.hpp"
#include "laissez/scenario.hpp"
#include "laissez/trace.hpp"

#include <map>
#include <optional>

namespace laissez {

inline constexpr SimTime kForever = SimTime::at_ms(std::int64_t{1} << 60);

struct TenantOutcome {
    TenantState state;
    std::optional<SimTime> finished_at;
    int migrations = 0;
};

struct RunResult {
    Trace trace;
    BillingLedger ledger;
    std::map<TenantId, TenantOutcome> tenants;
    // False when `until` was reached with work outstanding.
    bool quiescent = true;
    SimTime end_time;
};

/// Runs a scenario to quiescence or `until`. Open billing intervals are
/// closed at the stop time. Throws ScenarioError when validation fails.
RunResult run(const Scenario& scenario, SimTime until = kForever,
              const AgentRegistry& registry = AgentRegistry::with_builtins());

}  // namespace laissez
