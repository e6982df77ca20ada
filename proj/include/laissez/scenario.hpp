#pragma once

#include "laissez/agents.hpp"
#include "laissez/model.hpp"
#include "laissez/tenant.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace laissez {

enum class OperatorPolicy { none, naive };

std::string_view to_string(OperatorPolicy policy);
std::optional<OperatorPolicy> operator_policy_from_string(std::string_view id);

struct EngineConfig {
    Duration agent_wake_period = Duration::seconds(10);
    Duration price_sweep_period = Duration::seconds(1);
    // Delay before a new clearing rate applies to a running tenant.
    Duration grace_window;
    Rate rate_tick = kDefaultRateTick;
    std::uint64_t seed = 0;
    OperatorPolicy operator_policy = OperatorPolicy::none;
    // Strict FIFO: only the queue head is ever matched.
    bool head_of_line_blocking = true;

    bool operator==(const EngineConfig&) const = default;
};

struct TenantSpec {
    TenantId id;
    SimTime arrival;
    std::string payload;
    LaunchTable launch_table;
    WorkloadProfile profile;
    std::string agent = "static";
    MigrationMode migration = MigrationMode::checkpoint_store;
    Money transfer_cost;
    Duration timeout = Duration::minutes(60);
    Progress resume_from;
    std::optional<SimTime> cancel_at;

    [[nodiscard]] MigrationPolicy migration_policy() const {
        return MigrationPolicy{migration, profile.load_delay, transfer_cost};
    }

    bool operator==(const TenantSpec&) const = default;
};

struct Scenario {
    int schema_version = 1;
    std::string name;
    std::string description;
    std::string cluster_id = "cluster";
    std::string function = "general";
    std::vector<AcceleratorType> accelerators;
    EngineConfig engine;
    std::vector<TenantSpec> tenants;

    [[nodiscard]] FunctionalCluster cluster() const { return {cluster_id, function, accelerators}; }

    bool operator==(const Scenario&) const = default;
};

/// A problem found in a scenario, located by field path and, when parsed
/// from text, by line and column (1-based; 0 when unknown).
struct Diagnostic {
    std::string path;
    std::string message;
    int line = 0;
    int column = 0;

    [[nodiscard]] std::string format() const;
};

class ScenarioError : public std::runtime_error {
public:
    explicit ScenarioError(std::vector<Diagnostic> diagnostics);
    [[nodiscard]] const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

/// Semantic checks; empty when the scenario is runnable.
std::vector<Diagnostic> validate_scenario(const Scenario& scenario,
                                          const AgentRegistry& registry = AgentRegistry::with_builtins());

/// SHA-256 hex digest of the canonical serialization.
std::string scenario_hash(const Scenario& scenario);

}  // namespace laissez
