#pragma once

#include "laissez/exchange.hpp"
#include "laissez/scheduler.hpp"
#include "laissez/tenant.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace laissez {

namespace decision {
struct Stay {
    bool operator==(const Stay&) const = default;
};
struct Rebid {
    TypeId type;
    Rate rate;
    bool operator==(const Rebid&) const = default;
};
struct Migrate {
    LaunchTable table;
    bool operator==(const Migrate&) const = default;
};
struct Terminate {
    bool operator==(const Terminate&) const = default;
};
}  // namespace decision

using AgentDecision = std::variant<decision::Stay, decision::Rebid, decision::Migrate, decision::Terminate>;

enum class WakeReason { arrival, periodic, price, checkpoint, load };

std::string_view to_string(WakeReason reason);

/// Everything an economic agent may look at when it wakes.
struct AgentView {
    const TenantState& state;
    const LaunchTable& launch_table;
    const ExchangeTable& exchange;
    const FunctionalCluster& cluster;
    // Type of the instance the workload currently runs (or loads) on.
    std::optional<TypeId> occupied;
    MigrationPolicy policy;
    WakeReason reason = WakeReason::periodic;
    SimTime now;
};

using AgentStrategy = std::function<AgentDecision(const AgentView&)>;

/// Never rebids or moves; the fixed-price baseline.
AgentDecision static_agent_decide(const AgentView& view);

/// Bids each type at the break-even rate against the cheapest alternative and
/// moves up the launch table only when no work would be lost.
AgentDecision break_even_agent_decide(const AgentView& view);

/// Break-even bidding that defends its current instance with the restart
/// surcharge except right at a checkpoint, and leaves when it loses there.
AgentDecision checkpoint_aware_agent_decide(const AgentView& view);

/// Rate the tenant would bid for `entry`: break-even against the cheapest
/// other launch-table type, clamped to [base, max bid].
Rate desired_bid(const AgentView& view, const LaunchEntry& entry, Money switch_cost);

/// Named strategies selectable from scenario files.
class AgentRegistry {
public:
    /// Registry holding static, break-even and checkpoint-aware.
    static AgentRegistry with_builtins();

    void add(std::string name, AgentStrategy strategy);
    [[nodiscard]] const AgentStrategy* find(const std::string& name) const;
    [[nodiscard]] std::vector<std::string> names() const;

private:
    std::map<std::string, AgentStrategy> strategies_;
};

struct MigrationDirective {
    TenantId tenant;
    LaunchTable table;

    bool operator==(const MigrationDirective&) const = default;
};

struct OperatorTenantView {
    const TenantState* state = nullptr;
    const LaunchTable* launch_table = nullptr;
    std::optional<InstanceRef> running_on;
    bool has_pending_request = false;
};

/// Operator baseline: as soon as a strictly faster compatible type has a free
/// instance, move the tenant there, regardless of where it is in its epoch.
std::vector<MigrationDirective> naive_operator_decide(const std::vector<OperatorTenantView>& tenants,
                                                      const AvailabilityCache& cache,
                                                      const FunctionalCluster& cluster);

}  // namespace laissez
