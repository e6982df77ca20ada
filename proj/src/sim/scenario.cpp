#include "laissez/scenario.hpp"

#include "laissez/cost_model.hpp"
#include "laissez/error.hpp"

#include <set>

namespace laissez {

std::string_view to_string(OperatorPolicy policy) {
    return policy == OperatorPolicy::naive ? "naive" : "none";
}

std::optional<OperatorPolicy> operator_policy_from_string(std::string_view id) {
    if (id == "none") return OperatorPolicy::none;
    if (id == "naive") return OperatorPolicy::naive;
    return std::nullopt;
}

std::string Diagnostic::format() const {
    std::string out = path.empty() ? std::string("<root>") : path;
    if (line > 0) out += " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")";
    return out + ": " + message;
}

namespace {
std::string join(const std::vector<Diagnostic>& diagnostics) {
    std::string out = "invalid scenario";
    for (const auto& d : diagnostics) out += "\n  " + d.format();
    return out;
}
}  // namespace

ScenarioError::ScenarioError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::vector<Diagnostic> validate_scenario(const Scenario& s, const AgentRegistry& registry) {
    std::vector<Diagnostic> out;
    auto add = [&](std::string path, std::string message) { out.push_back({std::move(path), std::move(message)}); };

    if (s.schema_version != 1) add("schema_version", "unsupported version " + std::to_string(s.schema_version));
    if (s.name.empty()) add("name", "must not be empty");
    if (s.accelerators.empty()) add("cluster.accelerators", "at least one accelerator type is required");

    bool fields_ok = true;
    for (std::size_t i = 0; i < s.accelerators.size(); ++i) {
        const auto& a = s.accelerators[i];
        const auto at = "cluster.accelerators[" + std::to_string(i) + "]";
        if (a.id.empty()) {
            add(at + ".id", "must not be empty");
            fields_ok = false;
        }
        if (a.base_rate <= Rate{}) {
            add(at + ".base_rate", "must be positive");
            fields_ok = false;
        }
        if (a.instance_count < 1) {
            add(at + ".count", "must be at least 1");
            fields_ok = false;
        }
    }

    FunctionalCluster cluster;
    bool cluster_ok = false;
    if (fields_ok) {
        try {
            cluster = s.cluster();
            cluster_ok = true;
        } catch (const Error& e) {
            add("cluster.accelerators", e.what());
        }
    }

    const auto& engine = s.engine;
    if (engine.agent_wake_period <= Duration{}) add("engine.agent_wake_period_s", "must be positive");
    if (engine.price_sweep_period <= Duration{}) add("engine.price_sweep_period_s", "must be positive");
    if (engine.grace_window < Duration{}) add("engine.grace_window_s", "must not be negative");
    if (engine.rate_tick <= Rate{}) add("engine.rate_tick", "must be positive");

    std::set<TenantId> ids;
    for (std::size_t i = 0; i < s.tenants.size(); ++i) {
        const auto& t = s.tenants[i];
        const auto at = "tenants[" + std::to_string(i) + "]";
        if (t.id.empty()) add(at + ".id", "must not be empty");
        if (!ids.insert(t.id).second) add(at + ".id", "duplicate tenant id '" + t.id + "'");
        if (t.arrival < SimTime{}) add(at + ".arrival_s", "must not be negative");
        if (registry.find(t.agent) == nullptr) add(at + ".agent", "unknown agent '" + t.agent + "'");
        if (t.timeout <= Duration{}) add(at + ".timeout_s", "must be positive");
        if (t.transfer_cost < Money{}) add(at + ".transfer_cost", "must not be negative");
        if (t.resume_from < Progress::zero() || t.resume_from.is_complete()) {
            add(at + ".resume_from", "must lie in [0, 1)");
        }
        if (t.cancel_at && *t.cancel_at < SimTime{}) add(at + ".cancel_at_s", "must not be negative");
        try {
            t.profile.validate();
        } catch (const Error& e) {
            add(at + ".profile", e.what());
        }
        if (!cluster_ok) continue;
        for (const auto& [type, time] : t.profile.exec_time) {
            if (cluster.find_type(type) == nullptr) add(at + ".profile.hours." + type, "unknown accelerator type");
        }
        try {
            validate_launch_table(t.launch_table, cluster, t.profile);
        } catch (const Error& e) {
            add(at + ".launch_table", e.what());
        }
    }
    return out;
}

}  // namespace laissez
