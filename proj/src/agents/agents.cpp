#include "laissez/agents.hpp"

#include "laissez/cost_model.hpp"
#include "laissez/error.hpp"

#include <algorithm>

namespace laissez {

std::string_view to_string(WakeReason reason) {
    switch (reason) {
        case WakeReason::arrival: return "arrival";
        case WakeReason::periodic: return "periodic";
        case WakeReason::price: return "price";
        case WakeReason::checkpoint: return "checkpoint";
        case WakeReason::load: return "load";
    }
    return "unknown";
}

Rate desired_bid(const AgentView& view, const LaunchEntry& entry, Money switch_cost) {
    const auto& profile = view.state.profile;
    const auto progress = view.state.progress;
    const auto base = view.cluster.type(entry.type).base_rate;

    const LaunchEntry* alt = nullptr;
    Money alt_cost;
    Rate alt_rate;
    for (const auto& other : view.launch_table.entries) {
        if (other.type == entry.type || is_inert(other, view.cluster) || !profile.compatible(other.type)) continue;
        const auto rate = view.exchange.effective_rate(view.state.id, other.type);
        const auto cost = cost_to_complete(profile, other.type, progress, rate);
        if (alt == nullptr || cost < alt_cost) {
            alt = &other;
            alt_cost = cost;
            alt_rate = rate;
        }
    }
    if (alt == nullptr) return std::max(base, entry.max_bid);

    const auto bid =
        break_even_bid(profile, entry.type, alt->type, progress, alt_rate, switch_cost, view.exchange.tick());
    return std::clamp(bid, base, std::max(base, entry.max_bid));
}

namespace {

bool operating(const AgentView& view) {
    return view.state.live() && !view.state.progress.is_complete();
}

template <typename SurchargeFn>
std::optional<AgentDecision> rebid_step(const AgentView& view, SurchargeFn wants_surcharge) {
    const auto tick = view.exchange.tick();
    for (const auto& entry : view.launch_table.entries) {
        if (is_inert(entry, view.cluster)) continue;
        const Money surcharge = wants_surcharge(entry)
                                    ? view.state.profile.restart_surcharge + view.policy.transfer_cost
                                    : Money{};
        const auto want = desired_bid(view, entry, surcharge);
        const auto standing = view.exchange.standing_bid(view.state.id, entry.type);
        if (!standing) return decision::Rebid{entry.type, want};
        const auto diff = want > *standing ? want - *standing : *standing - want;
        if (diff > tick) return decision::Rebid{entry.type, want};
    }
    return std::nullopt;
}

bool may_move_now(const AgentView& view) {
    return view.occupied && view.state.phase == Phase::running &&
           (view.policy.mode == MigrationMode::live_overlap || view.state.rollback_free());
}

std::optional<AgentDecision> move_up(const AgentView& view) {
    if (!may_move_now(view)) return std::nullopt;
    const auto rank = view.launch_table.priority(*view.occupied);
    LaunchTable better;
    for (std::size_t i = 0; i < view.launch_table.entries.size() && i < rank; ++i) {
        const auto& entry = view.launch_table.entries[i];
        if (!is_inert(entry, view.cluster) && view.exchange.is_entitled(view.state.id, entry.type)) {
            better.entries.push_back(entry);
        }
    }
    if (better.entries.empty()) return std::nullopt;
    return decision::Migrate{std::move(better)};
}

LaunchTable entitled_alternatives(const AgentView& view) {
    LaunchTable out;
    for (const auto& entry : view.launch_table.entries) {
        if (view.occupied && entry.type == *view.occupied) continue;
        if (!is_inert(entry, view.cluster) && view.exchange.is_entitled(view.state.id, entry.type)) {
            out.entries.push_back(entry);
        }
    }
    return out;
}

// Outbid on the occupied type at a price above the tenant's ceiling, with nowhere to go.
std::optional<AgentDecision> priced_out(const AgentView& view) {
    if (!view.occupied || view.state.phase != Phase::running) return std::nullopt;
    const auto& occupied = *view.occupied;
    if (view.exchange.is_entitled(view.state.id, occupied)) return std::nullopt;
    const auto* entry = view.launch_table.find(occupied);
    const auto ceiling = entry != nullptr ? entry->max_bid : Rate{};
    if (view.exchange.entry(occupied).clearing_rate() <= ceiling) return std::nullopt;
    if (!entitled_alternatives(view).entries.empty()) return std::nullopt;
    return decision::Terminate{};
}

bool defends(const AgentView& view, const LaunchEntry& entry) {
    return !view.occupied || entry.type == *view.occupied;
}

}  // namespace

AgentDecision static_agent_decide(const AgentView&) { return decision::Stay{}; }

AgentDecision break_even_agent_decide(const AgentView& view) {
    if (!operating(view)) return decision::Stay{};
    auto surcharge = [&](const LaunchEntry& e) { return !view.state.rollback_free() && defends(view, e); };
    if (auto d = rebid_step(view, surcharge)) return *d;
    if (auto d = move_up(view)) return *d;
    if (auto d = priced_out(view)) return *d;
    return decision::Stay{};
}

AgentDecision checkpoint_aware_agent_decide(const AgentView& view) {
    if (!operating(view)) return decision::Stay{};
    auto surcharge = [&](const LaunchEntry& e) { return view.reason != WakeReason::checkpoint && defends(view, e); };
    if (auto d = rebid_step(view, surcharge)) return *d;
    if (may_move_now(view) && !view.exchange.is_entitled(view.state.id, *view.occupied)) {
        auto alternatives = entitled_alternatives(view);
        if (!alternatives.entries.empty()) return decision::Migrate{std::move(alternatives)};
    }
    if (auto d = move_up(view)) return *d;
    if (auto d = priced_out(view)) return *d;
    return decision::Stay{};
}

AgentRegistry AgentRegistry::with_builtins() {
    AgentRegistry r;
    r.add("static", static_agent_decide);
    r.add("break-even", break_even_agent_decide);
    r.add("checkpoint-aware", checkpoint_aware_agent_decide);
    return r;
}

void AgentRegistry::add(std::string name, AgentStrategy strategy) {
    strategies_[std::move(name)] = std::move(strategy);
}

const AgentStrategy* AgentRegistry::find(const std::string& name) const {
    auto it = strategies_.find(name);
    return it == strategies_.end() ? nullptr : &it->second;
}

std::vector<std::string> AgentRegistry::names() const {
    std::vector<std::string> out;
    for (const auto& [name, fn] : strategies_) out.push_back(name);
    return out;
}

std::vector<MigrationDirective> naive_operator_decide(const std::vector<OperatorTenantView>& tenants,
                                                      const AvailabilityCache& cache,
                                                      const FunctionalCluster& cluster) {
    std::vector<MigrationDirective> out;
    for (const auto& t : tenants) {
        if (t.state == nullptr || t.launch_table == nullptr) continue;
        if (t.state->phase != Phase::running || !t.running_on || t.has_pending_request) continue;
        const auto& profile = t.state->profile;
        const auto current = profile.total_time(t.running_on->type);

        const LaunchEntry* best = nullptr;
        for (const auto& entry : t.launch_table->entries) {
            if (is_inert(entry, cluster) || !profile.compatible(entry.type)) continue;
            if (profile.total_time(entry.type) >= current || cache.free_count(entry.type) == 0) continue;
            if (best == nullptr || profile.total_time(entry.type) < profile.total_time(best->type)) best = &entry;
        }
        if (best != nullptr) out.push_back({t.state->id, LaunchTable{{*best}}});
    }
    return out;
}

}  // namespace laissez
