#include "laissez/simulation.hpp"

#include "laissez/error.hpp"
#include "laissez/kernel.hpp"
#include "laissez/scheduler.hpp"

#include <algorithm>
#include <set>

namespace laissez {
namespace {

constexpr int kMaxAgentSteps = 8;

struct OpenBill {
    Rate rate;
    SimTime since;
    BillKind kind = BillKind::compute;
};

struct Runtime {
    const TenantSpec* spec = nullptr;
    const AgentStrategy* strategy = nullptr;
    MigrationPolicy policy;
    TenantState state;
    bool arrived = false;
    std::uint64_t token = 0;
    // Instance the workload runs or loads on.
    std::optional<InstanceRef> compute;
    // live-overlap destination waiting for the transfer.
    std::optional<InstanceRef> destination;
    bool progressing = false;
    bool arriving_by_migration = false;
    SimTime anchor;
    std::optional<RequestId> pending;
    int request_seq = 0;
    bool price_wake_pending = false;
    std::optional<SimTime> finished_at;
    int migrations = 0;
};

class Simulation {
public:
    Simulation(const Scenario& scenario, const AgentRegistry& registry)
        : scenario_(scenario),
          cluster_(scenario.cluster()),
          exchange_(cluster_, scenario.engine.rate_tick),
          cache_(cluster_) {
        for (const auto& spec : scenario.tenants) {
            Runtime rt;
            rt.spec = &spec;
            rt.strategy = registry.find(spec.agent);
            rt.policy = spec.migration_policy();
            rt.state.id = spec.id;
            rt.state.profile = spec.profile;
            rt.state.progress = spec.resume_from;
            rt.state.last_checkpoint = spec.resume_from;
            tenants_.emplace(spec.id, std::move(rt));
        }
        trace_.header.scenario = scenario.name;
        trace_.header.scenario_hash = scenario_hash(scenario);
        trace_.header.seed = scenario.engine.seed;
        for (const auto& t : cluster_.types()) trace_.header.inventory.emplace_back(t.id, t.instance_count);
    }

    RunResult run(SimTime until) {
        std::vector<const TenantSpec*> order;
        for (const auto& spec : scenario_.tenants) order.push_back(&spec);
        std::stable_sort(order.begin(), order.end(), [](const TenantSpec* a, const TenantSpec* b) {
            return a->arrival != b->arrival ? a->arrival < b->arrival : a->id < b->id;
        });
        for (const auto* spec : order) {
            events_.schedule(spec->arrival, EventKind::RequestArrival, EventPayload{.tenant = spec->id});
        }

        while (auto next = events_.next_time()) {
            if (*next > until) break;
            auto ev = events_.pop();
            handle(*ev);
            settle();
            // Leftover timers (stale timeouts, sweeps) carry no work.
            if (quiescent()) break;
        }

        RunResult out;
        out.quiescent = quiescent();
        if (!out.quiescent) {
            if (events_.now() < until) events_.advance_to(until);
            for (auto& [id, rt] : tenants_) {
                if (!rt.state.live() || !rt.arrived) continue;
                sync(rt, false);
                for (const auto& h : holdings_of(id)) close_bill(rt, h, false);
            }
        }
        out.end_time = events_.now();
        for (auto& [id, rt] : tenants_) {
            rt.state.spent = ledger_.total(id);
            out.tenants[id] = TenantOutcome{rt.state, rt.finished_at, rt.migrations};
        }
        out.trace = std::move(trace_);
        out.ledger = std::move(ledger_);
        return out;
    }

private:
    SimTime now() const { return events_.now(); }

    bool quiescent() const {
        if (!queue_.empty()) return false;
        return std::none_of(tenants_.begin(), tenants_.end(),
                            [](const auto& kv) { return !kv.second.arrived || kv.second.state.live(); });
    }

    bool any_live() const {
        return std::any_of(tenants_.begin(), tenants_.end(),
                           [](const auto& kv) { return kv.second.arrived && kv.second.state.live(); });
    }

    // ---- trace and billing -------------------------------------------------

    void record(TraceKind kind, const TenantId& tenant, const TypeId& accel, std::optional<int> instance = {},
                std::optional<Rate> rate = {}, std::optional<Progress> progress = {}) {
        TraceRecord r;
        r.time = now();
        r.kind = kind;
        r.tenant = tenant;
        r.accel = accel;
        r.instance = instance;
        r.rate = rate;
        r.progress = progress;
        if (!tenant.empty()) r.cumulative_cost = ledger_.total(tenant);
        trace_.records.push_back(std::move(r));
    }

    std::vector<InstanceRef> holdings_of(const TenantId& tenant) const {
        std::vector<InstanceRef> out;
        for (const auto& [key, bill] : open_bills_) {
            if (key.first == tenant) out.push_back(key.second);
        }
        return out;
    }

    void open_bill(const TenantId& tenant, const InstanceRef& ref, Rate rate, BillKind kind) {
        open_bills_[{tenant, ref}] = OpenBill{rate, now(), kind};
    }

    // Closes the open interval at its rate; reopens it unless `final`.
    void close_bill(Runtime& rt, const InstanceRef& ref, bool reopen, std::optional<Rate> next_rate = {},
                    std::optional<BillKind> next_kind = {}) {
        auto it = open_bills_.find({rt.state.id, ref});
        if (it == open_bills_.end()) return;
        auto bill = it->second;
        ledger_.accrue(rt.state.id, ref, bill.rate, bill.since, now(), bill.kind);
        rt.state.spent = ledger_.total(rt.state.id);
        record(TraceKind::Bill, rt.state.id, ref.type, ref.index, bill.rate, snapshot(rt).progress);
        if (reopen) {
            it->second = OpenBill{next_rate.value_or(bill.rate), now(), next_kind.value_or(bill.kind)};
        } else {
            open_bills_.erase(it);
        }
    }

    void release(Runtime& rt, const InstanceRef& ref) {
        close_bill(rt, ref, false);
        cache_.release(ref, rt.state.id);
        std::erase_if(rt.state.holdings, [&](const Holding& h) { return h.instance == ref; });
        record(TraceKind::Release, rt.state.id, ref.type, ref.index, {}, snapshot(rt).progress);
    }

    // ---- progress ----------------------------------------------------------

    TenantState snapshot(const Runtime& rt) const {
        TenantState copy = rt.state;
        if (rt.progressing && rt.compute) advance_progress(copy, now() - rt.anchor, rt.compute->type);
        return copy;
    }

    // Commits progress up to now, tracing crossed checkpoints.
    void sync(Runtime& rt, bool trace_checkpoints = true) {
        if (!rt.progressing || !rt.compute) return;
        const auto crossed = advance_progress(rt.state, now() - rt.anchor, rt.compute->type);
        rt.anchor = now();
        if (!trace_checkpoints) return;
        for (const auto& ev : crossed) {
            if (ev.kind == ProgressEvent::Kind::checkpoint_reached) {
                record(TraceKind::CheckpointReached, rt.state.id, rt.compute->type, rt.compute->index, {}, ev.at);
            }
        }
    }

    void start_segment(Runtime& rt) {
        rt.progressing = true;
        rt.anchor = now();
        ++rt.token;
        const auto target = next_milestone(rt.state.profile, rt.state.progress);
        const auto dt = time_to_reach(rt.state.profile, rt.compute->type, rt.state.progress, target);
        const auto kind = target.is_complete() ? EventKind::WorkloadComplete : EventKind::CheckpointReached;
        events_.schedule(now() + dt, kind, EventPayload{.tenant = rt.state.id, .token = rt.token});
    }

    void stop_segment(Runtime& rt) {
        sync(rt);
        rt.progressing = false;
        ++rt.token;
    }

    // ---- exchange ----------------------------------------------------------

    std::vector<TypeId> standing_types(const TenantId& tenant) const {
        std::vector<TypeId> out;
        for (const auto& [type, entry] : exchange_.entries()) {
            if (entry.find_bid(tenant) != nullptr) out.push_back(type);
        }
        return out;
    }

    void on_price_events(const std::vector<PriceEvent>& events) {
        std::set<TypeId> touched;
        for (const auto& ev : events) {
            record(TraceKind::PriceChange, ev.winner().value_or(""), ev.type, {}, ev.new_rate);
            touched.insert(ev.type);
        }
        for (const auto& type : touched) {
            for (const auto& inst : cache_.instances().at(type)) {
                if (inst.is_free()) continue;
                if (scenario_.engine.grace_window > Duration{}) {
                    events_.schedule(now() + scenario_.engine.grace_window, EventKind::PriceRecompute,
                                     EventPayload{.tenant = inst.tenant, .instance = inst.ref});
                } else {
                    apply_rate(inst.ref);
                }
            }
            for (auto& [id, rt] : tenants_) {
                if (!rt.arrived || !rt.state.live() || rt.price_wake_pending) continue;
                if (rt.spec->launch_table.find(type) == nullptr) continue;
                rt.price_wake_pending = true;
                events_.schedule(now(), EventKind::AgentWake,
                                 EventPayload{.tenant = id, .reason = WakeReason::price});
            }
        }
    }

    void apply_rate(const InstanceRef& ref) {
        const auto& inst = cache_.instance(ref);
        if (inst.is_free()) return;
        const auto rate = exchange_.entry(ref.type).clearing_rate();
        if (inst.rate == rate) return;
        auto& rt = tenants_.at(inst.tenant);
        close_bill(rt, ref, true, rate);
        cache_.set_rate(ref, rate);
        for (auto& h : rt.state.holdings) {
            if (h.instance == ref) h.rate = rate;
        }
        record(TraceKind::RateChange, rt.state.id, ref.type, ref.index, rate, snapshot(rt).progress);
    }

    void expire_bids(Runtime& rt) {
        const auto types = standing_types(rt.state.id);
        auto evs = exchange_.expire_tenant_bids(rt.state.id, now());
        for (const auto& type : types) record(TraceKind::BidExpired, rt.state.id, type);
        pending_price_events_.insert(pending_price_events_.end(), evs.begin(), evs.end());
    }

    void flush_price_events() {
        auto evs = std::move(pending_price_events_);
        pending_price_events_.clear();
        on_price_events(evs);
    }

    // ---- requests ----------------------------------------------------------

    void submit(Runtime& rt, const LaunchTable& table, bool migration) {
        UserRequest req;
        req.id = rt.state.id + "#" + std::to_string(++rt.request_seq);
        req.tenant = rt.state.id;
        req.payload = rt.spec->payload;
        req.launch_table = table;
        req.agent = rt.spec->agent;
        req.migration_policy = std::string(to_string(rt.policy.mode));
        req.timeout = rt.spec->timeout;
        req.resume_from = rt.state.last_checkpoint;

        std::vector<TypeId> fresh;
        for (const auto& e : table.entries) {
            if (!is_inert(e, cluster_) && !exchange_.standing_bid(rt.state.id, e.type)) fresh.push_back(e.type);
        }
        const auto id = req.id;
        auto evs = enqueue(queue_, exchange_, cluster_, rt.state.profile, std::move(req), now(), migration);
        for (const auto& type : fresh) {
            record(TraceKind::BidPosted, rt.state.id, type, {}, exchange_.standing_bid(rt.state.id, type));
        }
        rt.pending = id;
        events_.schedule(now() + rt.spec->timeout + Duration::ms(1), EventKind::Timeout,
                         EventPayload{.tenant = rt.state.id, .request = id});
        on_price_events(evs);
    }

    void settle() {
        for (;;) {
            bool progressed = false;
            for (;;) {
                auto a = scenario_.engine.head_of_line_blocking ? match_head(queue_, cache_, exchange_, now())
                                                                : match_any(queue_, cache_, exchange_, now());
                if (!a) break;
                assign(*a);
                progressed = true;
            }
            if (scenario_.engine.operator_policy == OperatorPolicy::naive) {
                std::vector<OperatorTenantView> views;
                for (auto& [id, rt] : tenants_) {
                    if (!rt.arrived) continue;
                    OperatorTenantView v;
                    v.state = &rt.state;
                    v.launch_table = &rt.spec->launch_table;
                    if (rt.state.phase == Phase::running) v.running_on = rt.compute;
                    v.has_pending_request = rt.pending.has_value();
                    views.push_back(v);
                }
                for (const auto& d : naive_operator_decide(views, cache_, cluster_)) {
                    auto& rt = tenants_.at(d.tenant);
                    record(TraceKind::Migrate, rt.state.id, d.table.entries.front().type, {}, {},
                           snapshot(rt).progress);
                    submit(rt, d.table, true);
                    progressed = true;
                }
            }
            if (!progressed) break;
        }
    }

    void apply_effects(Runtime& rt, const MigrationOutcome& outcome, const Assignment& a) {
        for (const auto& fx : outcome.billing) {
            switch (fx.action) {
                case BillingEffect::Action::release:
                    release(rt, fx.instance);
                    break;
                case BillingEffect::Action::close:
                    close_bill(rt, fx.instance, false);
                    break;
                case BillingEffect::Action::open: {
                    const auto rate = fx.instance == a.instance ? a.rate : cache_.instance(fx.instance).rate;
                    open_bill(rt.state.id, fx.instance, rate, fx.kind);
                    break;
                }
            }
        }
    }

    void assign(const Assignment& a) {
        auto& rt = tenants_.at(a.tenant);
        const auto plan = dispatch(queue_, cache_, a, rt.state.profile);
        rt.pending.reset();

        if (plan.request.migration && rt.compute && rt.state.live()) {
            const auto source = *rt.compute;
            const bool overlap = rt.policy.mode == MigrationMode::live_overlap;
            // A live transfer leaves the running segment untouched.
            if (!overlap) sync(rt);
            const auto current = snapshot(rt);
            record(TraceKind::Assignment, rt.state.id, a.instance.type, a.instance.index, a.rate, current.progress);
            const auto outcome = apply_migration(rt.state, source, a, rt.policy);
            if (rt.policy.mode == MigrationMode::checkpoint_store) {
                if (outcome.rolled_back > Progress::zero()) {
                    record(TraceKind::Rollback, rt.state.id, source.type, source.index, {}, outcome.rolled_back);
                }
                rt.progressing = false;
                ++rt.token;
                apply_effects(rt, outcome, a);
                rt.compute = a.instance;
                rt.arriving_by_migration = true;
                events_.schedule(now() + outcome.delay, EventKind::LoadComplete,
                                 EventPayload{.tenant = rt.state.id, .token = rt.token, .instance = a.instance});
            } else {
                apply_effects(rt, outcome, a);
                rt.destination = a.instance;
                if (current.rollback_free()) begin_transfer(rt);
            }
            return;
        }

        rt.state.progress = plan.resume_from;
        rt.state.last_checkpoint = plan.resume_from;
        rt.state.holdings = {Holding{a.instance, a.rate, now()}};
        rt.state.phase = Phase::loading;
        rt.compute = a.instance;
        rt.progressing = false;
        ++rt.token;
        record(TraceKind::Assignment, rt.state.id, a.instance.type, a.instance.index, a.rate, rt.state.progress);
        open_bill(rt.state.id, a.instance, a.rate, BillKind::load);
        events_.schedule(plan.ready_at, EventKind::LoadComplete,
                         EventPayload{.tenant = rt.state.id, .token = rt.token, .instance = a.instance});
    }

    void begin_transfer(Runtime& rt) {
        stop_segment(rt);
        cache_.set_draining(*rt.compute);
        events_.schedule(now() + rt.policy.load_delay, EventKind::MigrationComplete,
                         EventPayload{.tenant = rt.state.id, .token = rt.token, .instance = rt.destination});
    }

    // ---- lifecycle ---------------------------------------------------------

    void drop_pending(Runtime& rt) {
        if (!rt.pending) return;
        queue_.remove(*rt.pending);
        rt.pending.reset();
    }

    void finish(Runtime& rt) {
        stop_segment(rt);
        for (const auto& ref : holdings_of(rt.state.id)) release(rt, ref);
        drop_pending(rt);
        expire_bids(rt);
        rt.state.phase = Phase::completed;
        rt.state.holdings.clear();
        rt.compute.reset();
        rt.destination.reset();
        rt.finished_at = now();
        record(TraceKind::WorkloadComplete, rt.state.id, "", {}, {}, rt.state.progress);
        flush_price_events();
    }

    void terminate(Runtime& rt, TraceKind kind) {
        stop_segment(rt);
        rt.state.progress = rt.state.last_checkpoint;
        for (const auto& ref : holdings_of(rt.state.id)) release(rt, ref);
        drop_pending(rt);
        expire_bids(rt);
        rt.state.phase = Phase::terminated;
        rt.state.holdings.clear();
        rt.compute.reset();
        rt.destination.reset();
        rt.finished_at = now();
        record(kind, rt.state.id, "", {}, {}, rt.state.progress);
        flush_price_events();
    }

    void run_agent(Runtime& rt, WakeReason reason) {
        if (scenario_.engine.operator_policy == OperatorPolicy::naive || rt.strategy == nullptr) return;
        for (int step = 0; step < kMaxAgentSteps && rt.state.live(); ++step) {
            const auto view_state = snapshot(rt);
            std::optional<TypeId> occupied;
            if (rt.compute) occupied = rt.compute->type;
            const AgentView view{view_state,       rt.spec->launch_table, exchange_, cluster_, occupied,
                                 rt.policy,        reason,                now()};
            const auto choice = (*rt.strategy)(view);

            if (std::holds_alternative<decision::Stay>(choice)) return;
            if (const auto* rebid = std::get_if<decision::Rebid>(&choice)) {
                if (!place_bid(rt, *rebid)) return;
                continue;
            }
            if (const auto* move = std::get_if<decision::Migrate>(&choice)) {
                if (rt.pending || !rt.compute || rt.state.phase != Phase::running || move->table.entries.empty()) {
                    return;
                }
                try {
                    validate_launch_table(move->table, cluster_, rt.state.profile);
                } catch (const Error&) {
                    return;
                }
                record(TraceKind::Migrate, rt.state.id, move->table.entries.front().type, {}, {},
                       view_state.progress);
                submit(rt, move->table, true);
                // The move only makes sense now; the agent asks again at its next wake.
                settle();
                drop_pending(rt);
                return;
            }
            terminate(rt, TraceKind::Terminate);
            return;
        }
    }

    // False when nothing changed.
    bool place_bid(Runtime& rt, const decision::Rebid& rebid) {
        const auto* entry = rt.spec->launch_table.find(rebid.type);
        if (entry == nullptr || is_inert(*entry, cluster_)) return false;
        const auto base = cluster_.type(rebid.type).base_rate;
        const auto rate = std::clamp(rebid.rate, base, std::max(base, entry->max_bid));
        const auto standing = exchange_.standing_bid(rt.state.id, rebid.type);
        std::vector<PriceEvent> evs;
        if (standing) {
            if (*standing == rate) return false;
            evs = exchange_.update_bid(rt.state.id, rebid.type, rate, now());
            record(TraceKind::BidUpdated, rt.state.id, rebid.type, {}, rate);
        } else {
            evs = exchange_.post_bid(Bid{rt.state.id, rebid.type, rate, now()});
            record(TraceKind::BidPosted, rt.state.id, rebid.type, {}, rate);
        }
        on_price_events(evs);
        return true;
    }

    void ensure_background() {
        if (!sweep_scheduled_) {
            sweep_scheduled_ = true;
            events_.schedule(now() + scenario_.engine.price_sweep_period, EventKind::PriceRecompute);
        }
    }

    // ---- handlers ----------------------------------------------------------

    void handle(const SimEvent& ev) {
        switch (ev.kind) {
            case EventKind::RequestArrival: return on_arrival(ev);
            case EventKind::PriceRecompute: return on_price_recompute(ev);
            case EventKind::AgentWake: return on_wake(ev);
            case EventKind::CheckpointReached: return on_checkpoint(ev);
            case EventKind::LoadComplete: return on_load(ev);
            case EventKind::MigrationComplete: return on_migration_complete(ev);
            case EventKind::WorkloadComplete: return on_complete(ev);
            case EventKind::Timeout: return on_timeout(ev);
            case EventKind::Cancel: return on_cancel(ev);
        }
    }

    void on_arrival(const SimEvent& ev) {
        auto& rt = tenants_.at(ev.payload.tenant);
        rt.arrived = true;
        record(TraceKind::RequestArrival, rt.state.id, "", {}, {}, rt.state.progress);
        submit(rt, rt.spec->launch_table, false);
        events_.schedule(now(), EventKind::AgentWake,
                         EventPayload{.tenant = rt.state.id, .reason = WakeReason::arrival});
        if (rt.spec->cancel_at) {
            events_.schedule(std::max(*rt.spec->cancel_at, now()), EventKind::Cancel,
                             EventPayload{.tenant = rt.state.id});
        }
        ensure_background();
    }

    void on_price_recompute(const SimEvent& ev) {
        if (ev.payload.instance) {
            const auto& inst = cache_.instance(*ev.payload.instance);
            if (!inst.is_free() && inst.tenant == ev.payload.tenant) apply_rate(*ev.payload.instance);
            return;
        }
        on_price_events(exchange_.sweep(now()));
        if (any_live()) {
            events_.schedule(now() + scenario_.engine.price_sweep_period, EventKind::PriceRecompute);
        } else {
            sweep_scheduled_ = false;
        }
    }

    void on_wake(const SimEvent& ev) {
        auto& rt = tenants_.at(ev.payload.tenant);
        const auto reason = ev.payload.reason;
        if (reason == WakeReason::price) rt.price_wake_pending = false;
        if (!rt.state.live()) return;
        if (reason == WakeReason::periodic || reason == WakeReason::arrival) {
            if (reason == WakeReason::periodic || !periodic_started_.contains(rt.state.id)) {
                periodic_started_.insert(rt.state.id);
                events_.schedule(now() + scenario_.engine.agent_wake_period, EventKind::AgentWake,
                                 EventPayload{.tenant = rt.state.id, .reason = WakeReason::periodic});
            }
        }
        run_agent(rt, reason);
    }

    void on_checkpoint(const SimEvent& ev) {
        auto& rt = tenants_.at(ev.payload.tenant);
        if (ev.payload.token != rt.token || !rt.state.live()) return;
        sync(rt);
        if (rt.destination) {
            begin_transfer(rt);
            return;
        }
        start_segment(rt);
        run_agent(rt, WakeReason::checkpoint);
    }

    void on_complete(const SimEvent& ev) {
        auto& rt = tenants_.at(ev.payload.tenant);
        if (ev.payload.token != rt.token || !rt.state.live()) return;
        sync(rt);
        finish(rt);
    }

    void on_load(const SimEvent& ev) {
        auto& rt = tenants_.at(ev.payload.tenant);
        if (ev.payload.token != rt.token || !rt.state.live() || !rt.compute) return;
        const auto ref = *rt.compute;
        auto it = open_bills_.find({rt.state.id, ref});
        if (it != open_bills_.end() && it->second.kind == BillKind::load) {
            if (it->second.since < now()) {
                close_bill(rt, ref, true, std::nullopt, BillKind::compute);
            } else {
                it->second.kind = BillKind::compute;
            }
        }
        rt.state.phase = Phase::running;
        record(TraceKind::LoadComplete, rt.state.id, ref.type, ref.index, cache_.instance(ref).rate,
               rt.state.progress);
        if (rt.arriving_by_migration) {
            rt.arriving_by_migration = false;
            ++rt.migrations;
            record(TraceKind::MigrationComplete, rt.state.id, ref.type, ref.index, cache_.instance(ref).rate,
                   rt.state.progress);
        }
        start_segment(rt);
        run_agent(rt, WakeReason::load);
    }

    void on_migration_complete(const SimEvent& ev) {
        auto& rt = tenants_.at(ev.payload.tenant);
        if (ev.payload.token != rt.token || !rt.state.live() || !rt.destination || !rt.compute) return;
        const auto source = *rt.compute;
        const auto dest = *rt.destination;
        release(rt, source);
        close_bill(rt, dest, true, std::nullopt, BillKind::compute);
        rt.compute = dest;
        rt.destination.reset();
        rt.state.phase = Phase::running;
        ++rt.migrations;
        record(TraceKind::MigrationComplete, rt.state.id, dest.type, dest.index, cache_.instance(dest).rate,
               rt.state.progress);
        start_segment(rt);
        run_agent(rt, WakeReason::load);
    }

    void on_timeout(const SimEvent& ev) {
        if (queue_.find(ev.payload.request) == nullptr) return;
        std::map<TenantId, std::vector<TypeId>> standing;
        for (const auto& q : queue_.items()) standing[q.request.tenant] = standing_types(q.request.tenant);
        auto result = sweep_timeouts(queue_, exchange_, now());
        for (const auto& c : result.cancelled) {
            auto& owner = tenants_.at(c.request.tenant);
            record(TraceKind::Timeout, owner.state.id, "", {}, {}, owner.state.progress);
            owner.pending.reset();
            if (c.migration) continue;
            for (const auto& type : standing[owner.state.id]) record(TraceKind::BidExpired, owner.state.id, type);
            owner.state.phase = Phase::terminated;
            owner.finished_at = now();
        }
        on_price_events(result.price_events);
    }

    void on_cancel(const SimEvent& ev) {
        auto& rt = tenants_.at(ev.payload.tenant);
        if (!rt.state.live()) return;
        if (!rt.pending) {
            // Already running: cancelling ends the workload at its last checkpoint.
            terminate(rt, TraceKind::Cancel);
            return;
        }
        const auto* queued = queue_.find(*rt.pending);
        const bool migration = queued != nullptr && queued->migration;
        if (migration) {
            terminate(rt, TraceKind::Cancel);
            return;
        }
        const auto types = standing_types(rt.state.id);
        auto result = cancel_request(queue_, exchange_, *rt.pending, now());
        rt.pending.reset();
        for (const auto& type : types) record(TraceKind::BidExpired, rt.state.id, type);
        rt.state.phase = Phase::terminated;
        rt.finished_at = now();
        record(TraceKind::Cancel, rt.state.id, "", {}, {}, rt.state.progress);
        on_price_events(result.price_events);
    }

    const Scenario& scenario_;
    FunctionalCluster cluster_;
    ExchangeTable exchange_;
    AvailabilityCache cache_;
    RequestQueue queue_;
    EventQueue events_;
    BillingLedger ledger_;
    Trace trace_;
    std::map<TenantId, Runtime> tenants_;
    std::map<std::pair<TenantId, InstanceRef>, OpenBill> open_bills_;
    std::vector<PriceEvent> pending_price_events_;
    std::set<TenantId> periodic_started_;
    bool sweep_scheduled_ = false;
};

}  // namespace

RunResult run(const Scenario& scenario, SimTime until, const AgentRegistry& registry) {
    auto diagnostics = validate_scenario(scenario, registry);
    if (!diagnostics.empty()) throw ScenarioError(std::move(diagnostics));
    Simulation sim(scenario, registry);
    return sim.run(until);
}

}  // namespace laissez
