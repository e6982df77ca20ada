#include "doctest.h"

#include "laissez/agents.hpp"
#include "laissez/error.hpp"
#include "support.hpp"

#include <random>

using namespace laissez;

namespace {

TenantState state_of(const char* id, WorkloadProfile profile, Phase phase = Phase::running) {
    TenantState s;
    s.id = id;
    s.profile = std::move(profile);
    s.phase = phase;
    return s;
}

LaunchTable table_a() { return {{{"A10", test::rate("0.687")}, {"Trainium", test::rate("0.804")}}}; }
LaunchTable table_b() { return {{{"A10", test::rate("0.762")}, {"L4", test::rate("0.469")}}}; }

void post_table(ExchangeTable& x, const TenantId& tenant, const LaunchTable& table, SimTime at = {}) {
    for (const auto& e : table.entries) x.post_bid(Bid{tenant, e.type, e.max_bid, at});
}

// Applies rebids until the strategy asks for something else.
AgentDecision settle(const AgentStrategy& fn, TenantState& state, const LaunchTable& table, ExchangeTable& x,
                     const FunctionalCluster& cluster, std::optional<TypeId> occupied, WakeReason reason,
                     std::vector<decision::Rebid>* rebids = nullptr) {
    for (int i = 0; i < 10; ++i) {
        const AgentView view{state, table, x, cluster, occupied, MigrationPolicy{}, reason, SimTime{}};
        auto d = fn(view);
        const auto* r = std::get_if<decision::Rebid>(&d);
        if (r == nullptr) return d;
        if (rebids) rebids->push_back(*r);
        if (x.standing_bid(state.id, r->type)) {
            x.update_bid(state.id, r->type, r->rate, SimTime{});
        } else {
            x.post_bid(Bid{state.id, r->type, r->rate, SimTime{}});
        }
    }
    FAIL("agent never settled");
    return decision::Stay{};
}

}  // namespace

TEST_SUITE("progress") {
    TEST_CASE("A on Trainium for 0.075 h reaches its first checkpoint") {
        auto s = state_of("A", test::app_a());
        auto evs = advance_progress(s, test::hours("0.075"), "Trainium");
        REQUIRE(evs.size() == 1);
        CHECK(evs[0].kind == ProgressEvent::Kind::checkpoint_reached);
        CHECK(evs[0].at == test::fraction("0.25"));
        CHECK(s.progress == test::fraction("0.25"));
        CHECK(s.last_checkpoint == test::fraction("0.25"));
    }

    TEST_CASE("zero elapsed time changes nothing") {
        auto s = state_of("A", test::app_a());
        s.progress = test::fraction("0.1");
        CHECK(advance_progress(s, Duration{}, "A10").empty());
        CHECK(s.progress == test::fraction("0.1"));
    }

    TEST_CASE("completion is capped at exactly one") {
        auto s = state_of("A", test::app_a());
        s.progress = test::fraction("0.9");
        s.last_checkpoint = test::fraction("0.75");
        auto evs = advance_progress(s, Duration::minutes(600), "L4");
        REQUIRE_FALSE(evs.empty());
        CHECK(evs.back().kind == ProgressEvent::Kind::workload_complete);
        CHECK(s.progress == Progress::complete());
    }

    TEST_CASE("crossing several checkpoints reports each") {
        auto s = state_of("A", test::app_a());
        auto evs = advance_progress(s, test::hours("0.2"), "Trainium");
        REQUIRE(evs.size() == 2);
        CHECK(evs[0].at == test::fraction("0.25"));
        CHECK(evs[1].at == test::fraction("0.5"));
        CHECK(s.last_checkpoint == test::fraction("0.5"));
        CHECK(s.progress.count() > test::fraction("0.66").count());
    }

    TEST_CASE("next_milestone and time_to_reach") {
        const auto p = test::app_a();
        CHECK(next_milestone(p, Progress::zero()) == test::fraction("0.25"));
        CHECK(next_milestone(p, test::fraction("0.25")) == test::fraction("0.5"));
        CHECK(next_milestone(p, test::fraction("0.8")) == Progress::complete());
        CHECK(time_to_reach(p, "A10", Progress::zero(), test::fraction("0.25")) == Duration::ms(315'000));
        CHECK(time_to_reach(p, "A10", test::fraction("0.5"), test::fraction("0.25")) == Duration{});
        auto thirds = p;
        thirds.checkpoint_interval = Progress::nanos(333'333'333);
        CHECK(next_milestone(thirds, Progress::nanos(666'666'666)) == Progress::complete());
    }

    TEST_CASE("progress from milestone timing lands exactly on the milestone") {
        std::mt19937_64 rng(1);
        auto p = test::app_a();
        for (int i = 0; i < 2'000; ++i) {
            p.exec_time["A10"] = Duration::ms(std::uniform_int_distribution<std::int64_t>(1'000, 10'000'000)(rng));
            const int parts = std::uniform_int_distribution<int>(1, 12)(rng);
            p.checkpoint_interval = Progress::nanos(Progress::kOne / parts);
            auto s = state_of("A", p);
            int steps = 0;
            while (!s.progress.is_complete()) {
                const auto target = next_milestone(p, s.progress);
                const auto dt = time_to_reach(p, "A10", s.progress, target);
                const auto before = s.progress;
                advance_progress(s, dt, "A10");
                REQUIRE(s.progress == target);
                REQUIRE(s.progress >= before);
                REQUIRE(++steps <= parts + 1);
            }
        }
    }

    TEST_CASE("progress never decreases while running") {
        std::mt19937_64 rng(2);
        auto s = state_of("A", test::app_a());
        Progress prev;
        while (!s.progress.is_complete()) {
            advance_progress(s, Duration::ms(std::uniform_int_distribution<std::int64_t>(0, 90'000)(rng)), "L4");
            REQUIRE(s.progress >= prev);
            REQUIRE(s.last_checkpoint <= s.progress);
            prev = s.progress;
        }
    }
}

TEST_SUITE("migration") {
    TEST_CASE("checkpoint-store rolls back and loads for the delay") {
        auto s = state_of("A", test::app_a());
        s.progress = test::fraction("0.3");
        s.last_checkpoint = test::fraction("0.25");
        s.holdings = {{{"Trainium", 0}, test::rate("0.804"), SimTime{}}};
        const Assignment to{"A#2", "A", {"A10", 0}, test::rate("0.652"), test::at_s(575)};
        const MigrationPolicy policy{MigrationMode::checkpoint_store, Duration::seconds(5), Money{}};
        auto out = apply_migration(s, {"Trainium", 0}, to, policy);
        CHECK(out.delay == Duration::seconds(5));
        CHECK(out.rolled_back == test::fraction("0.05"));
        CHECK(s.progress == test::fraction("0.25"));
        CHECK(s.phase == Phase::loading);
        REQUIRE(s.holdings.size() == 1);
        CHECK(s.holdings[0].instance == InstanceRef{"A10", 0});
        REQUIRE(out.billing.size() == 2);
        CHECK(out.billing[0].action == BillingEffect::Action::release);
        CHECK(out.billing[1] == BillingEffect{BillingEffect::Action::open, {"A10", 0}, BillKind::load});
    }

    TEST_CASE("moving onto the same instance is a no-op") {
        auto s = state_of("A", test::app_a());
        s.progress = test::fraction("0.3");
        const auto before = s;
        auto out = apply_migration(s, {"A10", 0}, {"A#2", "A", {"A10", 0}, test::rate("0.6"), {}}, MigrationPolicy{});
        CHECK(out.no_op);
        CHECK(out.delay == Duration{});
        CHECK(out.billing.empty());
        CHECK(s.progress == before.progress);
    }

    TEST_CASE("live-overlap keeps both instances billed") {
        auto s = state_of("A", test::app_a());
        s.progress = test::fraction("0.3");
        s.holdings = {{{"Trainium", 0}, test::rate("0.804"), SimTime{}}};
        const MigrationPolicy policy{MigrationMode::live_overlap, Duration::seconds(5), Money{}};
        auto out = apply_migration(s, {"Trainium", 0}, {"A#2", "A", {"A10", 0}, test::rate("0.652"), {}}, policy);
        CHECK(s.holdings.size() == 2);
        CHECK(s.phase == Phase::migrating);
        CHECK(s.progress == test::fraction("0.3"));
        CHECK(out.rolled_back == Progress::zero());
        const auto opens = std::count_if(out.billing.begin(), out.billing.end(), [](const BillingEffect& e) {
            return e.action == BillingEffect::Action::open && e.kind == BillKind::overlap;
        });
        CHECK(opens == 2);
    }

    TEST_CASE("incompatible destination is refused") {
        auto s = state_of("B", test::app_b());
        CHECK_THROWS_AS(apply_migration(s, {"A10", 0}, {"B#2", "B", {"Trainium", 0}, test::rate("0.9"), {}},
                                        MigrationPolicy{}),
                        Error);
    }

    TEST_CASE("mode ids") {
        CHECK(migration_mode_from_string("live-overlap") == MigrationMode::live_overlap);
        CHECK(to_string(MigrationMode::checkpoint_store) == "checkpoint-store");
        CHECK_FALSE(migration_mode_from_string("teleport").has_value());
    }
}

TEST_SUITE("agents") {
    TEST_CASE("checkpoint-aware B at arrival bids 0.762 for the A10") {
        const auto cluster = test::golden_cluster();
        ExchangeTable x(cluster);
        auto b = state_of("B", test::app_b(), Phase::queued);
        const AgentView view{b, table_b(), x, cluster, std::nullopt, MigrationPolicy{}, WakeReason::arrival, {}};
        const auto d = checkpoint_aware_agent_decide(view);
        REQUIRE(std::holds_alternative<decision::Rebid>(d));
        CHECK(std::get<decision::Rebid>(d) == decision::Rebid{"A10", test::rate("0.762")});
    }

    TEST_CASE("checkpoint-aware B at its first checkpoint rebids 0.652, loses, and moves to L4") {
        const auto cluster = test::golden_cluster();
        ExchangeTable x(cluster);
        post_table(x, "B", table_b());
        post_table(x, "A", table_a(), test::at_s(300));
        REQUIRE(x.entry("A10").winner() == "B");

        auto b = state_of("B", test::app_b());
        b.progress = test::fraction("0.5");
        b.last_checkpoint = test::fraction("0.5");
        std::vector<decision::Rebid> rebids;
        auto d = settle(checkpoint_aware_agent_decide, b, table_b(), x, cluster, TypeId("A10"), WakeReason::checkpoint,
                        &rebids);
        REQUIRE(rebids.size() == 1);
        CHECK(rebids[0] == decision::Rebid{"A10", test::rate("0.652")});
        CHECK(x.entry("A10").winner() == "A");
        CHECK(x.entry("A10").clearing_rate() == test::rate("0.652"));
        REQUIRE(std::holds_alternative<decision::Migrate>(d));
        CHECK(std::get<decision::Migrate>(d).table.entries.front().type == "L4");
    }

    TEST_CASE("checkpoint-aware off-boundary defends with the surcharge") {
        const auto cluster = test::golden_cluster();
        ExchangeTable x(cluster);
        post_table(x, "B", table_b());
        auto b = state_of("B", test::app_b());
        b.progress = test::fraction("0.5");
        b.last_checkpoint = test::fraction("0.5");
        const auto tb = table_b();
        const AgentView at{b, tb, x, cluster, TypeId("A10"), MigrationPolicy{}, WakeReason::checkpoint, {}};
        const AgentView off{b, tb, x, cluster, TypeId("A10"), MigrationPolicy{}, WakeReason::periodic, {}};
        const auto low = desired_bid(at, tb.entries[0], Money{});
        const auto high = desired_bid(off, tb.entries[0], b.profile.restart_surcharge);
        CHECK(low == test::rate("0.652"));
        CHECK(high >= low);
    }

    TEST_CASE("checkpoint-aware B alone on its first choice stays") {
        const auto cluster = test::golden_cluster();
        ExchangeTable x(cluster);
        const LaunchTable cheap_first{{{"L4", test::rate("0.469")}, {"A10", test::rate("0.762")}}};
        post_table(x, "B", cheap_first);
        auto b = state_of("B", test::app_b());
        b.progress = test::fraction("0.2");
        auto d = settle(checkpoint_aware_agent_decide, b, cheap_first, x, cluster, TypeId("L4"), WakeReason::periodic);
        CHECK(std::holds_alternative<decision::Stay>(d));
    }

    TEST_CASE("break-even A stays mid-epoch even with the A10 won") {
        const auto cluster = test::golden_cluster();
        ExchangeTable x(cluster);
        post_table(x, "A", table_a());
        auto a = state_of("A", test::app_a());
        a.progress = test::fraction("0.1");
        auto d = settle(break_even_agent_decide, a, table_a(), x, cluster, TypeId("Trainium"), WakeReason::price);
        CHECK(x.is_entitled("A", "A10"));
        CHECK(std::holds_alternative<decision::Stay>(d));
    }

    TEST_CASE("break-even A migrates to the A10 at a checkpoint") {
        const auto cluster = test::golden_cluster();
        ExchangeTable x(cluster);
        post_table(x, "A", table_a());
        auto a = state_of("A", test::app_a());
        a.progress = test::fraction("0.25");
        a.last_checkpoint = test::fraction("0.25");
        auto d = settle(break_even_agent_decide, a, table_a(), x, cluster, TypeId("Trainium"), WakeReason::checkpoint);
        REQUIRE(std::holds_alternative<decision::Migrate>(d));
        CHECK(std::get<decision::Migrate>(d).table.entries.front().type == "A10");
    }

    TEST_CASE("break-even bid for the A10 is capped by the launch table") {
        const auto cluster = test::golden_cluster();
        ExchangeTable x(cluster);
        auto a = state_of("A", test::app_a(), Phase::queued);
        const AgentView view{a, table_a(), x, cluster, std::nullopt, MigrationPolicy{}, WakeReason::arrival, {}};
        CHECK(desired_bid(view, table_a().entries[0], Money{}) == test::rate("0.687"));
        LaunchTable roomy{{{"A10", test::rate("2")}, {"Trainium", test::rate("0.804")}}};
        const AgentView uncapped{a, roomy, x, cluster, std::nullopt, MigrationPolicy{}, WakeReason::arrival, {}};
        CHECK(desired_bid(uncapped, roomy.entries[0], Money{}) == test::rate("0.689"));
    }

    TEST_CASE("a settled agent stays on the next wake") {
        const auto cluster = test::golden_cluster();
        ExchangeTable x(cluster);
        post_table(x, "A", table_a());
        auto a = state_of("A", test::app_a());
        a.progress = test::fraction("0.4");
        a.last_checkpoint = test::fraction("0.25");
        settle(break_even_agent_decide, a, table_a(), x, cluster, TypeId("A10"), WakeReason::periodic);
        const AgentView again{a, table_a(), x, cluster, TypeId("A10"), MigrationPolicy{}, WakeReason::periodic, {}};
        CHECK(std::holds_alternative<decision::Stay>(break_even_agent_decide(again)));
    }

    TEST_CASE("priced out with nowhere to go terminates") {
        const auto cluster = test::golden_cluster();
        ExchangeTable x(cluster);
        const LaunchTable only{{{"A10", test::rate("0.65")}}};
        post_table(x, "A", only);
        x.post_bid(Bid{"Z", "A10", test::rate("0.9"), test::at_s(1)});
        x.post_bid(Bid{"Y", "A10", test::rate("0.8"), test::at_s(1)});
        auto a = state_of("A", test::app_a());
        a.progress = test::fraction("0.5");
        a.last_checkpoint = test::fraction("0.5");
        auto d = settle(break_even_agent_decide, a, only, x, cluster, TypeId("A10"), WakeReason::price);
        CHECK(std::holds_alternative<decision::Terminate>(d));
    }

    TEST_CASE("static agent never acts") {
        const auto cluster = test::golden_cluster();
        ExchangeTable x(cluster);
        auto a = state_of("A", test::app_a());
        const AgentView view{a, table_a(), x, cluster, TypeId("L4"), MigrationPolicy{}, WakeReason::price, {}};
        CHECK(std::holds_alternative<decision::Stay>(static_agent_decide(view)));
    }

    TEST_CASE("desired bids stay within [base, max bid]") {
        std::mt19937_64 rng(17);
        const auto cluster = test::golden_cluster();
        for (int i = 0; i < 3'000; ++i) {
            ExchangeTable x(cluster);
            LaunchTable t;
            for (const char* type : {"A10", "L4", "Trainium"}) {
                if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) continue;
                const auto max = std::uniform_int_distribution<std::int64_t>(300, 1'500)(rng) * 1000;
                t.entries.push_back({type, Rate::micros_per_hour(max)});
            }
            if (t.entries.empty()) continue;
            for (int j = 0; j < 3; ++j) {
                const char* type = j == 0 ? "A10" : j == 1 ? "L4" : "Trainium";
                const auto r = cluster.type(type).base_rate.count() + std::uniform_int_distribution<std::int64_t>(0, 400)(rng) * 1000;
                x.post_bid(Bid{"rival", type, Rate::micros_per_hour(r), {}});
            }
            auto a = state_of("A", test::app_a());
            a.progress = Progress::nanos(std::uniform_int_distribution<std::int64_t>(0, Progress::kOne - 1)(rng));
            const AgentView view{a, t, x, cluster, std::nullopt, MigrationPolicy{}, WakeReason::periodic, {}};
            for (const auto& e : t.entries) {
                if (is_inert(e, cluster)) continue;
                const auto surcharge = Money::micros(std::uniform_int_distribution<std::int64_t>(0, 50'000)(rng));
                const auto bid = desired_bid(view, e, surcharge);
                REQUIRE(bid <= e.max_bid);
                REQUIRE(bid >= cluster.type(e.type).base_rate);
                REQUIRE(desired_bid(view, e, Money{}) <= bid);
            }
        }
    }

    TEST_CASE("registry") {
        auto r = AgentRegistry::with_builtins();
        CHECK(r.names() == std::vector<std::string>{"break-even", "checkpoint-aware", "static"});
        CHECK(r.find("nope") == nullptr);
        r.add("always-stay", [](const AgentView&) -> AgentDecision { return decision::Stay{}; });
        CHECK(r.find("always-stay") != nullptr);
    }
}

TEST_SUITE("naive operator") {
    TEST_CASE("moves A to a freed A10 mid-epoch") {
        const auto cluster = test::golden_cluster();
        AvailabilityCache cache(cluster);
        auto a = state_of("A", test::app_a());
        a.progress = test::fraction("0.2876");
        a.last_checkpoint = test::fraction("0.25");
        const LaunchTable t{{{"A10", test::rate("0.606")}, {"L4", test::rate("0.469")}}};
        OperatorTenantView v{&a, &t, InstanceRef{"L4", 0}, false};
        auto out = naive_operator_decide({v}, cache, cluster);
        REQUIRE(out.size() == 1);
        CHECK(out[0].tenant == "A");
        CHECK(out[0].table.entries.front().type == "A10");

        // The move itself discards the partial epoch.
        a.holdings = {{{"L4", 0}, test::rate("0.469"), {}}};
        auto moved = apply_migration(a, {"L4", 0}, {"A#2", "A", {"A10", 0}, test::rate("0.606"), {}}, MigrationPolicy{});
        CHECK(moved.rolled_back == Progress::nanos(37'600'000));
    }

    TEST_CASE("no faster free type means no directive") {
        const auto cluster = test::golden_cluster();
        AvailabilityCache cache(cluster);
        cache.allocate({"A10", 0}, "B", test::rate("0.606"), {});
        auto a = state_of("A", test::app_a());
        const LaunchTable t{{{"A10", test::rate("0.606")}, {"L4", test::rate("0.469")}}};
        CHECK(naive_operator_decide({{&a, &t, InstanceRef{"L4", 0}, false}}, cache, cluster).empty());
        // Already on the fastest listed type.
        AvailabilityCache empty(cluster);
        CHECK(naive_operator_decide({{&a, &t, InstanceRef{"A10", 0}, false}}, empty, cluster).empty());
        // A pending request blocks a second directive.
        CHECK(naive_operator_decide({{&a, &t, InstanceRef{"L4", 0}, true}}, empty, cluster).empty());
    }

    TEST_CASE("at a checkpoint the naive move loses nothing") {
        const auto cluster = test::golden_cluster();
        AvailabilityCache cache(cluster);
        auto a = state_of("A", test::app_a());
        a.progress = test::fraction("0.25");
        a.last_checkpoint = test::fraction("0.25");
        a.holdings = {{{"L4", 0}, test::rate("0.469"), {}}};
        const LaunchTable t{{{"A10", test::rate("0.606")}, {"L4", test::rate("0.469")}}};
        REQUIRE(naive_operator_decide({{&a, &t, InstanceRef{"L4", 0}, false}}, cache, cluster).size() == 1);
        auto moved = apply_migration(a, {"L4", 0}, {"A#2", "A", {"A10", 0}, test::rate("0.606"), {}}, MigrationPolicy{});
        CHECK(moved.rolled_back == Progress::zero());
    }
}
