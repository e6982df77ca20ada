#include "doctest.h"

#include "laissez/simulation.hpp"
#include "scenario_gen.hpp"
#include "support.hpp"
#include "trace_checks.hpp"

#include <random>
#include <sstream>

using namespace laissez;

namespace {

struct Step {
    std::int64_t ms;
    TraceKind kind;
    TenantId tenant;
    TypeId accel;
    std::string rate;

    bool operator==(const Step&) const = default;
};

std::ostream& operator<<(std::ostream& os, const Step& s) {
    return os << s.ms << ' ' << to_string(s.kind) << ' ' << s.tenant << ' ' << s.accel << ' ' << s.rate;
}

std::vector<Step> milestones(const Trace& trace) {
    static const std::set<TraceKind> keep{TraceKind::Assignment, TraceKind::RateChange,        TraceKind::BidUpdated,
                                          TraceKind::Migrate,    TraceKind::MigrationComplete, TraceKind::WorkloadComplete};
    std::vector<Step> out;
    for (const auto& r : trace.records) {
        if (!keep.contains(r.kind)) continue;
        out.push_back({r.time.ms(), r.kind, r.tenant, r.accel, r.rate ? to_string(*r.rate) : ""});
    }
    return out;
}

const TraceRecord* first(const Trace& trace, TraceKind kind, const TenantId& tenant) {
    for (const auto& r : trace.records) {
        if (r.kind == kind && r.tenant == tenant) return &r;
    }
    return nullptr;
}

std::size_t count(const Trace& trace, TraceKind kind, const TenantId& tenant = {}) {
    return static_cast<std::size_t>(std::count_if(trace.records.begin(), trace.records.end(), [&](const TraceRecord& r) {
        return r.kind == kind && (tenant.empty() || r.tenant == tenant);
    }));
}

}  // namespace

TEST_SUITE("simulation") {
    TEST_CASE("golden negotiation timeline") {
        const auto result = run(test::bundled("laissez"));
        using K = TraceKind;
        const std::vector<Step> expect{
            {0, K::Assignment, "B", "A10", "0.606000"},
            {300'000, K::RateChange, "B", "A10", "0.687000"},
            {300'000, K::Assignment, "A", "Trainium", "0.804000"},
            {419'000, K::BidUpdated, "B", "A10", "0.652000"},
            {419'000, K::RateChange, "B", "A10", "0.652000"},
            {419'000, K::Migrate, "B", "L4", ""},
            {419'000, K::Assignment, "B", "L4", "0.469000"},
            {424'000, K::MigrationComplete, "B", "L4", "0.469000"},
            {575'000, K::Migrate, "A", "A10", ""},
            {575'000, K::Assignment, "A", "A10", "0.652000"},
            {580'000, K::MigrationComplete, "A", "A10", "0.652000"},
            {1'000'000, K::WorkloadComplete, "B", "", ""},
            {1'000'000, K::RateChange, "A", "A10", "0.606000"},
            {1'525'000, K::WorkloadComplete, "A", "", ""},
        };
        CHECK(milestones(result.trace) == expect);
        CHECK(result.quiescent);
        CHECK(result.tenants.at("A").state.phase == Phase::completed);
        CHECK(result.tenants.at("B").state.phase == Phase::completed);
        CHECK(result.tenants.at("A").migrations == 1);
        CHECK(result.tenants.at("B").migrations == 1);
        CHECK(result.ledger.total("A") == test::money("0.226765"));
        CHECK(result.end_time == SimTime::at_ms(1'525'000));
        const auto* head = &result.trace.records.front();
        CHECK(head->kind == TraceKind::RequestArrival);
        CHECK(head->tenant == "B");
        CHECK(head->time == SimTime{});
    }

    TEST_CASE("golden run has no lost work") {
        const auto result = run(test::bundled("laissez"));
        CHECK(count(result.trace, TraceKind::Rollback) == 0);
    }

    TEST_CASE("empty scenario") {
        Scenario s;
        s.name = "empty";
        s.accelerators = test::golden_types();
        const auto result = run(s);
        CHECK(result.trace.records.empty());
        CHECK(result.ledger.entries().empty());
        CHECK(result.quiescent);
        CHECK(result.trace.header.scenario == "empty");
        CHECK(result.trace.header.inventory.size() == 3);
    }

    TEST_CASE("runs are deterministic") {
        for (const auto& b : bundled_scenarios()) {
            const auto s = test::bundled(std::string(b.name));
            CHECK_MESSAGE(run(s).trace == run(s).trace, b.name);
        }
    }

    TEST_CASE("bundled scenarios satisfy the run invariants") {
        for (const auto& b : bundled_scenarios()) {
            const auto s = test::bundled(std::string(b.name));
            const auto result = run(s);
            const auto bad = test::check_run(s, result);
            CHECK_MESSAGE(bad.empty(), b.name << ": " << (bad.empty() ? "" : bad.front()));
            CHECK(result.quiescent);
        }
    }

    TEST_CASE("random scenarios satisfy the run invariants") {
        std::mt19937_64 rng(20240611);
        for (int i = 0; i < 300; ++i) {
            const auto s = test::random_scenario(rng);
            REQUIRE(validate_scenario(s).empty());
            const auto result = run(s);
            const bool graceless = s.engine.grace_window == Duration{};
            const auto bad = test::check_run(s, result, graceless);
            INFO("case " << i << ": " << serialize_scenario(s));
            REQUIRE_MESSAGE(bad.empty(), bad.front());
            REQUIRE(result.quiescent);
            if (i % 5 == 0) REQUIRE(run(s).trace == result.trace);
            if (s.engine.operator_policy == OperatorPolicy::none) {
                // Economic agents only move at checkpoints.
                bool cancelled = false;
                for (const auto& t : s.tenants) cancelled |= t.cancel_at.has_value();
                for (const auto& r : result.trace.records) {
                    if (r.kind == TraceKind::Rollback) REQUIRE(cancelled);
                }
            }
        }
    }

    TEST_CASE("stopping early reports the run as unfinished") {
        const auto s = test::bundled("laissez");
        const auto result = run(s, SimTime::at_ms(600'000));
        CHECK_FALSE(result.quiescent);
        CHECK(result.end_time == SimTime::at_ms(600'000));
        for (const auto& r : result.trace.records) CHECK(r.time <= SimTime::at_ms(600'000));
        // Open intervals are closed at the stop time and still reconcile.
        CHECK(test::check_run(s, result).empty());
        const auto full = run(s);
        CHECK(result.ledger.total("A") < full.ledger.total("A"));
        CHECK(result.tenants.at("A").state.live());
        // A is 20 s into its A10 epoch: 0.25 + 20 s / 0.35 h.
        CHECK(result.tenants.at("A").state.progress.count() == 250'000'000 + 15'873'015);
    }

    TEST_CASE("grace window delays rate changes for running tenants") {
        auto s = test::bundled("laissez");
        s.engine.grace_window = Duration::seconds(30);
        const auto result = run(s);
        const auto* change = first(result.trace, TraceKind::RateChange, "B");
        REQUIRE(change != nullptr);
        CHECK(change->time == SimTime::at_ms(330'000));
        CHECK(*change->rate == test::rate("0.687"));
        CHECK(test::check_run(s, result, false).empty());
    }

    TEST_CASE("a queued request times out and its bids expire") {
        auto hog = test::tenant("H", test::app_b(), {{"A10", test::rate("0.606")}});
        auto late = test::tenant("W", test::app_b(), {{"A10", test::rate("0.606")}}, 10);
        late.timeout = Duration::seconds(60);
        auto s = test::solo(hog);
        s.tenants.push_back(late);
        const auto result = run(s);
        const auto* timeout = first(result.trace, TraceKind::Timeout, "W");
        REQUIRE(timeout != nullptr);
        CHECK(timeout->time > test::at_s(70));
        CHECK(timeout->time <= test::at_s(71));
        CHECK(count(result.trace, TraceKind::BidExpired, "W") == 1);
        CHECK(count(result.trace, TraceKind::Assignment, "W") == 0);
        CHECK(result.tenants.at("W").state.phase == Phase::terminated);
        CHECK(result.ledger.total("W") == Money{});
        CHECK(test::check_run(s, result).empty());
    }

    TEST_CASE("cancelling a running tenant releases its instance") {
        auto t = test::tenant("A", test::app_a(), {{"L4", test::rate("0.469")}});
        t.cancel_at = test::at_s(600);
        const auto s = test::solo(t);
        const auto result = run(s);
        const auto* cancel = first(result.trace, TraceKind::Cancel, "A");
        REQUIRE(cancel != nullptr);
        CHECK(cancel->time == test::at_s(600));
        CHECK(count(result.trace, TraceKind::Release, "A") == 1);
        const auto& outcome = result.tenants.at("A");
        CHECK(outcome.state.phase == Phase::terminated);
        CHECK(outcome.state.holdings.empty());
        CHECK(outcome.state.progress == outcome.state.last_checkpoint);
        // Five seconds of loading, then compute, each rounded on its own.
        CHECK(result.ledger.total("A") ==
              test::rate("0.469") * Duration::seconds(5) + test::rate("0.469") * Duration::seconds(595));
        CHECK(test::check_run(s, result).empty());
    }

    TEST_CASE("cancelling before dispatch withdraws the bids") {
        auto hog = test::tenant("H", test::app_b(), {{"A10", test::rate("0.606")}});
        auto late = test::tenant("W", test::app_b(), {{"A10", test::rate("0.606")}}, 10);
        late.cancel_at = test::at_s(20);
        auto s = test::solo(hog);
        s.tenants.push_back(late);
        const auto result = run(s);
        CHECK(first(result.trace, TraceKind::Cancel, "W")->time == test::at_s(20));
        CHECK(count(result.trace, TraceKind::BidExpired, "W") == 1);
        CHECK(count(result.trace, TraceKind::Timeout, "W") == 0);
    }

    TEST_CASE("live overlap pays for both instances until the move lands") {
        auto s = test::bundled("laissez");
        for (auto& t : s.tenants) {
            if (t.id == "A") t.migration = MigrationMode::live_overlap;
        }
        const auto result = run(s);
        CHECK(test::check_run(s, result).empty());
        // A claims the A10 as soon as B leaves, keeps computing on Trainium up
        // to its checkpoint, then transfers for the load delay.
        std::map<TypeId, std::pair<SimTime, SimTime>> span;
        for (const auto& e : result.ledger.entries()) {
            if (e.tenant != "A" || e.kind != BillKind::overlap) continue;
            auto [it, fresh] = span.try_emplace(e.instance.type, e.start, e.end);
            if (!fresh) {
                it->second.first = std::min(it->second.first, e.start);
                it->second.second = std::max(it->second.second, e.end);
            }
        }
        REQUIRE(span.size() == 2);
        CHECK(span.at("A10") == std::make_pair(test::at_s(419), test::at_s(580)));
        CHECK(span.at("Trainium") == std::make_pair(test::at_s(419), test::at_s(580)));
        CHECK(count(result.trace, TraceKind::Rollback, "A") == 0);
        const auto* done = first(result.trace, TraceKind::MigrationComplete, "A");
        REQUIRE(done != nullptr);
        CHECK(done->time == test::at_s(580));
        CHECK(*done->progress == test::fraction("0.25"));
        const auto plain = run(test::bundled("laissez"));
        CHECK(result.tenants.at("A").finished_at == plain.tenants.at("A").finished_at);
        CHECK(result.ledger.total("A") > plain.ledger.total("A"));
    }

    TEST_CASE("the naive operator loses partial epochs") {
        const auto result = run(test::bundled("naive-migration"));
        REQUIRE(count(result.trace, TraceKind::Rollback, "A") == 1);
        const auto* rollback = first(result.trace, TraceKind::Rollback, "A");
        CHECK(*rollback->progress == Progress::nanos(37'581'699));
        CHECK(result.tenants.at("A").migrations == 1);
    }

    TEST_CASE("custom strategies plug in and off-boundary moves cost work") {
        // Leaves the first assignment as soon as any faster type frees up.
        AgentRegistry registry = AgentRegistry::with_builtins();
        registry.add("eager", [](const AgentView& v) -> AgentDecision {
            if (!v.occupied || v.state.phase != Phase::running) return decision::Stay{};
            const auto& first_choice = v.launch_table.entries.front().type;
            if (*v.occupied == first_choice || !v.exchange.is_entitled(v.state.id, first_choice)) return decision::Stay{};
            return decision::Migrate{LaunchTable{{v.launch_table.entries.front()}}};
        });
        auto build = [](const std::string& agent) {
            auto b = test::tenant("B", test::app_b(), {{"A10", test::rate("0.606")}});
            auto a = test::tenant("A", test::app_a(), {{"A10", test::rate("0.606")}, {"L4", test::rate("0.469")}}, 300);
            a.agent = agent;
            auto s = test::solo(b);
            s.tenants.push_back(a);
            return s;
        };
        const auto eager_s = build("eager");
        const auto eager = run(eager_s, kForever, registry);
        const auto patient = run(build("break-even"), kForever, registry);
        CHECK(test::check_run(eager_s, eager).empty());
        const auto* rollback = first(eager.trace, TraceKind::Rollback, "A");
        REQUIRE(rollback != nullptr);
        CHECK(rollback->progress->count() > 0);
        CHECK(count(patient.trace, TraceKind::Rollback) == 0);
        CHECK(eager.tenants.at("A").migrations == 1);
    }

    TEST_CASE("strict FIFO holds back later requests") {
        auto hog = test::tenant("H", test::app_b(), {{"A10", test::rate("0.606")}});
        auto blocked = test::tenant("X", test::app_b(), {{"A10", test::rate("0.606")}}, 10);
        auto small = test::tenant("Y", test::app_a(), {{"Trainium", test::rate("0.804")}}, 20);
        auto s = test::solo(hog);
        s.tenants.push_back(blocked);
        s.tenants.push_back(small);
        s.engine.head_of_line_blocking = true;
        const auto strict = run(s);
        s.engine.head_of_line_blocking = false;
        const auto loose = run(s);
        CHECK(first(strict.trace, TraceKind::Assignment, "Y")->time > test::at_s(20));
        CHECK(first(loose.trace, TraceKind::Assignment, "Y")->time == test::at_s(20));
    }

    TEST_CASE("invalid scenarios are rejected before running") {
        auto t = test::tenant("A", test::app_a(), {{"H100", test::rate("2")}});
        CHECK_THROWS_AS(run(test::solo(t)), ScenarioError);
    }
}
