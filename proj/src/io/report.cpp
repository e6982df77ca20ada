#include "laissez/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <set>

namespace laissez {

RunSummary summarize(const Trace& trace) {
    RunSummary out;
    out.scenario = trace.header.scenario;
    out.scenario_hash = trace.header.scenario_hash;

    std::map<TenantId, TenantSummary> tenants;
    std::map<std::pair<TenantId, InstanceRef>, SimTime> open;
    std::map<InstanceRef, Duration> busy;
    // Interval endpoints per instance, so two tenants' overlap is not double counted.
    std::map<InstanceRef, std::vector<std::pair<SimTime, SimTime>>> spans;

    for (const auto& r : trace.records) {
        out.makespan = std::max(out.makespan, r.time);
        if (r.tenant.empty()) continue;
        auto& t = tenants[r.tenant];
        t.id = r.tenant;
        const auto key = std::make_pair(r.tenant, InstanceRef{r.accel, r.instance.value_or(0)});
        switch (r.kind) {
            case TraceKind::Assignment:
                open[key] = r.time;
                t.outcome = "running";
                break;
            case TraceKind::Bill: {
                auto it = open.find(key);
                if (it == open.end() || !r.rate) break;
                t.total += *r.rate * (r.time - it->second);
                spans[key.second].emplace_back(it->second, r.time);
                it->second = r.time;
                break;
            }
            case TraceKind::Release:
                open.erase(key);
                break;
            case TraceKind::Rollback:
                if (r.progress) t.rollback_work = Progress::nanos(t.rollback_work.count() + r.progress->count());
                break;
            case TraceKind::MigrationComplete:
                ++t.migrations;
                break;
            case TraceKind::WorkloadComplete:
                t.outcome = "completed";
                t.finished_at = r.time;
                break;
            case TraceKind::Terminate:
                t.outcome = "terminated";
                t.finished_at = r.time;
                break;
            case TraceKind::Cancel:
                t.outcome = "cancelled";
                t.finished_at = r.time;
                break;
            case TraceKind::Timeout: {
                const bool holding = std::any_of(open.begin(), open.end(),
                                                 [&](const auto& kv) { return kv.first.first == r.tenant; });
                if (!holding) {
                    t.outcome = "timed-out";
                    t.finished_at = r.time;
                }
                break;
            }
            default:
                if (t.outcome.empty()) t.outcome = "queued";
                break;
        }
    }

    for (auto& [ref, list] : spans) {
        std::sort(list.begin(), list.end());
        Duration total;
        SimTime cursor;
        bool started = false;
        for (const auto& [a, b] : list) {
            const auto from = started ? std::max(a, cursor) : a;
            if (b > from) total += b - from;
            cursor = started ? std::max(cursor, b) : b;
            started = true;
        }
        busy[ref] = total;
    }

    const auto horizon = out.makespan - SimTime{};
    for (const auto& [type, count] : trace.header.inventory) {
        AcceleratorSummary a{type, count, {}, 0.0};
        for (const auto& [ref, d] : busy) {
            if (ref.type == type) a.busy += d;
        }
        if (horizon > Duration{} && count > 0) {
            a.utilization = static_cast<double>(a.busy.count()) / (static_cast<double>(horizon.count()) * count);
        }
        out.accelerators.push_back(a);
    }

    for (auto& [id, t] : tenants) {
        out.revenue += t.total;
        out.migrations += t.migrations;
        out.rollback_work = Progress::nanos(out.rollback_work.count() + t.rollback_work.count());
        out.tenants.push_back(std::move(t));
    }
    return out;
}

std::string cents(Money m) {
    const auto v = m.count();
    const auto c = v >= 0 ? (v + 5'000) / 10'000 : -((-v + 5'000) / 10'000);
    const auto mag = c < 0 ? -c : c;
    return fmt::format("{}${}.{:02}", c < 0 ? "-" : "", mag / 100, mag % 100);
}

std::string format_summary(const RunSummary& s) {
    std::string out = fmt::format("scenario {} ({})\n", s.scenario, s.scenario_hash.substr(0, 12));
    out += fmt::format("makespan {:.1f} min\n\n", static_cast<double>(s.makespan.ms()) / kMsPerMinute);
    out += fmt::format("{:<12} {:>10} {:<11} {:>12} {:>10} {:>9}\n", "tenant", "cost", "outcome", "finished_min",
                       "migrations", "rollback");
    for (const auto& t : s.tenants) {
        const auto finished =
            t.finished_at ? fmt::format("{:.2f}", static_cast<double>(t.finished_at->ms()) / kMsPerMinute)
                          : std::string("-");
        out += fmt::format("{:<12} {:>10} {:<11} {:>12} {:>10} {:>9.4f}\n", t.id, cents(t.total), t.outcome,
                           finished, t.migrations, t.rollback_work.as_double());
    }
    out += fmt::format("\n{:<12} {:>9} {:>10} {:>11}\n", "accelerator", "instances", "busy_min", "utilization");
    for (const auto& a : s.accelerators) {
        out += fmt::format("{:<12} {:>9} {:>10.2f} {:>10.1f}%\n", a.type, a.instances,
                           static_cast<double>(a.busy.count()) / kMsPerMinute, a.utilization * 100.0);
    }
    out += fmt::format("\nrevenue {}  migrations {}  rollback work {:.4f}\n", cents(s.revenue), s.migrations,
                       s.rollback_work.as_double());
    return out;
}

}  // namespace laissez
