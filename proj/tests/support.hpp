#pragma once

#include "doctest.h"
#include "laissez/error.hpp"
#include "laissez/model.hpp"
#include "laissez/scenario.hpp"
#include "laissez/scenario_io.hpp"
#include "laissez/units.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace test {

inline laissez::Rate rate(const char* text) {
    auto r = laissez::parse_rate(text);
    if (!r) throw std::invalid_argument(text);
    return *r;
}

inline laissez::Money money(const char* text) {
    auto m = laissez::parse_dollars(text);
    if (!m) throw std::invalid_argument(text);
    return *m;
}

inline laissez::Progress fraction(const char* text) {
    auto p = laissez::parse_fraction(text);
    if (!p) throw std::invalid_argument(text);
    return *p;
}

inline laissez::Duration hours(const char* text) { return *laissez::parse_hours(text); }

inline laissez::SimTime at_s(std::int64_t s) { return laissez::SimTime::at_ms(s * 1000); }

inline std::vector<laissez::AcceleratorType> golden_types() {
    return {{"A10", "NVIDIA A10", rate("0.606"), 1},
            {"L4", "NVIDIA L4", rate("0.469"), 4},
            {"Trainium", "AWS Trainium", rate("0.804"), 4}};
}

inline laissez::FunctionalCluster golden_cluster() { return {"pool", "gemm", golden_types()}; }

inline laissez::WorkloadProfile app_a() {
    laissez::WorkloadProfile p;
    p.exec_time = {{"A10", hours("0.35")}, {"L4", hours("0.51")}, {"Trainium", hours("0.30")}};
    p.checkpoint_interval = fraction("0.25");
    p.load_delay = laissez::Duration::seconds(5);
    return p;
}

inline laissez::WorkloadProfile app_b() {
    laissez::WorkloadProfile p;
    p.exec_time = {{"A10", hours("0.23")}, {"L4", hours("0.32")}};
    p.checkpoint_interval = fraction("0.5");
    p.restart_surcharge = money("0.0253");
    p.load_delay = laissez::Duration::seconds(5);
    return p;
}

inline laissez::Scenario bundled(const std::string& name) { return laissez::resolve_scenario(name); }

/// One-tenant scenario on the golden cluster, ready to tweak.
inline laissez::Scenario solo(laissez::TenantSpec tenant) {
    laissez::Scenario s;
    s.name = "solo";
    s.accelerators = golden_types();
    s.tenants.push_back(std::move(tenant));
    return s;
}

inline laissez::TenantSpec tenant(const std::string& id, laissez::WorkloadProfile profile,
                                  std::vector<laissez::LaunchEntry> table, std::int64_t arrival_s = 0) {
    laissez::TenantSpec t;
    t.id = id;
    t.arrival = at_s(arrival_s);
    t.profile = std::move(profile);
    t.launch_table.entries = std::move(table);
    return t;
}

/// Code of the laissez::Error thrown by `fn`, or nullopt if it returned.
template <class Fn>
std::optional<laissez::Errc> errc_of(Fn&& fn) {
    try {
        fn();
    } catch (const laissez::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

}  // namespace test

namespace doctest {
template <>
struct StringMaker<laissez::Money> {
    static String convert(laissez::Money v) { return ("$" + laissez::to_string(v)).c_str(); }
};
template <>
struct StringMaker<laissez::Rate> {
    static String convert(laissez::Rate v) { return ("$" + laissez::to_string(v) + "/h").c_str(); }
};
template <>
struct StringMaker<laissez::Progress> {
    static String convert(laissez::Progress v) { return laissez::to_string(v).c_str(); }
};
template <>
struct StringMaker<laissez::Duration> {
    static String convert(laissez::Duration v) { return (std::to_string(v.count()) + " ms").c_str(); }
};
template <>
struct StringMaker<laissez::SimTime> {
    static String convert(laissez::SimTime v) { return ("t=" + std::to_string(v.ms()) + " ms").c_str(); }
};
}  // namespace doctest
