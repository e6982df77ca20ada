#include "laissez/scenario_io.hpp"

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace laissez {
namespace {

class Reader {
public:
    std::vector<Diagnostic> diagnostics;

    void fail(const std::string& path, const YAML::Node& at, std::string message) {
        const auto mark = at.Mark();
        const bool known = mark.line >= 0;
        diagnostics.push_back({path, std::move(message), known ? mark.line + 1 : 0, known ? mark.column + 1 : 0});
    }

    bool map(const YAML::Node& node, const std::string& path, const std::set<std::string>& allowed,
             const std::set<std::string>& required = {}) {
        if (!node.IsMap()) {
            fail(path, node, "expected a mapping");
            return false;
        }
        for (const auto& kv : node) {
            const auto key = kv.first.Scalar();
            if (!allowed.contains(key)) fail(join(path, key), kv.first, "unknown key '" + key + "'");
        }
        for (const auto& key : required) {
            if (!node[key]) fail(join(path, key), node, "missing required key '" + key + "'");
        }
        return true;
    }

    std::optional<std::string> scalar(const YAML::Node& node, const std::string& path) {
        if (!node.IsScalar()) {
            fail(path, node, "expected a scalar");
            return std::nullopt;
        }
        return node.Scalar();
    }

    template <typename T, typename Parse>
    void field(const YAML::Node& parent, const std::string& parent_path, const std::string& key, T& out,
               Parse parse, std::string_view what) {
        const auto node = parent[key];
        if (!node) return;
        const auto path = join(parent_path, key);
        auto text = scalar(node, path);
        if (!text) return;
        if (auto v = parse(*text)) {
            out = *v;
        } else {
            fail(path, node, "expected " + std::string(what) + ", got '" + *text + "'");
        }
    }

    void text(const YAML::Node& parent, const std::string& parent_path, const std::string& key, std::string& out) {
        field(parent, parent_path, key, out, [](const std::string& s) { return std::optional<std::string>(s); },
              "text");
    }

    static std::string join(const std::string& path, const std::string& key) {
        return path.empty() ? key : path + "." + key;
    }
};

std::optional<std::int64_t> parse_int(std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<std::uint64_t> parse_uint(std::string_view s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<bool> parse_bool(std::string_view s) {
    if (s == "true") return true;
    if (s == "false") return false;
    return std::nullopt;
}

std::optional<SimTime> parse_instant(std::string_view s) {
    auto d = parse_seconds(s);
    if (!d) return std::nullopt;
    return SimTime{} + *d;
}

void read_cluster(Reader& r, const YAML::Node& node, Scenario& s) {
    if (!r.map(node, "cluster", {"id", "function", "accelerators"}, {"accelerators"})) return;
    r.text(node, "cluster", "id", s.cluster_id);
    r.text(node, "cluster", "function", s.function);
    const auto list = node["accelerators"];
    if (!list) return;
    if (!list.IsSequence()) {
        r.fail("cluster.accelerators", list, "expected a sequence");
        return;
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
        const auto item = list[i];
        const auto path = "cluster.accelerators[" + std::to_string(i) + "]";
        if (!r.map(item, path, {"id", "name", "base_rate", "count"}, {"id", "base_rate"})) continue;
        AcceleratorType t;
        r.text(item, path, "id", t.id);
        t.name = t.id;
        r.text(item, path, "name", t.name);
        r.field(item, path, "base_rate", t.base_rate, parse_rate, "a dollar rate");
        std::int64_t count = 1;
        r.field(item, path, "count", count, parse_int, "an integer");
        t.instance_count = static_cast<int>(count);
        s.accelerators.push_back(std::move(t));
    }
}

void read_engine(Reader& r, const YAML::Node& node, EngineConfig& e) {
    if (!r.map(node, "engine",
               {"agent_wake_period_s", "price_sweep_period_s", "grace_window_s", "rate_tick", "seed",
                "operator_policy", "head_of_line_blocking"})) {
        return;
    }
    r.field(node, "engine", "agent_wake_period_s", e.agent_wake_period, parse_seconds, "seconds");
    r.field(node, "engine", "price_sweep_period_s", e.price_sweep_period, parse_seconds, "seconds");
    r.field(node, "engine", "grace_window_s", e.grace_window, parse_seconds, "seconds");
    r.field(node, "engine", "rate_tick", e.rate_tick, parse_rate, "a dollar rate");
    r.field(node, "engine", "seed", e.seed, parse_uint, "an unsigned integer");
    r.field(node, "engine", "operator_policy", e.operator_policy, operator_policy_from_string, "none or naive");
    r.field(node, "engine", "head_of_line_blocking", e.head_of_line_blocking, parse_bool, "true or false");
}

void read_profile(Reader& r, const YAML::Node& node, const std::string& path, WorkloadProfile& p) {
    if (!r.map(node, path, {"hours", "checkpoint_interval", "restart_surcharge", "load_delay_s"}, {"hours"})) {
        return;
    }
    const auto hours = node["hours"];
    if (hours) {
        const auto hpath = path + ".hours";
        if (!hours.IsMap()) {
            r.fail(hpath, hours, "expected a mapping of accelerator to hours");
        } else {
            for (const auto& kv : hours) {
                const auto type = kv.first.Scalar();
                Duration d;
                r.field(hours, hpath, type, d, parse_hours, "hours");
                p.exec_time[type] = d;
            }
        }
    }
    r.field(node, path, "checkpoint_interval", p.checkpoint_interval, parse_fraction, "a fraction");
    r.field(node, path, "restart_surcharge", p.restart_surcharge, parse_dollars, "a dollar amount");
    r.field(node, path, "load_delay_s", p.load_delay, parse_seconds, "seconds");
}

void read_tenant(Reader& r, const YAML::Node& node, const std::string& path, TenantSpec& t) {
    if (!r.map(node, path,
               {"id", "arrival_s", "payload", "agent", "migration", "transfer_cost", "timeout_s", "resume_from",
                "cancel_at_s", "launch_table", "profile"},
               {"id", "launch_table", "profile"})) {
        return;
    }
    r.text(node, path, "id", t.id);
    r.field(node, path, "arrival_s", t.arrival, parse_instant, "seconds");
    r.text(node, path, "payload", t.payload);
    r.text(node, path, "agent", t.agent);
    r.field(node, path, "migration", t.migration, migration_mode_from_string, "checkpoint-store or live-overlap");
    r.field(node, path, "transfer_cost", t.transfer_cost, parse_dollars, "a dollar amount");
    r.field(node, path, "timeout_s", t.timeout, parse_seconds, "seconds");
    r.field(node, path, "resume_from", t.resume_from, parse_fraction, "a fraction");
    if (node["cancel_at_s"]) {
        SimTime at;
        r.field(node, path, "cancel_at_s", at, parse_instant, "seconds");
        t.cancel_at = at;
    }
    const auto table = node["launch_table"];
    if (table) {
        const auto tpath = path + ".launch_table";
        if (!table.IsSequence()) {
            r.fail(tpath, table, "expected a sequence");
        } else {
            for (std::size_t i = 0; i < table.size(); ++i) {
                const auto epath = tpath + "[" + std::to_string(i) + "]";
                if (!r.map(table[i], epath, {"accel", "max_bid"}, {"accel", "max_bid"})) continue;
                LaunchEntry e;
                r.text(table[i], epath, "accel", e.type);
                r.field(table[i], epath, "max_bid", e.max_bid, parse_rate, "a dollar rate");
                t.launch_table.entries.push_back(std::move(e));
            }
        }
    }
    if (node["profile"]) read_profile(r, node["profile"], path + ".profile", t.profile);
}

std::string num(Money m) { return format_scaled_decimal(m.count(), 6); }
std::string num(Rate r) { return format_scaled_decimal(r.count(), 6); }
std::string num(Progress p) { return format_scaled_decimal(p.count(), 9); }

std::string yaml_quoted(std::string_view s) {
    YAML::Emitter e;
    e << YAML::DoubleQuoted << std::string(s);
    return e.c_str();
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw ScenarioError(std::vector<Diagnostic>{{"", e.msg, e.mark.line + 1, e.mark.column + 1}});
    }
    Reader r;
    Scenario s;
    if (!root || root.IsNull()) throw ScenarioError(std::vector<Diagnostic>{{"", "empty document"}});
    if (r.map(root, "", {"schema_version", "name", "description", "cluster", "engine", "tenants"},
              {"schema_version", "name", "cluster", "tenants"})) {
        std::int64_t version = 0;
        r.field(root, "", "schema_version", version, parse_int, "an integer");
        s.schema_version = static_cast<int>(version);
        r.text(root, "", "name", s.name);
        r.text(root, "", "description", s.description);
        if (root["cluster"]) read_cluster(r, root["cluster"], s);
        if (root["engine"]) read_engine(r, root["engine"], s.engine);
        const auto tenants = root["tenants"];
        if (tenants && !tenants.IsSequence()) {
            r.fail("tenants", tenants, "expected a sequence");
        } else if (tenants) {
            for (std::size_t i = 0; i < tenants.size(); ++i) {
                TenantSpec t;
                read_tenant(r, tenants[i], "tenants[" + std::to_string(i) + "]", t);
                s.tenants.push_back(std::move(t));
            }
        }
    }
    if (!r.diagnostics.empty()) throw ScenarioError(std::move(r.diagnostics));
    return s;
}

std::string serialize_scenario(const Scenario& s) {
    std::ostringstream o;
    o << "schema_version: " << s.schema_version << "\n";
    o << "name: " << yaml_quoted(s.name) << "\n";
    o << "description: " << yaml_quoted(s.description) << "\n";
    o << "cluster:\n";
    o << "  id: " << yaml_quoted(s.cluster_id) << "\n";
    o << "  function: " << yaml_quoted(s.function) << "\n";
    o << "  accelerators:\n";
    for (const auto& a : s.accelerators) {
        o << "    - id: " << yaml_quoted(a.id) << "\n";
        o << "      name: " << yaml_quoted(a.name) << "\n";
        o << "      base_rate: " << num(a.base_rate) << "\n";
        o << "      count: " << a.instance_count << "\n";
    }
    const auto& e = s.engine;
    o << "engine:\n";
    o << "  agent_wake_period_s: " << seconds_string(e.agent_wake_period) << "\n";
    o << "  price_sweep_period_s: " << seconds_string(e.price_sweep_period) << "\n";
    o << "  grace_window_s: " << seconds_string(e.grace_window) << "\n";
    o << "  rate_tick: " << num(e.rate_tick) << "\n";
    o << "  seed: " << e.seed << "\n";
    o << "  operator_policy: " << to_string(e.operator_policy) << "\n";
    o << "  head_of_line_blocking: " << (e.head_of_line_blocking ? "true" : "false") << "\n";
    o << "tenants:\n";
    for (const auto& t : s.tenants) {
        o << "  - id: " << yaml_quoted(t.id) << "\n";
        o << "    arrival_s: " << seconds_string(t.arrival - SimTime{}) << "\n";
        o << "    payload: " << yaml_quoted(t.payload) << "\n";
        o << "    agent: " << yaml_quoted(t.agent) << "\n";
        o << "    migration: " << to_string(t.migration) << "\n";
        o << "    transfer_cost: " << num(t.transfer_cost) << "\n";
        o << "    timeout_s: " << seconds_string(t.timeout) << "\n";
        o << "    resume_from: " << num(t.resume_from) << "\n";
        if (t.cancel_at) o << "    cancel_at_s: " << seconds_string(*t.cancel_at - SimTime{}) << "\n";
        o << "    launch_table:\n";
        for (const auto& entry : t.launch_table.entries) {
            o << "      - accel: " << yaml_quoted(entry.type) << "\n";
            o << "        max_bid: " << num(entry.max_bid) << "\n";
        }
        o << "    profile:\n";
        o << "      hours:\n";
        for (const auto& [type, d] : t.profile.exec_time) {
            o << "        " << yaml_quoted(type) << ": " << hours_string(d) << "\n";
        }
        o << "      checkpoint_interval: " << num(t.profile.checkpoint_interval) << "\n";
        o << "      restart_surcharge: " << num(t.profile.restart_surcharge) << "\n";
        o << "      load_delay_s: " << seconds_string(t.profile.load_delay) << "\n";
    }
    return o.str();
}

std::string scenario_hash(const Scenario& scenario) {
    const auto canonical = serialize_scenario(scenario);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(canonical.data(), canonical.size(), digest, &len, EVP_sha256(), nullptr);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 0xf];
    }
    return out;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

Scenario resolve_scenario(const std::string& ref) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(ref, ec)) return load_scenario_file(ref);
    for (const auto& b : bundled_scenarios()) {
        if (b.name == ref) return parse_scenario(b.text);
    }
    throw IoError("no scenario file or bundled scenario named '" + ref + "'");
}

}  // namespace laissez
