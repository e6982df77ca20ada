#include "laissez/trace_io.hpp"

#include "laissez/scenario_io.hpp"

#include "json.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace laissez {

using nlohmann::json;

namespace {

constexpr std::string_view kCsvHeader =
    "time_ms,event,tenant,accel,instance,rate_usd_per_hr,progress,cumulative_cost_usd";

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                out.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else {
            out.back() += c;
        }
    }
    return out;
}

std::optional<std::int64_t> to_int(std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::string inventory_string(const TraceHeader& h) {
    std::string out;
    for (const auto& [type, count] : h.inventory) {
        if (!out.empty()) out += ",";
        out += type + ":" + std::to_string(count);
    }
    return out;
}

template <typename T>
T require(std::optional<T> v, std::size_t line, const std::string& what) {
    if (!v) throw TraceParseError(line, "bad " + what);
    return *v;
}

TraceRecord make_record(std::size_t line, std::int64_t time, std::string_view event, std::string tenant,
                        std::string accel, std::optional<std::int64_t> instance, const std::string& rate,
                        const std::string& progress, const std::string& cost) {
    TraceRecord r;
    r.time = SimTime::at_ms(time);
    r.kind = require(trace_kind_from_string(event), line, "event '" + std::string(event) + "'");
    r.tenant = std::move(tenant);
    r.accel = std::move(accel);
    if (instance) r.instance = static_cast<int>(*instance);
    if (!rate.empty()) r.rate = require(parse_rate(rate), line, "rate");
    if (!progress.empty()) r.progress = require(parse_fraction(progress), line, "progress");
    if (!cost.empty()) r.cumulative_cost = require(parse_dollars(cost), line, "cost");
    return r;
}

void parse_identity(const std::string& text, TraceHeader& h) {
    auto value = [&](std::string_view key, std::string_view next) -> std::string {
        const auto at = text.find(std::string(key) + "=");
        if (at == std::string::npos) return {};
        const auto start = at + key.size() + 1;
        const auto end = next.empty() ? std::string::npos : text.find(" " + std::string(next) + "=", start);
        return text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    };
    h.scenario = value("scenario", "hash");
    h.scenario_hash = value("hash", "seed");
    const auto seed = value("seed", "");
    std::uint64_t v = 0;
    std::from_chars(seed.data(), seed.data() + seed.size(), v);
    h.seed = v;
}

void parse_inventory(const std::string& text, std::size_t line, TraceHeader& h) {
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto colon = item.rfind(':');
        if (colon == std::string::npos) throw TraceParseError(line, "bad inventory item '" + item + "'");
        h.inventory.emplace_back(item.substr(0, colon),
                                 static_cast<int>(require(to_int(item.substr(colon + 1)), line, "count")));
    }
}

Trace read_csv(std::istream& in, std::string first) {
    Trace t;
    std::size_t n = 1;
    std::string line = std::move(first);
    bool header_seen = false;
    do {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.starts_with("# cluster ")) {
            parse_inventory(line.substr(10), n, t.header);
        } else if (line.starts_with("#")) {
            parse_identity(line, t.header);
        } else if (!header_seen) {
            if (line != kCsvHeader) throw TraceParseError(n, "unexpected column header");
            header_seen = true;
        } else {
            auto f = split_csv(line);
            if (f.size() != 8) throw TraceParseError(n, "expected 8 fields, got " + std::to_string(f.size()));
            std::optional<std::int64_t> instance;
            if (!f[4].empty()) instance = require(to_int(f[4]), n, "instance");
            t.records.push_back(make_record(n, require(to_int(f[0]), n, "time"), f[1], f[2], f[3], instance,
                                            f[5], f[6], f[7]));
        }
        ++n;
    } while (std::getline(in, line));
    if (!header_seen) throw TraceParseError(n, "missing column header");
    return t;
}

std::string str_or_empty(const json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return {};
    return j[key].get<std::string>();
}

Trace read_jsonl(std::istream& in, const std::string& first) {
    Trace t;
    std::size_t n = 1;
    std::string line = first;
    bool header_seen = false;
    do {
        if (line.empty()) {
            ++n;
            continue;
        }
        try {
            const auto j = json::parse(line);
            if (j.contains("header")) {
                const auto& h = j["header"];
                t.header.scenario = h.value("scenario", "");
                t.header.scenario_hash = h.value("hash", "");
                t.header.seed = h.value("seed", std::uint64_t{0});
                for (const auto& item : h.value("cluster", json::array())) {
                    t.header.inventory.emplace_back(item.at(0).get<std::string>(), item.at(1).get<int>());
                }
                header_seen = true;
            } else {
                std::optional<std::int64_t> instance;
                if (j.contains("instance") && !j["instance"].is_null()) instance = j["instance"].get<std::int64_t>();
                t.records.push_back(make_record(n, j.at("time_ms").get<std::int64_t>(),
                                                j.at("event").get<std::string>(), j.value("tenant", ""),
                                                j.value("accel", ""), instance, str_or_empty(j, "rate_usd_per_hr"),
                                                str_or_empty(j, "progress"), str_or_empty(j, "cumulative_cost_usd")));
            }
        } catch (const json::exception& e) {
            throw TraceParseError(n, e.what());
        }
        ++n;
    } while (std::getline(in, line));
    if (!header_seen) throw TraceParseError(1, "missing header object");
    return t;
}

}  // namespace

std::optional<TraceFormat> trace_format_from_string(std::string_view name) {
    if (name == "csv") return TraceFormat::csv;
    if (name == "jsonl") return TraceFormat::jsonl;
    return std::nullopt;
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
    const auto& h = trace.header;
    out << "# laissez trace scenario=" << h.scenario << " hash=" << h.scenario_hash << " seed=" << h.seed << "\n";
    out << "# cluster " << inventory_string(h) << "\n";
    out << kCsvHeader << "\n";
    for (const auto& r : trace.records) {
        out << r.time.ms() << ',' << to_string(r.kind) << ',' << csv_field(r.tenant) << ',' << csv_field(r.accel)
            << ',';
        if (r.instance) out << *r.instance;
        out << ',';
        if (r.rate) out << to_string(*r.rate);
        out << ',';
        if (r.progress) out << to_string(*r.progress);
        out << ',';
        if (r.cumulative_cost) out << to_string(*r.cumulative_cost);
        out << '\n';
    }
}

void write_trace_jsonl(std::ostream& out, const Trace& trace) {
    const auto& h = trace.header;
    json cluster = json::array();
    for (const auto& [type, count] : h.inventory) cluster.push_back(json::array({type, count}));
    out << json{{"header", {{"scenario", h.scenario}, {"hash", h.scenario_hash}, {"seed", h.seed},
                            {"cluster", cluster}}}}
               .dump()
        << "\n";
    for (const auto& r : trace.records) {
        json j;
        j["time_ms"] = r.time.ms();
        j["event"] = std::string(to_string(r.kind));
        j["tenant"] = r.tenant;
        j["accel"] = r.accel;
        j["instance"] = r.instance ? json(*r.instance) : json(nullptr);
        j["rate_usd_per_hr"] = r.rate ? json(to_string(*r.rate)) : json(nullptr);
        j["progress"] = r.progress ? json(to_string(*r.progress)) : json(nullptr);
        j["cumulative_cost_usd"] = r.cumulative_cost ? json(to_string(*r.cumulative_cost)) : json(nullptr);
        out << j.dump() << "\n";
    }
}

void write_trace(std::ostream& out, const Trace& trace, TraceFormat format) {
    if (format == TraceFormat::jsonl) {
        write_trace_jsonl(out, trace);
    } else {
        write_trace_csv(out, trace);
    }
}

TraceParseError::TraceParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

Trace read_trace(std::istream& in) {
    std::string first;
    if (!std::getline(in, first)) throw TraceParseError(1, "empty trace");
    if (first.starts_with("{")) return read_jsonl(in, first);
    return read_csv(in, std::move(first));
}

Trace read_trace_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    return read_trace(in);
}

}  // namespace laissez
