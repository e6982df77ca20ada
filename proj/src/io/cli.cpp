#include "laissez/cli.hpp"

#include "laissez/report.hpp"
#include "laissez/scenario_io.hpp"
#include "laissez/simulation.hpp"
#include "laissez/trace_io.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

namespace laissez {
namespace {

// "90", "90s", "1.5m", "2h", "250ms"; bare numbers are seconds.
std::optional<Duration> parse_duration_arg(std::string text) {
    std::int64_t unit_ms = kMsPerSecond;
    auto strip = [&](std::string_view suffix, std::int64_t ms) {
        if (text.size() > suffix.size() && text.ends_with(suffix)) {
            text.resize(text.size() - suffix.size());
            unit_ms = ms;
            return true;
        }
        return false;
    };
    strip("ms", 1) || strip("s", kMsPerSecond) || strip("m", kMsPerMinute) || strip("h", kMsPerHour);
    auto v = parse_scaled_decimal(text, 3);
    if (!v || *v < 0) return std::nullopt;
    return Duration::ms(div_round_half_up(static_cast<__int128>(*v) * unit_ms, 1000));
}

int do_run(const std::string& ref, const std::string& until_text, const std::string& trace_path,
           const std::string& format_text, std::optional<std::uint64_t> seed, std::ostream& out, std::ostream& err) {
    auto format = trace_format_from_string(format_text);
    if (!format) {
        err << "unknown trace format '" << format_text << "'\n";
        return exit_code::invalid;
    }
    SimTime until = kForever;
    if (!until_text.empty()) {
        auto d = parse_duration_arg(until_text);
        if (!d) {
            err << "bad --until value '" << until_text << "'\n";
            return exit_code::invalid;
        }
        until = SimTime{} + *d;
    }
    auto scenario = resolve_scenario(ref);
    if (seed) scenario.engine.seed = *seed;
    const auto result = run(scenario, until);

    if (!trace_path.empty()) {
        if (trace_path == "-") {
            write_trace(out, result.trace, *format);
        } else {
            std::ofstream file(trace_path, std::ios::binary);
            if (!file) throw IoError("cannot write " + trace_path);
            write_trace(file, result.trace, *format);
            if (!file.flush()) throw IoError("cannot write " + trace_path);
        }
    }
    if (trace_path != "-") out << format_summary(summarize(result.trace));
    if (!result.quiescent) {
        err << "stopped at " << result.end_time.ms() << " ms with work outstanding\n";
        return exit_code::non_quiescent;
    }
    return exit_code::ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Market-based accelerator allocation simulator", "laissez"};
    app.require_subcommand(1);

    std::string scenario_ref;
    std::string until;
    std::string trace_path;
    std::string format = "csv";
    std::uint64_t seed = 0;
    auto* run_cmd = app.add_subcommand("run", "Run a scenario file or bundled scenario");
    run_cmd->add_option("scenario", scenario_ref, "Scenario path or bundled name")->required();
    run_cmd->add_option("--until", until, "Stop time, e.g. 900s, 15m, 1h");
    run_cmd->add_option("--trace", trace_path, "Write the trace here ('-' for stdout)");
    run_cmd->add_option("--format", format, "Trace format: csv or jsonl");
    auto* seed_opt = run_cmd->add_option("--seed", seed, "Override the scenario seed");

    std::string validate_ref;
    auto* validate_cmd = app.add_subcommand("validate", "Check a scenario without running it");
    validate_cmd->add_option("scenario", validate_ref, "Scenario path or bundled name")->required();

    std::string report_path;
    auto* report_cmd = app.add_subcommand("report", "Summarize a trace file");
    report_cmd->add_option("trace", report_path, "CSV or JSON-lines trace")->required();

    std::string show_name;
    auto* list_cmd = app.add_subcommand("scenarios", "List bundled scenarios");
    list_cmd->add_option("--print", show_name, "Print the named scenario's source");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_code::ok : exit_code::invalid;
    }

    try {
        if (*run_cmd) {
            std::optional<std::uint64_t> seed_override;
            if (*seed_opt) seed_override = seed;
            return do_run(scenario_ref, until, trace_path, format, seed_override, out, err);
        }
        if (*validate_cmd) {
            const auto scenario = resolve_scenario(validate_ref);
            auto diagnostics = validate_scenario(scenario);
            if (!diagnostics.empty()) throw ScenarioError(std::move(diagnostics));
            out << "ok " << scenario.name << " " << scenario_hash(scenario) << "\n";
            return exit_code::ok;
        }
        if (*report_cmd) {
            out << format_summary(summarize(read_trace_file(report_path)));
            return exit_code::ok;
        }
        if (*list_cmd) {
            for (const auto& b : bundled_scenarios()) {
                if (show_name.empty()) {
                    out << b.name << "\n";
                } else if (b.name == show_name) {
                    out << b.text;
                    return exit_code::ok;
                }
            }
            if (!show_name.empty()) {
                err << "no bundled scenario named '" << show_name << "'\n";
                return exit_code::io;
            }
            return exit_code::ok;
        }
    } catch (const ScenarioError& e) {
        err << e.what() << "\n";
        return exit_code::invalid;
    } catch (const IoError& e) {
        err << e.what() << "\n";
        return exit_code::io;
    } catch (const TraceParseError& e) {
        err << e.what() << "\n";
        return exit_code::invalid;
    }
    return exit_code::invalid;
}

}  // namespace laissez
