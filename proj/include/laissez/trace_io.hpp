#pragma once

#include "laissez/trace.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string_view>

namespace laissez {

enum class TraceFormat { csv, jsonl };

std::optional<TraceFormat> trace_format_from_string(std::string_view name);

/// Columns: time_ms,event,tenant,accel,instance,rate_usd_per_hr,progress,cumulative_cost_usd.
/// Two leading `#` lines carry the scenario identity and the cluster inventory.
void write_trace_csv(std::ostream& out, const Trace& trace);

/// First line is {"header": {...}}; then one object per record. Money,
/// rates and progress are decimal strings so no precision is lost.
void write_trace_jsonl(std::ostream& out, const Trace& trace);

void write_trace(std::ostream& out, const Trace& trace, TraceFormat format);

class TraceParseError : public std::runtime_error {
public:
    TraceParseError(std::size_t line, const std::string& message);
    [[nodiscard]] std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Reads either format, detected from the first line.
Trace read_trace(std::istream& in);
Trace read_trace_file(const std::filesystem::path& path);

}  // namespace laissez
