#include "laissez/units.hpp"

#include <cstdlib>
#include <limits>

namespace laissez {

std::int64_t div_round_half_up(__int128 num, __int128 den) {
    // Callers only pass non-negative operands.
    return static_cast<std::int64_t>((2 * num + den) / (2 * den));
}

Money operator*(Rate r, Duration d) {
    return Money::micros(div_round_half_up(static_cast<__int128>(r.count()) * d.count(), kMsPerHour));
}

std::optional<std::int64_t> parse_scaled_decimal(std::string_view text, int scale) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
    if (text.empty()) return std::nullopt;

    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    if (!text.empty() && text.front() == '$') text.remove_prefix(1);
    if (text.empty()) return std::nullopt;

    constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max() / 10;
    std::int64_t value = 0;
    int frac_digits = 0;
    bool seen_point = false;
    bool seen_digit = false;
    for (char c : text) {
        if (c == '.') {
            if (seen_point) return std::nullopt;
            seen_point = true;
            continue;
        }
        if (c == '_') continue;
        if (c < '0' || c > '9') return std::nullopt;
        seen_digit = true;
        if (seen_point) {
            if (frac_digits == scale) {
                if (c != '0') return std::nullopt;
                continue;
            }
            ++frac_digits;
        }
        if (value > kMax) return std::nullopt;
        value = value * 10 + (c - '0');
    }
    if (!seen_digit) return std::nullopt;
    for (; frac_digits < scale; ++frac_digits) {
        if (value > kMax) return std::nullopt;
        value *= 10;
    }
    return negative ? -value : value;
}

std::string format_scaled_decimal(std::int64_t value, int scale) {
    const bool negative = value < 0;
    std::string digits = std::to_string(negative ? -value : value);
    if (static_cast<int>(digits.size()) <= scale) {
        digits.insert(0, static_cast<std::size_t>(scale + 1) - digits.size(), '0');
    }
    if (scale > 0) digits.insert(digits.size() - static_cast<std::size_t>(scale), 1, '.');
    return negative ? "-" + digits : digits;
}

std::optional<Money> parse_dollars(std::string_view text) {
    auto v = parse_scaled_decimal(text, 6);
    if (!v) return std::nullopt;
    return Money::micros(*v);
}

std::optional<Rate> parse_rate(std::string_view text) {
    auto v = parse_scaled_decimal(text, 6);
    if (!v) return std::nullopt;
    return Rate::micros_per_hour(*v);
}

std::optional<Progress> parse_fraction(std::string_view text) {
    auto v = parse_scaled_decimal(text, 9);
    if (!v) return std::nullopt;
    return Progress::nanos(*v);
}

std::optional<Duration> parse_hours(std::string_view text) {
    auto nano_hours = parse_scaled_decimal(text, 9);
    if (!nano_hours || *nano_hours < 0) return std::nullopt;
    return Duration::ms(div_round_half_up(static_cast<__int128>(*nano_hours) * kMsPerHour, 1'000'000'000));
}

std::optional<Duration> parse_seconds(std::string_view text) {
    auto v = parse_scaled_decimal(text, 3);
    if (!v || *v < 0) return std::nullopt;
    return Duration::ms(*v);
}

std::string to_string(Money m) { return format_scaled_decimal(m.count(), 6); }
std::string to_string(Rate r) { return format_scaled_decimal(r.count(), 6); }
std::string to_string(Progress p) { return format_scaled_decimal(p.count(), 9); }

namespace {
std::string trim_zeros(std::string s) {
    if (s.find('.') == std::string::npos) return s;
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return s;
}
}  // namespace

std::string seconds_string(Duration d) { return trim_zeros(format_scaled_decimal(d.count(), 3)); }

std::string hours_string(Duration d) {
    const auto nano_hours = div_round_half_up(static_cast<__int128>(d.count()) * 1'000'000'000, kMsPerHour);
    return trim_zeros(format_scaled_decimal(nano_hours, 9));
}

}  // namespace laissez
