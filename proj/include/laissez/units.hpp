#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace laissez {

inline constexpr std::int64_t kMicrosPerDollar = 1'000'000;
inline constexpr std::int64_t kMsPerSecond = 1'000;
inline constexpr std::int64_t kMsPerMinute = 60'000;
inline constexpr std::int64_t kMsPerHour = 3'600'000;

/// Signed span of simulated time in whole milliseconds.
class Duration {
public:
    constexpr Duration() = default;

    static constexpr Duration ms(std::int64_t v) { return Duration{v}; }
    static constexpr Duration seconds(std::int64_t v) { return Duration{v * kMsPerSecond}; }
    static constexpr Duration minutes(std::int64_t v) { return Duration{v * kMsPerMinute}; }

    [[nodiscard]] constexpr std::int64_t count() const { return ms_; }

    constexpr auto operator<=>(const Duration&) const = default;
    constexpr Duration operator+(Duration o) const { return Duration{ms_ + o.ms_}; }
    constexpr Duration operator-(Duration o) const { return Duration{ms_ - o.ms_}; }
    constexpr Duration& operator+=(Duration o) { ms_ += o.ms_; return *this; }

private:
    constexpr explicit Duration(std::int64_t v) : ms_(v) {}
    std::int64_t ms_ = 0;
};

/// Point on the simulation clock, milliseconds since scenario start.
class SimTime {
public:
    constexpr SimTime() = default;
    static constexpr SimTime at_ms(std::int64_t v) { return SimTime{v}; }

    [[nodiscard]] constexpr std::int64_t ms() const { return ms_; }

    constexpr auto operator<=>(const SimTime&) const = default;
    constexpr SimTime operator+(Duration d) const { return SimTime{ms_ + d.count()}; }
    constexpr Duration operator-(SimTime o) const { return Duration::ms(ms_ - o.ms_); }

private:
    constexpr explicit SimTime(std::int64_t v) : ms_(v) {}
    std::int64_t ms_ = 0;
};

/// Dollar amount in integer micro-dollars.
class Money {
public:
    constexpr Money() = default;
    static constexpr Money micros(std::int64_t v) { return Money{v}; }

    [[nodiscard]] constexpr std::int64_t count() const { return micros_; }

    constexpr auto operator<=>(const Money&) const = default;
    constexpr Money operator+(Money o) const { return Money{micros_ + o.micros_}; }
    constexpr Money operator-(Money o) const { return Money{micros_ - o.micros_}; }
    constexpr Money& operator+=(Money o) { micros_ += o.micros_; return *this; }

private:
    constexpr explicit Money(std::int64_t v) : micros_(v) {}
    std::int64_t micros_ = 0;
};

/// Price per hour in integer micro-dollars.
class Rate {
public:
    constexpr Rate() = default;
    static constexpr Rate micros_per_hour(std::int64_t v) { return Rate{v}; }

    [[nodiscard]] constexpr std::int64_t count() const { return micros_; }

    constexpr auto operator<=>(const Rate&) const = default;
    constexpr Rate operator+(Rate o) const { return Rate{micros_ + o.micros_}; }
    constexpr Rate operator-(Rate o) const { return Rate{micros_ - o.micros_}; }

private:
    constexpr explicit Rate(std::int64_t v) : micros_(v) {}
    std::int64_t micros_ = 0;
};

/// Rate x duration, rounded half-up to the micro-dollar.
Money operator*(Rate r, Duration d);
inline Money operator*(Duration d, Rate r) { return r * d; }

/// Fraction of total work completed, in parts per billion.
class Progress {
public:
    static constexpr std::int64_t kOne = 1'000'000'000;

    constexpr Progress() = default;
    static constexpr Progress nanos(std::int64_t v) { return Progress{v}; }
    static constexpr Progress zero() { return Progress{0}; }
    static constexpr Progress complete() { return Progress{kOne}; }

    [[nodiscard]] constexpr std::int64_t count() const { return nanos_; }
    [[nodiscard]] constexpr bool is_complete() const { return nanos_ >= kOne; }
    [[nodiscard]] double as_double() const { return static_cast<double>(nanos_) / static_cast<double>(kOne); }

    constexpr auto operator<=>(const Progress&) const = default;

private:
    constexpr explicit Progress(std::int64_t v) : nanos_(v) {}
    std::int64_t nanos_ = 0;
};

// Exact decimal text <-> scaled integer. `scale` is the number of fractional
// digits kept; input with more significant fractional digits is rejected.
std::optional<std::int64_t> parse_scaled_decimal(std::string_view text, int scale);
std::string format_scaled_decimal(std::int64_t value, int scale);

std::optional<Money> parse_dollars(std::string_view text);
std::optional<Rate> parse_rate(std::string_view text);
std::optional<Progress> parse_fraction(std::string_view text);
// Hours and seconds round half-up to the millisecond.
std::optional<Duration> parse_hours(std::string_view text);
std::optional<Duration> parse_seconds(std::string_view text);

std::string to_string(Money m);      // "0.068700"
std::string to_string(Rate r);       // "0.687000"
std::string to_string(Progress p);   // "0.250000000"
std::string seconds_string(Duration d);
std::string hours_string(Duration d);

/// Rounds a non-negative rational num/den to the nearest integer, halves up.
std::int64_t div_round_half_up(__int128 num, __int128 den);

}  // namespace laissez
