#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace nfat {

// Naive calendar time with seconds precision, rendered "YYYY-MM-DD HH:MM:SS".
// Stored as seconds since 1970-01-01 00:00:00 with no timezone conversion
// applied: values order and subtract consistently but are not UTC instants.
class Timestamp {
public:
    Timestamp() = default;

    // Throws Errc::BadTimestamp on anything but a strict, valid
    // "YYYY-MM-DD HH:MM:SS" string.
    static Timestamp parse(std::string_view text);

    static Timestamp from_civil(int year, unsigned month, unsigned day,
                                unsigned hour, unsigned minute, unsigned second);
    static Timestamp from_seconds(std::int64_t seconds) { return Timestamp(seconds); }

    // Current wall-clock time in the local zone, truncated to seconds.
    static Timestamp now();

    // Query bounds: years 0001..9999.
    static Timestamp min_value();
    static Timestamp max_value();

    std::string to_string() const;
    std::int64_t seconds() const noexcept { return seconds_; }

    auto operator<=>(const Timestamp&) const = default;

private:
    explicit Timestamp(std::int64_t seconds) : seconds_(seconds) {}

    std::int64_t seconds_ = 0;
};

} // namespace nfat
