#include "nfat/timestamp.hpp"

#include "nfat/errors.hpp"

#include <cctype>
#include <cstdio>
#include <ctime>

namespace nfat {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

bool is_leap(int y) { return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0); }

unsigned days_in_month(int y, unsigned m) {
    static constexpr unsigned lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y))
        return 29;
    return lengths[m - 1];
}

// Proleptic Gregorian day count relative to 1970-01-01.
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : 0) - (mp >= 10 ? 9 : 0);
    y = static_cast<int>(yr) + (m <= 2);
}

bool all_digits(std::string_view s) {
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return !s.empty();
}

unsigned parse_field(std::string_view s) {
    unsigned v = 0;
    for (char c : s)
        v = v * 10 + static_cast<unsigned>(c - '0');
    return v;
}

} // namespace

Timestamp Timestamp::parse(std::string_view text) {
    // strict "YYYY-MM-DD HH:MM:SS"
    if (text.size() != 19 || text[4] != '-' || text[7] != '-' || text[10] != ' ' ||
        text[13] != ':' || text[16] != ':')
        raise(Errc::BadTimestamp, "bad timestamp '" + std::string(text) +
                                      "' (expected YYYY-MM-DD HH:MM:SS)");

    const auto year_s = text.substr(0, 4);
    const auto month_s = text.substr(5, 2);
    const auto day_s = text.substr(8, 2);
    const auto hour_s = text.substr(11, 2);
    const auto minute_s = text.substr(14, 2);
    const auto second_s = text.substr(17, 2);
    for (auto part : {year_s, month_s, day_s, hour_s, minute_s, second_s})
        if (!all_digits(part))
            raise(Errc::BadTimestamp, "bad timestamp '" + std::string(text) + "'");

    const int year = static_cast<int>(parse_field(year_s));
    const unsigned month = parse_field(month_s);
    const unsigned day = parse_field(day_s);
    const unsigned hour = parse_field(hour_s);
    const unsigned minute = parse_field(minute_s);
    const unsigned second = parse_field(second_s);

    if (year < 1 || month < 1 || month > 12 || day < 1 || day > days_in_month(year, month) ||
        hour > 23 || minute > 59 || second > 59)
        raise(Errc::BadTimestamp, "bad timestamp '" + std::string(text) + "'");

    return from_civil(year, month, day, hour, minute, second);
}

Timestamp Timestamp::from_civil(int year, unsigned month, unsigned day, unsigned hour,
                                unsigned minute, unsigned second) {
    const std::int64_t days = days_from_civil(year, month, day);
    return Timestamp(days * kSecondsPerDay + hour * 3600 + minute * 60 + second);
}

Timestamp Timestamp::now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    localtime_r(&t, &tm);
    return from_civil(tm.tm_year + 1900, static_cast<unsigned>(tm.tm_mon + 1),
                      static_cast<unsigned>(tm.tm_mday), static_cast<unsigned>(tm.tm_hour),
                      static_cast<unsigned>(tm.tm_min), static_cast<unsigned>(tm.tm_sec));
}

Timestamp Timestamp::min_value() { return from_civil(1, 1, 1, 0, 0, 0); }

Timestamp Timestamp::max_value() { return from_civil(9999, 12, 31, 23, 59, 59); }

std::string Timestamp::to_string() const {
    std::int64_t days = seconds_ / kSecondsPerDay;
    std::int64_t rem = seconds_ % kSecondsPerDay;
    if (rem < 0) {
        rem += kSecondsPerDay;
        days -= 1;
    }
    int year = 0;
    unsigned month = 0, day = 0;
    civil_from_days(days, year, month, day);
    const unsigned hour = static_cast<unsigned>(rem / 3600);
    const unsigned minute = static_cast<unsigned>((rem % 3600) / 60);
    const unsigned second = static_cast<unsigned>(rem % 60);

    char buf[20];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u %02u:%02u:%02u", year, month, day, hour,
                  minute, second);
    return buf;
}

} // namespace nfat
