#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace nfat {

// The three attack groups, most severe first.
enum class Severity : std::uint8_t {
    Dangerous = 0,
    RatherDangerous = 1,
    NotDangerous = 2,
};

inline constexpr std::array<Severity, 3> kAllSeverities{
    Severity::Dangerous, Severity::RatherDangerous, Severity::NotDangerous};

constexpr std::size_t severity_index(Severity s) { return static_cast<std::size_t>(s); }

// Stable machine key: "dangerous" / "rather_dangerous" / "not_dangerous".
const char* severity_key(Severity s);

// Investigator-facing name: "dangerous attack" / ...
const char* severity_display(Severity s);

std::optional<Severity> severity_from_key(std::string_view key);

} // namespace nfat
