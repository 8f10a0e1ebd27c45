#include "nfat/severity.hpp"

namespace nfat {

const char* severity_key(Severity s) {
    switch (s) {
    case Severity::Dangerous: return "dangerous";
    case Severity::RatherDangerous: return "rather_dangerous";
    case Severity::NotDangerous: return "not_dangerous";
    }
    return "not_dangerous";
}

const char* severity_display(Severity s) {
    switch (s) {
    case Severity::Dangerous: return "dangerous attack";
    case Severity::RatherDangerous: return "rather dangerous attack";
    case Severity::NotDangerous: return "not dangerous attack";
    }
    return "not dangerous attack";
}

std::optional<Severity> severity_from_key(std::string_view key) {
    for (Severity s : kAllSeverities)
        if (key == severity_key(s))
            return s;
    return std::nullopt;
}

} // namespace nfat
