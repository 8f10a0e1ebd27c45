#pragma once

#include "nfat/labeling.hpp"
#include "nfat/log_event.hpp"
#include "nfat/severity.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace nfat {

// One row of the rule table. A complement port set matches every port not
// named by an earlier rule of the same protocol; an "any" flag set matches
// every flag byte.
struct CriteriaRule {
    Protocol protocol = Protocol::TCP;
    Severity severity = Severity::NotDangerous;
    std::vector<std::uint16_t> ports; // ignored when complement_ports
    bool complement_ports = false;
    std::vector<std::uint8_t> flags; // ignored when any_flags
    bool any_flags = false;
};

// Rule-based severity classifier used as the target for error computation.
// Rules are evaluated per protocol in severity order (dangerous first);
// the first match wins and anything unmatched defaults to NotDangerous,
// which keeps classification total.
class RuleTable {
public:
    // Built-in default table:
    //   TCP dangerous:        ports {20,21,22,23,80,443,8080}, flags {16,32}
    //   TCP rather dangerous: ports {110,143,161,162,993},     flags 20..24
    //   TCP not dangerous:    every other port,                flags 20..27
    //   UDP dangerous:        port 53
    //   UDP rather dangerous: ports {137,161}
    //   UDP not dangerous:    every other port
    static RuleTable defaults();

    static RuleTable from_rules(std::vector<CriteriaRule> rules);

    // Loads a rules CSV (columns protocol,severity,ports,flags; ports are
    // ';'-separated or the keyword "other"; flags are ';'-separated values
    // and "lo-hi" ranges or the keyword "any"). Throws BadRuleFile.
    static RuleTable load(const std::filesystem::path& path);

    Severity classify(const LogEvent& event) const;

    const std::vector<CriteriaRule>& rules() const { return rules_; }

private:
    std::vector<CriteriaRule> rules_; // evaluation order
    // resolved exclusion set per rule; non-empty only for complement rules
    std::vector<std::vector<std::uint16_t>> excluded_;
};

// Classification against the built-in table.
Severity classify_event(const LogEvent& event);
Severity classify_event(const LogEvent& event, const RuleTable& rules);

struct ErrorReport {
    std::uint64_t total = 0;
    std::uint64_t mismatches = 0;
    double error_rate = 0.0; // mismatches / total, 0 for no events
    // rows: criteria severity (target); columns: cluster severity
    std::array<std::array<std::uint64_t, 3>, 3> confusion{};

    bool operator==(const ErrorReport&) const = default;
};

// Compares per-event cluster-derived severities against the rule table.
// Throws LengthMismatch when assignments do not cover the events or the
// labels do not cover clusters {0,1,2}.
ErrorReport compute_error(std::span<const LogEvent> events,
                          std::span<const std::uint32_t> assignments,
                          std::span<const SeverityLabel> labels,
                          const RuleTable& rules = RuleTable::defaults());

} // namespace nfat
