#include "nfat/criteria.hpp"

#include "nfat/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>

namespace nfat {

namespace {

bool contains(const std::vector<std::uint16_t>& sorted, std::uint16_t value) {
    return std::binary_search(sorted.begin(), sorted.end(), value);
}

bool contains(const std::vector<std::uint8_t>& sorted, std::uint8_t value) {
    return std::binary_search(sorted.begin(), sorted.end(), value);
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(text.substr(start));
            break;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

std::optional<std::uint64_t> parse_u64(std::string_view s) {
    if (s.empty())
        return std::nullopt;
    std::uint64_t value = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc{} || ptr != end)
        return std::nullopt;
    return value;
}

[[noreturn]] void bad_rule(std::size_t line_no, const std::string& what) {
    raise(Errc::BadRuleFile, "rules line " + std::to_string(line_no) + ": " + what);
}

} // namespace

RuleTable RuleTable::defaults() {
    std::vector<CriteriaRule> rules;
    rules.push_back({Protocol::TCP, Severity::Dangerous,
                     {20, 21, 22, 23, 80, 443, 8080}, false, {16, 32}, false});
    rules.push_back({Protocol::TCP, Severity::RatherDangerous,
                     {110, 143, 161, 162, 993}, false, {20, 21, 22, 23, 24}, false});
    rules.push_back({Protocol::TCP, Severity::NotDangerous,
                     {}, true, {20, 21, 22, 23, 24, 25, 26, 27}, false});
    rules.push_back({Protocol::UDP, Severity::Dangerous, {53}, false, {}, true});
    rules.push_back({Protocol::UDP, Severity::RatherDangerous, {137, 161}, false, {}, true});
    rules.push_back({Protocol::UDP, Severity::NotDangerous, {}, true, {}, true});
    return from_rules(std::move(rules));
}

RuleTable RuleTable::from_rules(std::vector<CriteriaRule> rules) {
    RuleTable table;
    for (auto& rule : rules) {
        std::sort(rule.ports.begin(), rule.ports.end());
        rule.ports.erase(std::unique(rule.ports.begin(), rule.ports.end()), rule.ports.end());
        std::sort(rule.flags.begin(), rule.flags.end());
        rule.flags.erase(std::unique(rule.flags.begin(), rule.flags.end()), rule.flags.end());
    }
    // fixed evaluation order: dangerous rules first
    std::stable_sort(rules.begin(), rules.end(), [](const CriteriaRule& a, const CriteriaRule& b) {
        return severity_index(a.severity) < severity_index(b.severity);
    });

    // A complement set covers every port not named by an earlier rule of the
    // same protocol.
    std::array<std::vector<std::uint16_t>, 2> named;
    table.excluded_.reserve(rules.size());
    for (const auto& rule : rules) {
        auto& seen = named[static_cast<std::size_t>(rule.protocol)];
        if (rule.complement_ports) {
            table.excluded_.push_back(seen);
        } else {
            table.excluded_.emplace_back();
            seen.insert(seen.end(), rule.ports.begin(), rule.ports.end());
            std::sort(seen.begin(), seen.end());
            seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
        }
    }
    table.rules_ = std::move(rules);
    return table;
}

RuleTable RuleTable::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(Errc::FileNotFound, "cannot open rules file '" + path.string() + "'");

    std::vector<CriteriaRule> rules;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line_no == 1 && line == "protocol,severity,ports,flags")
            continue;

        const auto cols = split(line, ',');
        if (cols.size() != 4)
            bad_rule(line_no, "expected 4 columns (protocol,severity,ports,flags)");

        CriteriaRule rule;
        const auto protocol = parse_protocol(cols[0]);
        if (!protocol)
            bad_rule(line_no, "unknown protocol '" + std::string(cols[0]) + "'");
        rule.protocol = *protocol;

        const auto severity = severity_from_key(cols[1]);
        if (!severity)
            bad_rule(line_no, "unknown severity '" + std::string(cols[1]) + "'");
        rule.severity = *severity;

        if (cols[2] == "other") {
            rule.complement_ports = true;
        } else {
            for (auto part : split(cols[2], ';')) {
                const auto port = parse_u64(part);
                if (!port || *port > 65535)
                    bad_rule(line_no, "bad port '" + std::string(part) + "'");
                rule.ports.push_back(static_cast<std::uint16_t>(*port));
            }
            if (rule.ports.empty())
                bad_rule(line_no, "empty port list");
        }

        if (cols[3] == "any") {
            rule.any_flags = true;
        } else {
            for (auto part : split(cols[3], ';')) {
                const std::size_t dash = part.find('-');
                if (dash == std::string_view::npos) {
                    const auto flag = parse_u64(part);
                    if (!flag || *flag > 255)
                        bad_rule(line_no, "bad flag value '" + std::string(part) + "'");
                    rule.flags.push_back(static_cast<std::uint8_t>(*flag));
                } else {
                    const auto lo = parse_u64(part.substr(0, dash));
                    const auto hi = parse_u64(part.substr(dash + 1));
                    if (!lo || !hi || *lo > 255 || *hi > 255 || *lo > *hi)
                        bad_rule(line_no, "bad flag range '" + std::string(part) + "'");
                    for (std::uint64_t f = *lo; f <= *hi; ++f)
                        rule.flags.push_back(static_cast<std::uint8_t>(f));
                }
            }
            if (rule.flags.empty())
                bad_rule(line_no, "empty flag list");
        }

        rules.push_back(std::move(rule));
    }

    if (rules.empty())
        raise(Errc::BadRuleFile, "rules file '" + path.string() + "' has no rules");
    return from_rules(std::move(rules));
}

Severity RuleTable::classify(const LogEvent& event) const {
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        const auto& rule = rules_[i];
        if (rule.protocol != event.protocol)
            continue;
        const bool port_ok = rule.complement_ports ? !contains(excluded_[i], event.d_port)
                                                   : contains(rule.ports, event.d_port);
        if (!port_ok)
            continue;
        if (rule.any_flags || contains(rule.flags, event.tcp_flags))
            return rule.severity;
    }
    return Severity::NotDangerous; // table stays total
}

Severity classify_event(const LogEvent& event) {
    static const RuleTable table = RuleTable::defaults();
    return table.classify(event);
}

Severity classify_event(const LogEvent& event, const RuleTable& rules) {
    return rules.classify(event);
}

ErrorReport compute_error(std::span<const LogEvent> events,
                          std::span<const std::uint32_t> assignments,
                          std::span<const SeverityLabel> labels, const RuleTable& rules) {
    if (assignments.size() != events.size())
        raise(Errc::LengthMismatch, std::to_string(events.size()) + " events but " +
                                        std::to_string(assignments.size()) + " assignments");
    if (labels.size() != 3)
        raise(Errc::LengthMismatch, "expected 3 severity labels");

    // cluster index -> cluster severity
    std::array<std::optional<Severity>, 3> by_cluster;
    for (const auto& label : labels) {
        if (label.cluster_index >= 3 || by_cluster[label.cluster_index])
            raise(Errc::LengthMismatch, "labels do not cover clusters 0..2 exactly once");
        by_cluster[label.cluster_index] = label.severity;
    }

    ErrorReport report;
    report.total = events.size();
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (assignments[i] >= 3)
            raise(Errc::LengthMismatch,
                  "assignment " + std::to_string(assignments[i]) + " out of range");
        const Severity target = rules.classify(events[i]);
        const Severity clustered = *by_cluster[assignments[i]];
        if (target != clustered)
            ++report.mismatches;
        ++report.confusion[severity_index(target)][severity_index(clustered)];
    }
    report.error_rate = events.empty()
                            ? 0.0
                            : static_cast<double>(report.mismatches) /
                                  static_cast<double>(report.total);
    return report;
}

} // namespace nfat
