#pragma once

#include "nfat/criteria.hpp"
#include "nfat/evidence_store.hpp"
#include "nfat/log_event.hpp"
#include "nfat/severity.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nfat {

struct ReportRow {
    Timestamp time;
    std::string src_addr;
    std::string dst_addr;
    std::uint16_t d_port = 0;
    Protocol protocol = Protocol::TCP;

    bool operator==(const ReportRow&) const = default;
};

struct AddrCount {
    std::string addr;
    std::uint64_t count = 0;

    bool operator==(const AddrCount&) const = default;
};

// Investigator-facing attack report: per-severity event listings, top
// source/target summaries and the criteria error statistics of the analysis
// it was built from.
struct AttackReport {
    std::string case_id;
    std::string analysis_id;
    Timestamp generated_at;
    // severity-indexed; rows sorted by time descending, then event recency
    std::array<std::vector<ReportRow>, 3> sections{};
    std::vector<AddrCount> top_sources; // count descending, address ascending
    std::vector<AddrCount> top_targets;
    std::array<std::uint64_t, 3> severity_counts{};
    std::optional<ErrorReport> error;

    bool operator==(const AttackReport&) const = default;
};

enum class ReportFormat { Text, Json };

// Joins a stored analysis with its analyzed events. Every analyzed event
// lands in exactly one severity section, decided by its cluster's label.
AttackReport build_attack_report(const EvidenceStore& store, const std::string& case_id,
                                 const std::string& analysis_id, std::size_t top_n = 10);

std::string render_text(const AttackReport& report);
std::string render_json(const AttackReport& report);
std::string render(const AttackReport& report, ReportFormat format);

// Inverse of render_json; reconstructs every field.
AttackReport parse_report_json(const std::string& text);

} // namespace nfat
