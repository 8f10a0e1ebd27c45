#pragma once

#include "nfat/errors.hpp"
#include "nfat/log_event.hpp"

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace nfat {

class EvidenceStore;

inline constexpr std::string_view kEventCsvHeader =
    "event_id,timestamp,src_addr,dst_addr,protocol,d_port,ip_len,tcp_flags";

// Parses one non-header CSV row into a validated LogEvent.
//
// Error classes:
//   MalformedLine   - wrong field count, non-numeric numerics, bad address text
//   FieldOutOfRange - numeric field outside its domain (port > 65535, ...)
//   UnknownProtocol - protocol column is neither TCP nor UDP
//   BadTimestamp    - timestamp column not a valid "YYYY-MM-DD HH:MM:SS"
//
// UDP rows always come back with tcp_flags = 0.
LogEvent parse_event_line(std::string_view line, std::size_t line_no);

// Canonical CSV row; parse_event_line(render_event_line(e)) == e.
std::string render_event_line(const LogEvent& event);

struct IngestError {
    std::size_t line_no = 0;
    Errc code = Errc::MalformedLine;
    std::string message;
};

struct IngestSummary {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::vector<IngestError> errors;
};

// Reads a CSV log file and persists every accepted event under case_id.
// Rejected lines are reported line by line, never silently dropped;
// accepted + rejected always equals the number of non-header lines.
// Throws FileNotFound, CaseNotFound, StoreLocked.
IngestSummary ingest_file(EvidenceStore& store, const std::filesystem::path& path,
                          const std::string& case_id);

} // namespace nfat
