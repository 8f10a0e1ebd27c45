#pragma once

#include "nfat/criteria.hpp"
#include "nfat/kmeans.hpp"
#include "nfat/labeling.hpp"
#include "nfat/log_event.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nfat {

// Investigator-created evidence profile. Immutable after creation except
// profile_notes.
struct CaseRecord {
    std::string case_id; // non-empty, filesystem-safe
    std::string title;
    std::string investigator;
    Timestamp opened_at;
    std::string profile_notes;

    bool operator==(const CaseRecord&) const = default;
};

// One stored analysis: configuration plus the full result digest. Append-only
// once written.
struct AnalysisRecord {
    std::string analysis_id;
    std::string case_id;
    Timestamp created_at;
    KMeansConfig config;
    std::vector<std::uint64_t> event_ids; // analyzed population, aligned with assignments
    KMeansResult kmeans;
    std::array<SeverityLabel, 3> labels{};
    ErrorReport error;
};

struct CaseSummary {
    std::string case_id;
    std::string title;
    std::string investigator;
    Timestamp opened_at;
    std::uint64_t event_count = 0;
};

class EvidenceStore;

// Exclusive write handle for one case. Holds the case's advisory lock for
// its lifetime; all writes go through write-temp-then-rename so concurrent
// readers always see a consistent snapshot.
class CaseWriter {
public:
    CaseWriter(CaseWriter&& other) noexcept;
    CaseWriter& operator=(CaseWriter&& other) noexcept;
    CaseWriter(const CaseWriter&) = delete;
    CaseWriter& operator=(const CaseWriter&) = delete;
    ~CaseWriter();

    const std::string& case_id() const { return case_id_; }

    // Appends events to the case's events file. Throws DuplicateEventId if
    // any id collides with a stored event or within the batch; nothing is
    // written in that case.
    void append_events(std::span<const LogEvent> events);

    // Persists an analysis record. An empty analysis_id is assigned the next
    // free id; re-storing an existing id throws DuplicateAnalysis. Returns
    // the stored id.
    std::string store_analysis(AnalysisRecord record);

private:
    friend class EvidenceStore;
    CaseWriter(const EvidenceStore* store, std::string case_id, int lock_fd);

    const EvidenceStore* store_ = nullptr;
    std::string case_id_;
    int lock_fd_ = -1;
};

// File-backed, case-scoped evidence database. One directory per case holding
// a JSON manifest, a canonical events CSV and one JSON document per analysis.
// Single writer per case (advisory flock), any number of readers.
class EvidenceStore {
public:
    explicit EvidenceStore(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }

    // Throws InvalidIdentifier or DuplicateCase.
    std::string create_case(const CaseRecord& profile);

    bool case_exists(const std::string& case_id) const;
    CaseRecord load_case(const std::string& case_id) const;
    std::vector<CaseSummary> list_cases() const;

    // Stored events in file (ingest) order.
    std::vector<LogEvent> load_events(const std::string& case_id) const;

    // Events with time_from <= timestamp <= time_to matching the optional
    // protocol filter, ordered by timestamp descending then event_id
    // descending. Throws CaseNotFound, InvalidRange.
    std::vector<LogEvent> query_events(const std::string& case_id, Timestamp time_from,
                                       Timestamp time_to,
                                       std::optional<Protocol> protocol = {}) const;

    AnalysisRecord load_analysis(const std::string& case_id,
                                 const std::string& analysis_id) const;
    std::vector<std::string> list_analyses(const std::string& case_id) const;

    // Acquires the case's writer lock. Throws CaseNotFound, StoreLocked.
    CaseWriter open_writer(const std::string& case_id) const;

private:
    friend class CaseWriter;

    std::filesystem::path case_dir(const std::string& case_id) const;
    std::filesystem::path require_case_dir(const std::string& case_id) const;

    std::filesystem::path root_;
};

} // namespace nfat
