#include "nfat/evidence_store.hpp"

#include "nfat/ingest.hpp"
#include "nfat/serialize.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

namespace nfat {

namespace {

constexpr std::string_view kManifestFile = "case.json";
constexpr std::string_view kEventsFile = "events.csv";
constexpr std::string_view kAnalysesDir = "analyses";
constexpr std::string_view kLockFile = ".lock";

bool valid_case_id(const std::string& id) {
    if (id.empty() || id.size() > 64 || id == "." || id == "..")
        return false;
    for (char c : id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
        if (!ok)
            return false;
    }
    return true;
}

std::string read_file(const std::filesystem::path& path, Errc missing, const std::string& what) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(missing, what + " '" + path.string() + "' not found");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// All writes land via temp file + rename: a concurrent reader sees either the
// old snapshot or the new one, never a torn file.
void atomic_write(const std::filesystem::path& target, std::string_view content) {
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            raise(Errc::IoError, "cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out)
            raise(Errc::IoError, "short write to '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, target);
}

// Manifest document = case profile + store-kept integrity counters.
ojson manifest_json(const CaseRecord& record, std::uint64_t event_count,
                    std::uint64_t events_bytes) {
    ojson j = to_json(record);
    j["timezone"] = "local";
    ojson integrity;
    integrity["event_count"] = event_count;
    integrity["events_bytes"] = events_bytes;
    j["integrity"] = integrity;
    return j;
}

std::string analysis_file_name(const std::string& analysis_id) { return analysis_id + ".json"; }

bool valid_analysis_id(const std::string& id) {
    if (id.empty() || id.size() > 64)
        return false;
    for (char c : id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '-' || c == '_';
        if (!ok)
            return false;
    }
    return true;
}

} // namespace

EvidenceStore::EvidenceStore(std::filesystem::path root) : root_(std::move(root)) {
    std::filesystem::create_directories(root_);
}

std::filesystem::path EvidenceStore::case_dir(const std::string& case_id) const {
    return root_ / case_id;
}

std::filesystem::path EvidenceStore::require_case_dir(const std::string& case_id) const {
    if (!valid_case_id(case_id) || !case_exists(case_id))
        raise(Errc::CaseNotFound, "case '" + case_id + "' not found");
    return case_dir(case_id);
}

std::string EvidenceStore::create_case(const CaseRecord& profile) {
    if (!valid_case_id(profile.case_id))
        raise(Errc::InvalidIdentifier,
              "case id '" + profile.case_id +
                  "' is not a valid identifier (use [A-Za-z0-9._-], max 64 chars)");
    const auto dir = case_dir(profile.case_id);
    if (std::filesystem::exists(dir))
        raise(Errc::DuplicateCase, "case '" + profile.case_id + "' already exists");

    std::filesystem::create_directories(dir / kAnalysesDir);
    const std::string events(kEventCsvHeader);
    atomic_write(dir / kEventsFile, events + "\n");
    atomic_write(dir / kManifestFile,
                 dump_document(manifest_json(profile, 0, events.size() + 1)));
    return profile.case_id;
}

bool EvidenceStore::case_exists(const std::string& case_id) const {
    return valid_case_id(case_id) &&
           std::filesystem::exists(case_dir(case_id) / kManifestFile);
}

CaseRecord EvidenceStore::load_case(const std::string& case_id) const {
    const auto dir = require_case_dir(case_id);
    const auto doc = parse_document(read_file(dir / kManifestFile, Errc::CaseNotFound, "case"),
                                    "case manifest");
    try {
        return case_from_json(doc);
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::StoreCorrupt, std::string("case manifest: ") + e.what());
    }
}

std::vector<CaseSummary> EvidenceStore::list_cases() const {
    std::vector<CaseSummary> out;
    for (const auto& entry : std::filesystem::directory_iterator(root_)) {
        if (!entry.is_directory())
            continue;
        const auto id = entry.path().filename().string();
        if (!case_exists(id))
            continue;
        const auto record = load_case(id);
        const auto events = load_events(id);
        out.push_back({record.case_id, record.title, record.investigator, record.opened_at,
                       events.size()});
    }
    std::sort(out.begin(), out.end(),
              [](const CaseSummary& a, const CaseSummary& b) { return a.case_id < b.case_id; });
    return out;
}

std::vector<LogEvent> EvidenceStore::load_events(const std::string& case_id) const {
    const auto dir = require_case_dir(case_id);
    const auto path = dir / kEventsFile;
    if (!std::filesystem::exists(path))
        return {};

    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(Errc::IoError, "cannot read '" + path.string() + "'");

    std::vector<LogEvent> events;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1)
            continue; // canonical header
        if (line.empty())
            continue;
        try {
            events.push_back(parse_event_line(line, line_no));
        } catch (const Error& e) {
            raise(Errc::StoreCorrupt,
                  "events file for case '" + case_id + "' is corrupt: " + e.what());
        }
    }
    return events;
}

std::vector<LogEvent> EvidenceStore::query_events(const std::string& case_id, Timestamp time_from,
                                                  Timestamp time_to,
                                                  std::optional<Protocol> protocol) const {
    if (time_from > time_to)
        raise(Errc::InvalidRange, "time_from is after time_to");
    auto events = load_events(case_id);
    std::erase_if(events, [&](const LogEvent& e) {
        if (e.timestamp < time_from || e.timestamp > time_to)
            return true;
        return protocol && e.protocol != *protocol;
    });
    // newest first, matching the report listings
    std::sort(events.begin(), events.end(), [](const LogEvent& a, const LogEvent& b) {
        if (a.timestamp != b.timestamp)
            return a.timestamp > b.timestamp;
        return a.event_id > b.event_id;
    });
    return events;
}

AnalysisRecord EvidenceStore::load_analysis(const std::string& case_id,
                                            const std::string& analysis_id) const {
    const auto dir = require_case_dir(case_id);
    if (!valid_analysis_id(analysis_id))
        raise(Errc::AnalysisNotFound, "analysis '" + analysis_id + "' not found");
    const auto path = dir / kAnalysesDir / analysis_file_name(analysis_id);
    const auto doc =
        parse_document(read_file(path, Errc::AnalysisNotFound, "analysis"), "analysis record");
    try {
        return analysis_from_json(doc);
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::StoreCorrupt, std::string("analysis record: ") + e.what());
    }
}

std::vector<std::string> EvidenceStore::list_analyses(const std::string& case_id) const {
    const auto dir = require_case_dir(case_id) / kAnalysesDir;
    std::vector<std::string> ids;
    if (std::filesystem::exists(dir)) {
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            const auto name = entry.path().filename().string();
            if (entry.is_regular_file() && name.ends_with(".json"))
                ids.push_back(name.substr(0, name.size() - 5));
        }
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

CaseWriter EvidenceStore::open_writer(const std::string& case_id) const {
    const auto dir = require_case_dir(case_id);
    const auto lock_path = dir / kLockFile;
    const int fd = ::open(lock_path.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
    if (fd < 0)
        raise(Errc::IoError, "cannot open lock file '" + lock_path.string() + "'");
    if (::flock(fd, LOCK_EX | LOCK_NB) != 0) {
        ::close(fd);
        raise(Errc::StoreLocked, "case '" + case_id + "' is locked by another writer");
    }
    return CaseWriter(this, case_id, fd);
}

CaseWriter::CaseWriter(const EvidenceStore* store, std::string case_id, int lock_fd)
    : store_(store), case_id_(std::move(case_id)), lock_fd_(lock_fd) {}

CaseWriter::CaseWriter(CaseWriter&& other) noexcept
    : store_(other.store_), case_id_(std::move(other.case_id_)), lock_fd_(other.lock_fd_) {
    other.lock_fd_ = -1;
    other.store_ = nullptr;
}

CaseWriter& CaseWriter::operator=(CaseWriter&& other) noexcept {
    if (this != &other) {
        if (lock_fd_ >= 0) {
            ::flock(lock_fd_, LOCK_UN);
            ::close(lock_fd_);
        }
        store_ = other.store_;
        case_id_ = std::move(other.case_id_);
        lock_fd_ = other.lock_fd_;
        other.lock_fd_ = -1;
        other.store_ = nullptr;
    }
    return *this;
}

CaseWriter::~CaseWriter() {
    if (lock_fd_ >= 0) {
        ::flock(lock_fd_, LOCK_UN);
        ::close(lock_fd_);
    }
}

void CaseWriter::append_events(std::span<const LogEvent> events) {
    const auto dir = store_->case_dir(case_id_);

    const auto existing = store_->load_events(case_id_);
    std::unordered_set<std::uint64_t> ids;
    for (const auto& e : existing)
        ids.insert(e.event_id);
    for (const auto& e : events) {
        if (e.event_id == 0)
            raise(Errc::FieldOutOfRange, "event_id must be positive");
        if (e.protocol == Protocol::UDP && e.tcp_flags != 0)
            raise(Errc::FieldOutOfRange, "UDP event " + std::to_string(e.event_id) +
                                             " carries nonzero tcp_flags");
        if (!ids.insert(e.event_id).second)
            raise(Errc::DuplicateEventId,
                  "event_id " + std::to_string(e.event_id) + " already stored in case '" +
                      case_id_ + "'");
    }

    std::string content(kEventCsvHeader);
    content += '\n';
    for (const auto& e : existing) {
        content += render_event_line(e);
        content += '\n';
    }
    for (const auto& e : events) {
        content += render_event_line(e);
        content += '\n';
    }
    atomic_write(dir / kEventsFile, content);

    const auto record = store_->load_case(case_id_);
    atomic_write(dir / kManifestFile,
                 dump_document(manifest_json(record, existing.size() + events.size(),
                                             content.size())));
}

std::string CaseWriter::store_analysis(AnalysisRecord record) {
    const auto analyses = store_->list_analyses(case_id_);
    if (record.analysis_id.empty()) {
        // next free sequential id
        std::uint64_t next = 1;
        for (const auto& id : analyses) {
            if (id.size() > 1 && id[0] == 'a') {
                std::uint64_t num = 0;
                bool numeric = true;
                for (char c : id.substr(1)) {
                    if (c < '0' || c > '9') {
                        numeric = false;
                        break;
                    }
                    num = num * 10 + static_cast<std::uint64_t>(c - '0');
                }
                if (numeric && num >= next)
                    next = num + 1;
            }
        }
        char buf[16];
        std::snprintf(buf, sizeof(buf), "a%04llu", static_cast<unsigned long long>(next));
        record.analysis_id = buf;
    }
    if (!valid_analysis_id(record.analysis_id))
        raise(Errc::InvalidIdentifier, "analysis id '" + record.analysis_id + "' is not valid");

    record.case_id = case_id_;
    const auto path =
        store_->case_dir(case_id_) / kAnalysesDir / analysis_file_name(record.analysis_id);
    if (std::filesystem::exists(path))
        raise(Errc::DuplicateAnalysis,
              "analysis '" + record.analysis_id + "' already stored (records are append-only)");

    std::filesystem::create_directories(path.parent_path());
    atomic_write(path, dump_document(to_json(record)));
    return record.analysis_id;
}

} // namespace nfat
