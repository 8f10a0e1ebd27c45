#include "nfat/ingest.hpp"

#include "nfat/evidence_store.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <unordered_set>

namespace nfat {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
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

bool is_ipv4(std::string_view s) {
    unsigned octets = 0;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find('.', start);
        const std::string_view part =
            pos == std::string_view::npos ? s.substr(start) : s.substr(start, pos - start);
        if (part.empty() || part.size() > 3)
            return false;
        unsigned value = 0;
        for (char c : part) {
            if (c < '0' || c > '9')
                return false;
            value = value * 10 + static_cast<unsigned>(c - '0');
        }
        if (value > 255)
            return false;
        ++octets;
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return octets == 4;
}

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r')
        line.remove_suffix(1);
    return line;
}

[[noreturn]] void fail(Errc code, std::size_t line_no, const std::string& what) {
    raise(code, "line " + std::to_string(line_no) + ": " + what);
}

} // namespace

LogEvent parse_event_line(std::string_view line, std::size_t line_no) {
    line = strip_cr(line);
    const auto fields = split_fields(line);
    if (line.empty() || fields.size() != 8)
        fail(Errc::MalformedLine, line_no,
             "expected 8 comma-separated fields, got " +
                 std::to_string(line.empty() ? 0 : fields.size()));

    LogEvent event;

    const auto id = parse_u64(fields[0]);
    if (!id)
        fail(Errc::MalformedLine, line_no, "event_id '" + std::string(fields[0]) + "' is not a number");
    if (*id == 0)
        fail(Errc::FieldOutOfRange, line_no, "event_id must be positive");
    event.event_id = *id;

    try {
        event.timestamp = Timestamp::parse(fields[1]);
    } catch (const Error& e) {
        fail(Errc::BadTimestamp, line_no, e.what());
    }

    if (!is_ipv4(fields[2]))
        fail(Errc::MalformedLine, line_no, "src_addr '" + std::string(fields[2]) + "' is not an IPv4 address");
    if (!is_ipv4(fields[3]))
        fail(Errc::MalformedLine, line_no, "dst_addr '" + std::string(fields[3]) + "' is not an IPv4 address");
    event.src_addr = std::string(fields[2]);
    event.dst_addr = std::string(fields[3]);

    const auto protocol = parse_protocol(fields[4]);
    if (!protocol)
        fail(Errc::UnknownProtocol, line_no, "protocol '" + std::string(fields[4]) + "' is not TCP or UDP");
    event.protocol = *protocol;

    const auto port = parse_u64(fields[5]);
    if (!port)
        fail(Errc::MalformedLine, line_no, "d_port '" + std::string(fields[5]) + "' is not a number");
    if (*port > 65535)
        fail(Errc::FieldOutOfRange, line_no, "d_port " + std::to_string(*port) + " exceeds 65535");
    event.d_port = static_cast<std::uint16_t>(*port);

    const auto ip_len = parse_u64(fields[6]);
    if (!ip_len)
        fail(Errc::MalformedLine, line_no, "ip_len '" + std::string(fields[6]) + "' is not a number");
    if (*ip_len > UINT32_MAX)
        fail(Errc::FieldOutOfRange, line_no, "ip_len " + std::to_string(*ip_len) + " too large");
    event.ip_len = static_cast<std::uint32_t>(*ip_len);

    const auto flags = parse_u64(fields[7]);
    if (!flags)
        fail(Errc::MalformedLine, line_no, "tcp_flags '" + std::string(fields[7]) + "' is not a number");
    if (*flags > 255)
        fail(Errc::FieldOutOfRange, line_no, "tcp_flags " + std::to_string(*flags) + " exceeds 255");
    event.tcp_flags = static_cast<std::uint8_t>(*flags);

    // UDP carries no flag byte.
    if (event.protocol == Protocol::UDP)
        event.tcp_flags = 0;

    return event;
}

std::string render_event_line(const LogEvent& event) {
    std::string out;
    out.reserve(96);
    out += std::to_string(event.event_id);
    out += ',';
    out += event.timestamp.to_string();
    out += ',';
    out += event.src_addr;
    out += ',';
    out += event.dst_addr;
    out += ',';
    out += to_string(event.protocol);
    out += ',';
    out += std::to_string(event.d_port);
    out += ',';
    out += std::to_string(event.ip_len);
    out += ',';
    out += std::to_string(event.tcp_flags);
    return out;
}

IngestSummary ingest_file(EvidenceStore& store, const std::filesystem::path& path,
                          const std::string& case_id) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(Errc::FileNotFound, "cannot open input file '" + path.string() + "'");

    auto writer = store.open_writer(case_id);

    std::unordered_set<std::uint64_t> seen_ids;
    for (const auto& existing : store.load_events(case_id))
        seen_ids.insert(existing.event_id);

    IngestSummary summary;
    std::vector<LogEvent> batch;
    std::string line;
    std::size_t line_no = 0;
    bool first_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view view = strip_cr(line);
        if (first_line) {
            first_line = false;
            if (view == kEventCsvHeader)
                continue;
        }
        try {
            LogEvent event = parse_event_line(view, line_no);
            if (!seen_ids.insert(event.event_id).second)
                fail(Errc::DuplicateEventId, line_no,
                     "duplicate event_id " + std::to_string(event.event_id));
            batch.push_back(std::move(event));
            ++summary.accepted;
        } catch (const Error& e) {
            ++summary.rejected;
            summary.errors.push_back({line_no, e.code(), e.what()});
        }
    }

    writer.append_events(batch);
    return summary;
}

} // namespace nfat
