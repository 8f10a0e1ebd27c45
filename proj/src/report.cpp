#include "nfat/report.hpp"

#include "nfat/errors.hpp"
#include "nfat/serialize.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <unordered_map>

namespace nfat {

namespace {

std::vector<AddrCount> top_addrs(const std::map<std::string, std::uint64_t>& counts,
                                 std::size_t top_n) {
    std::vector<AddrCount> out;
    out.reserve(counts.size());
    for (const auto& [addr, count] : counts)
        out.push_back({addr, count});
    std::sort(out.begin(), out.end(), [](const AddrCount& a, const AddrCount& b) {
        if (a.count != b.count)
            return a.count > b.count;
        return a.addr < b.addr;
    });
    if (out.size() > top_n)
        out.resize(top_n);
    return out;
}

void append_row(std::string& out, std::string_view time, std::string_view src,
                std::string_view dst, std::string_view protocol, std::string_view port) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%-20.*s %-16.*s %-16.*s %-9.*s %6.*s\n",
                  static_cast<int>(time.size()), time.data(), static_cast<int>(src.size()),
                  src.data(), static_cast<int>(dst.size()), dst.data(),
                  static_cast<int>(protocol.size()), protocol.data(),
                  static_cast<int>(port.size()), port.data());
    out += buf;
}

ojson row_to_json(const ReportRow& row) {
    ojson j;
    j["time"] = row.time.to_string();
    j["src_addr"] = row.src_addr;
    j["dst_addr"] = row.dst_addr;
    j["d_port"] = row.d_port;
    j["protocol"] = to_string(row.protocol);
    return j;
}

ReportRow row_from_json(const ojson& j) {
    ReportRow row;
    row.time = Timestamp::parse(j.at("time").get<std::string>());
    row.src_addr = j.at("src_addr").get<std::string>();
    row.dst_addr = j.at("dst_addr").get<std::string>();
    row.d_port = j.at("d_port").get<std::uint16_t>();
    const auto protocol = parse_protocol(j.at("protocol").get<std::string>());
    if (!protocol)
        raise(Errc::StoreCorrupt, "report row has unknown protocol");
    row.protocol = *protocol;
    return row;
}

ojson addr_counts_to_json(const std::vector<AddrCount>& counts) {
    ojson j = ojson::array();
    for (const auto& ac : counts) {
        ojson entry;
        entry["addr"] = ac.addr;
        entry["count"] = ac.count;
        j.push_back(entry);
    }
    return j;
}

std::vector<AddrCount> addr_counts_from_json(const ojson& j) {
    std::vector<AddrCount> out;
    for (const auto& entry : j)
        out.push_back({entry.at("addr").get<std::string>(), entry.at("count").get<std::uint64_t>()});
    return out;
}

} // namespace

AttackReport build_attack_report(const EvidenceStore& store, const std::string& case_id,
                                 const std::string& analysis_id, std::size_t top_n) {
    const auto analysis = store.load_analysis(case_id, analysis_id);
    const auto events = store.load_events(case_id);

    std::unordered_map<std::uint64_t, const LogEvent*> by_id;
    by_id.reserve(events.size());
    for (const auto& e : events)
        by_id.emplace(e.event_id, &e);

    // cluster -> severity from the stored labels
    std::array<Severity, 3> cluster_severity{};
    for (const auto& label : analysis.labels)
        cluster_severity[label.cluster_index] = label.severity;

    AttackReport report;
    report.case_id = case_id;
    report.analysis_id = analysis_id;
    report.generated_at = Timestamp::now();
    report.error = analysis.error;

    std::map<std::string, std::uint64_t> sources;
    std::map<std::string, std::uint64_t> targets;

    if (analysis.event_ids.size() != analysis.kmeans.assignments.size())
        raise(Errc::StoreCorrupt, "analysis event ids and assignments disagree");

    for (std::size_t i = 0; i < analysis.event_ids.size(); ++i) {
        const auto it = by_id.find(analysis.event_ids[i]);
        if (it == by_id.end())
            raise(Errc::StoreCorrupt, "analysis references event " +
                                          std::to_string(analysis.event_ids[i]) +
                                          " missing from the case");
        const LogEvent& e = *it->second;
        if (analysis.kmeans.assignments[i] >= 3)
            raise(Errc::StoreCorrupt, "analysis assignment out of range");
        const Severity severity = cluster_severity[analysis.kmeans.assignments[i]];
        report.sections[severity_index(severity)].push_back(
            {e.timestamp, e.src_addr, e.dst_addr, e.d_port, e.protocol});
        ++report.severity_counts[severity_index(severity)];
        ++sources[e.src_addr];
        ++targets[e.dst_addr];
    }

    for (auto& section : report.sections)
        std::sort(section.begin(), section.end(), [](const ReportRow& a, const ReportRow& b) {
            if (a.time != b.time)
                return a.time > b.time;
            if (a.src_addr != b.src_addr)
                return a.src_addr < b.src_addr;
            return a.d_port < b.d_port;
        });

    report.top_sources = top_addrs(sources, top_n);
    report.top_targets = top_addrs(targets, top_n);
    return report;
}

std::string render_text(const AttackReport& report) {
    std::string out;
    out += "Case:      " + report.case_id + "\n";
    out += "Analysis:  " + report.analysis_id + "\n";
    out += "Generated: " + report.generated_at.to_string() + "\n";

    std::uint64_t total = 0;
    for (auto c : report.severity_counts)
        total += c;
    out += "Events:    " + std::to_string(total) + "\n";
    if (report.error) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "Error rate: %.4f (%llu/%llu mismatches vs criteria)\n",
                      report.error->error_rate,
                      static_cast<unsigned long long>(report.error->mismatches),
                      static_cast<unsigned long long>(report.error->total));
        out += buf;
    }

    for (Severity s : kAllSeverities) {
        const auto& section = report.sections[severity_index(s)];
        out += "\n== ";
        out += severity_display(s);
        out += " (" + std::to_string(section.size()) + " events) ==\n";
        append_row(out, "Time", "Source Address", "Dest. Address", "Protocol", "Port");
        for (const auto& row : section)
            append_row(out, row.time.to_string(), row.src_addr, row.dst_addr,
                       to_string(row.protocol), std::to_string(row.d_port));
    }

    out += "\n== Top sources ==\n";
    for (const auto& ac : report.top_sources)
        out += ac.addr + "  " + std::to_string(ac.count) + "\n";
    out += "\n== Top targets ==\n";
    for (const auto& ac : report.top_targets)
        out += ac.addr + "  " + std::to_string(ac.count) + "\n";
    return out;
}

std::string render_json(const AttackReport& report) {
    ojson j;
    j["case_id"] = report.case_id;
    j["analysis_id"] = report.analysis_id;
    j["generated_at"] = report.generated_at.to_string();
    ojson counts;
    for (Severity s : kAllSeverities)
        counts[severity_key(s)] = report.severity_counts[severity_index(s)];
    j["severity_counts"] = counts;
    ojson sections;
    for (Severity s : kAllSeverities) {
        ojson rows = ojson::array();
        for (const auto& row : report.sections[severity_index(s)])
            rows.push_back(row_to_json(row));
        sections[severity_key(s)] = rows;
    }
    j["sections"] = sections;
    j["top_sources"] = addr_counts_to_json(report.top_sources);
    j["top_targets"] = addr_counts_to_json(report.top_targets);
    j["error"] = report.error ? to_json(*report.error) : ojson(nullptr);
    return dump_document(j);
}

std::string render(const AttackReport& report, ReportFormat format) {
    return format == ReportFormat::Text ? render_text(report) : render_json(report);
}

AttackReport parse_report_json(const std::string& text) {
    const auto j = parse_document(text, "attack report");
    try {
        AttackReport report;
        report.case_id = j.at("case_id").get<std::string>();
        report.analysis_id = j.at("analysis_id").get<std::string>();
        report.generated_at = Timestamp::parse(j.at("generated_at").get<std::string>());
        for (Severity s : kAllSeverities) {
            report.severity_counts[severity_index(s)] =
                j.at("severity_counts").at(severity_key(s)).get<std::uint64_t>();
            for (const auto& row : j.at("sections").at(severity_key(s)))
                report.sections[severity_index(s)].push_back(row_from_json(row));
        }
        report.top_sources = addr_counts_from_json(j.at("top_sources"));
        report.top_targets = addr_counts_from_json(j.at("top_targets"));
        if (!j.at("error").is_null())
            report.error = error_report_from_json(j.at("error"));
        return report;
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::StoreCorrupt, std::string("attack report: ") + e.what());
    }
}

} // namespace nfat
