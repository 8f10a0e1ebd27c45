#include "nfat/serialize.hpp"

#include "nfat/errors.hpp"

namespace nfat {

namespace {

Vec4 vec4_from_json(const ojson& j) {
    if (!j.is_array() || j.size() != 4)
        raise(Errc::StoreCorrupt, "centroid is not a 4-vector");
    Vec4 v{};
    for (std::size_t d = 0; d < 4; ++d)
        v[d] = j[d].get<double>();
    return v;
}

} // namespace

ojson to_json(const KMeansConfig& config) {
    ojson j;
    j["k"] = config.k;
    j["max_iterations"] = config.max_iterations;
    j["n_restarts"] = config.n_restarts;
    j["seed"] = config.seed;
    return j;
}

KMeansConfig kmeans_config_from_json(const ojson& j) {
    KMeansConfig config;
    config.k = j.at("k").get<std::size_t>();
    config.max_iterations = j.at("max_iterations").get<std::size_t>();
    config.n_restarts = j.at("n_restarts").get<std::size_t>();
    config.seed = j.at("seed").get<std::uint64_t>();
    return config;
}

ojson to_json(const KMeansResult& result) {
    ojson j;
    j["centroids"] = result.centroids;
    j["assignments"] = result.assignments;
    j["per_cluster_sse"] = result.per_cluster_sse;
    j["total_sse"] = result.total_sse;
    j["iterations"] = result.iterations;
    j["converged"] = result.converged;
    j["sse_history"] = result.sse_history;
    return j;
}

KMeansResult kmeans_result_from_json(const ojson& j) {
    KMeansResult result;
    for (const auto& c : j.at("centroids"))
        result.centroids.push_back(vec4_from_json(c));
    result.assignments = j.at("assignments").get<std::vector<std::uint32_t>>();
    result.per_cluster_sse = j.at("per_cluster_sse").get<std::vector<double>>();
    result.total_sse = j.at("total_sse").get<double>();
    result.iterations = j.at("iterations").get<std::size_t>();
    result.converged = j.at("converged").get<bool>();
    result.sse_history = j.at("sse_history").get<std::vector<double>>();
    return result;
}

ojson to_json(const SeverityLabel& label) {
    ojson j;
    j["severity"] = severity_key(label.severity);
    j["cluster"] = label.cluster_index;
    j["score"] = label.score;
    return j;
}

ojson labels_to_json(std::span<const SeverityLabel> labels) {
    ojson j = ojson::array();
    for (const auto& label : labels)
        j.push_back(to_json(label));
    return j;
}

std::array<SeverityLabel, 3> labels_from_json(const ojson& j) {
    if (!j.is_array() || j.size() != 3)
        raise(Errc::StoreCorrupt, "expected 3 severity labels");
    std::array<SeverityLabel, 3> labels{};
    for (std::size_t i = 0; i < 3; ++i) {
        const auto severity = severity_from_key(j[i].at("severity").get<std::string>());
        if (!severity)
            raise(Errc::StoreCorrupt, "unknown severity key in labels");
        labels[i].severity = *severity;
        labels[i].cluster_index = j[i].at("cluster").get<std::uint32_t>();
        if (labels[i].cluster_index >= 3)
            raise(Errc::StoreCorrupt, "label cluster index out of range");
        labels[i].score = j[i].at("score").get<double>();
    }
    return labels;
}

ojson to_json(const ErrorReport& report) {
    ojson j;
    j["total"] = report.total;
    j["mismatches"] = report.mismatches;
    j["error_rate"] = report.error_rate;
    j["confusion"] = report.confusion;
    return j;
}

ErrorReport error_report_from_json(const ojson& j) {
    ErrorReport report;
    report.total = j.at("total").get<std::uint64_t>();
    report.mismatches = j.at("mismatches").get<std::uint64_t>();
    report.error_rate = j.at("error_rate").get<double>();
    const auto& m = j.at("confusion");
    if (!m.is_array() || m.size() != 3)
        raise(Errc::StoreCorrupt, "confusion matrix is not 3x3");
    for (std::size_t r = 0; r < 3; ++r) {
        if (!m[r].is_array() || m[r].size() != 3)
            raise(Errc::StoreCorrupt, "confusion matrix is not 3x3");
        for (std::size_t c = 0; c < 3; ++c)
            report.confusion[r][c] = m[r][c].get<std::uint64_t>();
    }
    return report;
}

ojson to_json(const AnalysisRecord& record) {
    ojson j;
    j["analysis_id"] = record.analysis_id;
    j["case_id"] = record.case_id;
    j["created_at"] = record.created_at.to_string();
    j["config"] = to_json(record.config);
    j["event_ids"] = record.event_ids;
    j["kmeans"] = to_json(record.kmeans);
    j["labels"] = labels_to_json(record.labels);
    j["error"] = to_json(record.error);
    return j;
}

AnalysisRecord analysis_from_json(const ojson& j) {
    AnalysisRecord record;
    record.analysis_id = j.at("analysis_id").get<std::string>();
    record.case_id = j.at("case_id").get<std::string>();
    record.created_at = Timestamp::parse(j.at("created_at").get<std::string>());
    record.config = kmeans_config_from_json(j.at("config"));
    record.event_ids = j.at("event_ids").get<std::vector<std::uint64_t>>();
    record.kmeans = kmeans_result_from_json(j.at("kmeans"));
    record.labels = labels_from_json(j.at("labels"));
    record.error = error_report_from_json(j.at("error"));
    return record;
}

ojson to_json(const CaseRecord& record) {
    ojson j;
    j["case_id"] = record.case_id;
    j["title"] = record.title;
    j["investigator"] = record.investigator;
    j["opened_at"] = record.opened_at.to_string();
    j["profile_notes"] = record.profile_notes;
    return j;
}

CaseRecord case_from_json(const ojson& j) {
    CaseRecord record;
    record.case_id = j.at("case_id").get<std::string>();
    record.title = j.at("title").get<std::string>();
    record.investigator = j.at("investigator").get<std::string>();
    record.opened_at = Timestamp::parse(j.at("opened_at").get<std::string>());
    record.profile_notes = j.at("profile_notes").get<std::string>();
    return record;
}

std::string dump_document(const ojson& j) { return j.dump(2) + "\n"; }

ojson parse_document(const std::string& text, const std::string& what) {
    try {
        return ojson::parse(text);
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::StoreCorrupt, what + ": " + e.what());
    }
}

} // namespace nfat
