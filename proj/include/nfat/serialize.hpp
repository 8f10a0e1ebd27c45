#pragma once

#include "nfat/criteria.hpp"
#include "nfat/evidence_store.hpp"
#include "nfat/kmeans.hpp"
#include "nfat/labeling.hpp"

#include <json.hpp>

#include <array>
#include <span>
#include <string>

namespace nfat {

// Fixed key order everywhere so stored documents are byte-stable:
// serialize(parse(text)) reproduces text exactly.
using ojson = nlohmann::ordered_json;

ojson to_json(const KMeansConfig& config);
KMeansConfig kmeans_config_from_json(const ojson& j);

ojson to_json(const KMeansResult& result);
KMeansResult kmeans_result_from_json(const ojson& j);

ojson to_json(const SeverityLabel& label);
ojson labels_to_json(std::span<const SeverityLabel> labels);
std::array<SeverityLabel, 3> labels_from_json(const ojson& j);

ojson to_json(const ErrorReport& report);
ErrorReport error_report_from_json(const ojson& j);

ojson to_json(const AnalysisRecord& record);
AnalysisRecord analysis_from_json(const ojson& j);

ojson to_json(const CaseRecord& record);
CaseRecord case_from_json(const ojson& j);

// Canonical document bytes: 2-space indent plus trailing newline.
std::string dump_document(const ojson& j);

// Parse wrapper that reports Errc::StoreCorrupt instead of leaking json
// exceptions.
ojson parse_document(const std::string& text, const std::string& what);

} // namespace nfat
