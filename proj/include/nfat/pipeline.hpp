#pragma once

#include "nfat/criteria.hpp"
#include "nfat/evidence_store.hpp"
#include "nfat/kmeans.hpp"

#include <array>
#include <cstdint>
#include <string>

namespace nfat {

struct PipelineRun {
    std::string case_id;
    KMeansConfig config;
    std::uint64_t input_event_count = 0;
    std::string analysis_id;
    std::array<std::uint64_t, 3> severity_counts{}; // by cluster-derived severity
    double error_rate = 0.0;
};

// Full analysis flow over a case's stored events: featurize -> clustered
// restarts -> severity labeling -> criteria error -> persist. Holds the
// case's writer lock for the duration; either the complete analysis record
// is stored or nothing is written. Deterministic given (stored events,
// config). Requires k == 3 (the stored digest labels exactly 3 clusters)
// and at least k events.
PipelineRun run_pipeline(EvidenceStore& store, const std::string& case_id,
                         const KMeansConfig& config,
                         const RuleTable& rules = RuleTable::defaults(),
                         Execution exec = Execution::Parallel);

} // namespace nfat
