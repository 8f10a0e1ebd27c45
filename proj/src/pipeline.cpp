#include "nfat/pipeline.hpp"

#include "nfat/errors.hpp"
#include "nfat/features.hpp"
#include "nfat/labeling.hpp"

namespace nfat {

PipelineRun run_pipeline(EvidenceStore& store, const std::string& case_id,
                         const KMeansConfig& config, const RuleTable& rules, Execution exec) {
    if (config.k == 0 || config.max_iterations == 0 || config.n_restarts == 0)
        raise(Errc::InvalidConfig, "k, max_iterations and n_restarts must all be >= 1");
    if (config.k != 3)
        raise(Errc::WrongClusterCount,
              "analysis stores exactly 3 severity labels; k must be 3, got " +
                  std::to_string(config.k));

    // Writer lock held for the whole run; the only write is the final atomic
    // store_analysis, so a failed run leaves nothing behind.
    auto writer = store.open_writer(case_id);

    const auto events =
        store.query_events(case_id, Timestamp::min_value(), Timestamp::max_value());
    if (events.size() < config.k)
        raise(Errc::TooFewPoints, "case '" + case_id + "' has " + std::to_string(events.size()) +
                                      " events, need at least " + std::to_string(config.k));

    const auto features = to_feature_vectors(events);
    auto kmeans = run_restarts(features, config, exec);
    const auto labels = label_clusters(kmeans);
    const auto error = compute_error(events, kmeans.assignments, labels, rules);

    PipelineRun run;
    run.case_id = case_id;
    run.config = config;
    run.input_event_count = events.size();
    run.error_rate = error.error_rate;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto cluster = kmeans.assignments[i];
        for (const auto& label : labels)
            if (label.cluster_index == cluster)
                ++run.severity_counts[severity_index(label.severity)];
    }

    AnalysisRecord record;
    record.case_id = case_id;
    record.created_at = Timestamp::now();
    record.config = config;
    record.event_ids.reserve(features.size());
    for (const auto& fv : features)
        record.event_ids.push_back(fv.event_id);
    record.kmeans = std::move(kmeans);
    record.labels = labels;
    record.error = error;

    run.analysis_id = writer.store_analysis(std::move(record));
    return run;
}

} // namespace nfat
