#pragma once

#include "nfat/kmeans.hpp"
#include "nfat/severity.hpp"

#include <array>
#include <cstdint>
#include <span>

namespace nfat {

struct SeverityLabel {
    Severity severity = Severity::NotDangerous;
    std::uint32_t cluster_index = 0;
    double score = 0.0; // centroid dotted with itself

    bool operator==(const SeverityLabel&) const = default;
};

// Dot product of a centroid with itself (its squared Euclidean norm), the
// scalar used to rank clusters by severity.
double cluster_score(std::span<const double> centroid);
double cluster_score(const Vec4& centroid);

// Ranks exactly 3 centroids: highest score -> Dangerous, middle ->
// RatherDangerous, lowest -> NotDangerous. Score ties give the lower cluster
// index the more severe label. Returned in severity order. Depends only on
// the centroids; throws WrongClusterCount when k != 3.
std::array<SeverityLabel, 3> label_clusters(const KMeansResult& result);

} // namespace nfat
