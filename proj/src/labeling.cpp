#include "nfat/labeling.hpp"

#include "nfat/errors.hpp"

#include <algorithm>

namespace nfat {

double cluster_score(std::span<const double> centroid) {
    double acc = 0.0;
    for (double c : centroid)
        acc += c * c;
    return acc;
}

double cluster_score(const Vec4& centroid) {
    return cluster_score(std::span<const double>(centroid.data(), centroid.size()));
}

std::array<SeverityLabel, 3> label_clusters(const KMeansResult& result) {
    if (result.centroids.size() != 3)
        raise(Errc::WrongClusterCount,
              "severity labeling needs exactly 3 clusters, got " +
                  std::to_string(result.centroids.size()));

    std::array<double, 3> scores{};
    for (std::size_t j = 0; j < 3; ++j)
        scores[j] = cluster_score(result.centroids[j]);

    std::array<std::uint32_t, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (scores[a] != scores[b])
            return scores[a] > scores[b];
        return a < b; // tied scores: lower cluster index takes the more severe label
    });

    std::array<SeverityLabel, 3> labels{};
    for (std::size_t rank = 0; rank < 3; ++rank)
        labels[rank] = {kAllSeverities[rank], order[rank], scores[order[rank]]};
    return labels;
}

} // namespace nfat
