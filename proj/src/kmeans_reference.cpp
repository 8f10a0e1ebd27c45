#include "nfat/kmeans.hpp"

#include "nfat/errors.hpp"

namespace nfat::reference {

// Straight-line serial Lloyd iteration. Deliberately free of the kernel
// plumbing in kmeans.cpp; tests assert the optimized paths reproduce this
// implementation bit for bit.
KMeansResult run_kmeans(std::span<const FeatureVector> data, std::size_t k, std::uint64_t seed,
                        std::size_t max_iterations) {
    if (data.empty() || k == 0 || k > data.size())
        raise(Errc::TooFewPoints, "need at least as many points as clusters");
    if (max_iterations == 0)
        raise(Errc::InvalidConfig, "max_iterations must be >= 1");

    std::mt19937_64 rng(seed);
    std::vector<Vec4> centroids = init_centroids(data, k, rng);

    const std::size_t n = data.size();
    KMeansResult result;
    result.assignments.resize(n);

    auto nearest = [&](const Vec4& x, double& sq_out) {
        std::uint32_t best = 0;
        double best_sq = 0.0;
        for (std::uint32_t j = 0; j < centroids.size(); ++j) {
            double sq = 0.0;
            for (std::size_t d = 0; d < 4; ++d) {
                const double diff = x[d] - centroids[j][d];
                sq += diff * diff;
            }
            if (j == 0 || sq < best_sq) {
                best_sq = sq;
                best = j;
            }
        }
        sq_out = best_sq;
        return best;
    };

    while (result.iterations < max_iterations) {
        ++result.iterations;

        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double sq = 0.0;
            result.assignments[i] = nearest(data[i].dims, sq);
            sse += sq;
        }
        result.sse_history.push_back(sse);

        std::vector<Vec4> sums(k, Vec4{});
        std::vector<std::uint64_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint32_t c = result.assignments[i];
            for (std::size_t d = 0; d < 4; ++d)
                sums[c][d] += data[i].dims[d];
            ++counts[c];
        }
        std::vector<Vec4> next(k);
        for (std::size_t j = 0; j < k; ++j) {
            if (counts[j] == 0)
                next[j] = centroids[j];
            else
                for (std::size_t d = 0; d < 4; ++d)
                    next[j][d] = sums[j][d] / static_cast<double>(counts[j]);
        }

        const bool unchanged = next == centroids;
        centroids = std::move(next);
        if (unchanged) {
            result.converged = true;
            break;
        }
    }

    result.per_cluster_sse.assign(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double sq = 0.0;
        result.assignments[i] = nearest(data[i].dims, sq);
        result.per_cluster_sse[result.assignments[i]] += sq;
    }
    result.total_sse = 0.0;
    for (double s : result.per_cluster_sse)
        result.total_sse += s;
    result.centroids = std::move(centroids);
    return result;
}

KMeansResult run_restarts(std::span<const FeatureVector> data, const KMeansConfig& config) {
    if (config.n_restarts == 0)
        raise(Errc::InvalidConfig, "n_restarts must be >= 1");
    KMeansResult best;
    bool have_best = false;
    for (std::size_t r = 0; r < config.n_restarts; ++r) {
        auto run = reference::run_kmeans(data, config.k, config.seed + r, config.max_iterations);
        if (!have_best || run.total_sse < best.total_sse) {
            best = std::move(run);
            have_best = true;
        }
    }
    return best;
}

} // namespace nfat::reference
