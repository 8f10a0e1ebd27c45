#include "nfat/kmeans.hpp"

#include "nfat/errors.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

namespace nfat {

namespace {

// Picks the nearest centroid by squared distance; strict < keeps the lowest
// index on ties.
inline void assign_point(const Vec4& x, std::span<const Vec4> centroids, std::uint32_t& out_cluster,
                         double& out_sq) {
    std::uint32_t best = 0;
    double best_sq = squared_distance(x, centroids[0]);
    for (std::uint32_t j = 1; j < centroids.size(); ++j) {
        const double sq = squared_distance(x, centroids[j]);
        if (sq < best_sq) {
            best_sq = sq;
            best = j;
        }
    }
    out_cluster = best;
    out_sq = best_sq;
}

// The hot kernel: O(n*k) distance scans, independent per point. The parallel
// path splits points across threads; no floating-point reduction happens
// here, so the output is identical for any thread count.
void assign_kernel(std::span<const FeatureVector> data, std::span<const Vec4> centroids,
                   std::uint32_t* assignments, double* sq_dist, Execution exec) {
    const auto n = static_cast<std::int64_t>(data.size());
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i)
            assign_point(data[i].dims, centroids, assignments[i], sq_dist[i]);
    } else {
        for (std::int64_t i = 0; i < n; ++i)
            assign_point(data[i].dims, centroids, assignments[i], sq_dist[i]);
    }
}

// Serial reductions in fixed index order keep results bit-identical across
// execution modes and thread counts.
void accumulate_sse(std::span<const std::uint32_t> assignments, const double* sq_dist,
                    std::vector<double>& per_cluster, double& total) {
    for (std::size_t i = 0; i < assignments.size(); ++i)
        per_cluster[assignments[i]] += sq_dist[i];
    total = 0.0;
    for (double s : per_cluster)
        total += s;
}

} // namespace

double squared_distance(const Vec4& a, const Vec4& b) {
    double acc = 0.0;
    for (std::size_t d = 0; d < 4; ++d) {
        const double diff = a[d] - b[d];
        acc += diff * diff;
    }
    return acc;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        raise(Errc::DimensionMismatch, "vectors of dimension " + std::to_string(a.size()) +
                                           " and " + std::to_string(b.size()));
    double acc = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double diff = a[d] - b[d];
        acc += diff * diff;
    }
    return std::sqrt(acc);
}

std::uint64_t bounded_uniform(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t overflow = (max % n + 1) % n; // 2^64 mod n
    if (overflow == 0)
        return rng() % n;
    const std::uint64_t limit = max - overflow;
    std::uint64_t x = rng();
    while (x > limit)
        x = rng();
    return x % n;
}

std::vector<Vec4> init_centroids(std::span<const FeatureVector> data, std::size_t k,
                                 std::mt19937_64& rng) {
    if (k == 0 || k > data.size())
        raise(Errc::TooFewPoints, "need at least " + std::to_string(k) + " points, have " +
                                      std::to_string(data.size()));
    // partial Fisher-Yates over indices: k distinct points, uniform
    std::vector<std::uint32_t> idx(data.size());
    std::iota(idx.begin(), idx.end(), 0u);
    std::vector<Vec4> centroids;
    centroids.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const std::uint64_t j = i + bounded_uniform(rng, data.size() - i);
        std::swap(idx[i], idx[j]);
        centroids.push_back(data[idx[i]].dims);
    }
    return centroids;
}

std::vector<std::uint32_t> assign(std::span<const FeatureVector> data,
                                  std::span<const Vec4> centroids, Execution exec) {
    if (centroids.empty())
        raise(Errc::TooFewPoints, "no centroids to assign to");
    std::vector<std::uint32_t> assignments(data.size());
    std::vector<double> sq(data.size());
    assign_kernel(data, centroids, assignments.data(), sq.data(), exec);
    return assignments;
}

std::vector<Vec4> update_centroids(std::span<const FeatureVector> data,
                                   std::span<const std::uint32_t> assignments,
                                   std::span<const Vec4> old_centroids) {
    if (assignments.size() != data.size())
        raise(Errc::LengthMismatch, "assignments do not cover the data");
    const std::size_t k = old_centroids.size();
    std::vector<Vec4> sums(k, Vec4{});
    std::vector<std::uint64_t> counts(k, 0);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const std::uint32_t c = assignments[i];
        if (c >= k)
            raise(Errc::LengthMismatch, "assignment " + std::to_string(c) + " out of range");
        for (std::size_t d = 0; d < 4; ++d)
            sums[c][d] += data[i].dims[d];
        ++counts[c];
    }
    std::vector<Vec4> out(k);
    for (std::size_t j = 0; j < k; ++j) {
        if (counts[j] == 0) {
            out[j] = old_centroids[j]; // memberless clusters are legal
        } else {
            for (std::size_t d = 0; d < 4; ++d)
                out[j][d] = sums[j][d] / static_cast<double>(counts[j]);
        }
    }
    return out;
}

KMeansResult run_kmeans_from(std::span<const FeatureVector> data,
                             std::vector<Vec4> initial_centroids, std::size_t max_iterations,
                             Execution exec) {
    if (initial_centroids.empty() || data.empty() || initial_centroids.size() > data.size())
        raise(Errc::TooFewPoints, "need at least as many points as clusters");
    if (max_iterations == 0)
        raise(Errc::InvalidConfig, "max_iterations must be >= 1");

    const std::size_t n = data.size();
    const std::size_t k = initial_centroids.size();

    KMeansResult result;
    result.centroids = std::move(initial_centroids);
    result.assignments.resize(n);
    std::vector<double> sq(n);

    while (result.iterations < max_iterations) {
        ++result.iterations;
        assign_kernel(data, result.centroids, result.assignments.data(), sq.data(), exec);

        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            sse += sq[i];
        result.sse_history.push_back(sse);

        auto next = update_centroids(data, result.assignments, result.centroids);
        const bool unchanged = next == result.centroids; // exact equality
        result.centroids = std::move(next);
        if (unchanged) {
            result.converged = true;
            break;
        }
    }

    // Final state is always reported against the returned centroids.
    assign_kernel(data, result.centroids, result.assignments.data(), sq.data(), exec);
    result.per_cluster_sse.assign(k, 0.0);
    accumulate_sse(result.assignments, sq.data(), result.per_cluster_sse, result.total_sse);
    return result;
}

KMeansResult run_kmeans(std::span<const FeatureVector> data, std::size_t k, std::uint64_t seed,
                        std::size_t max_iterations, Execution exec) {
    std::mt19937_64 rng(seed);
    return run_kmeans_from(data, init_centroids(data, k, rng), max_iterations, exec);
}

KMeansResult run_restarts(std::span<const FeatureVector> data, const KMeansConfig& config,
                          Execution exec) {
    if (config.n_restarts == 0)
        raise(Errc::InvalidConfig, "n_restarts must be >= 1");
    KMeansResult best;
    bool have_best = false;
    for (std::size_t r = 0; r < config.n_restarts; ++r) {
        auto run = run_kmeans(data, config.k, config.seed + r, config.max_iterations, exec);
        // strict < keeps the earliest restart on ties
        if (!have_best || run.total_sse < best.total_sse) {
            best = std::move(run);
            have_best = true;
        }
    }
    return best;
}

} // namespace nfat
