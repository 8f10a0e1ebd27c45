#pragma once

#include "nfat/features.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace nfat {

struct KMeansConfig {
    std::size_t k = 3;
    std::size_t max_iterations = 300;
    std::size_t n_restarts = 10;
    std::uint64_t seed = 0;
};

struct KMeansResult {
    std::vector<Vec4> centroids;
    std::vector<std::uint32_t> assignments; // per point, in [0, k)
    std::vector<double> per_cluster_sse;    // 0 for empty clusters
    double total_sse = 0.0;                 // == sum of per_cluster_sse
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<double> sse_history; // total SSE after each assignment pass
};

// Kernel selection. Both paths produce bit-identical results regardless of
// thread count: the per-point scan is embarrassingly parallel and every
// floating-point reduction runs serially in index order.
enum class Execution { Serial, Parallel };

// Euclidean distance over same-length vectors; throws DimensionMismatch.
double euclidean_distance(std::span<const double> a, std::span<const double> b);

double squared_distance(const Vec4& a, const Vec4& b);

// Uniform draw from [0, n) using rejection sampling so the stream depends
// only on the seed, not on the standard library's distribution internals.
std::uint64_t bounded_uniform(std::mt19937_64& rng, std::uint64_t n);

// k distinct data points sampled uniformly without replacement.
// Throws TooFewPoints when k == 0 or k > |data|.
std::vector<Vec4> init_centroids(std::span<const FeatureVector> data, std::size_t k,
                                 std::mt19937_64& rng);

// Nearest-centroid assignment; ties go to the lowest cluster index.
std::vector<std::uint32_t> assign(std::span<const FeatureVector> data,
                                  std::span<const Vec4> centroids,
                                  Execution exec = Execution::Parallel);

// Componentwise mean of each cluster's members; a memberless cluster keeps
// its previous centroid.
std::vector<Vec4> update_centroids(std::span<const FeatureVector> data,
                                   std::span<const std::uint32_t> assignments,
                                   std::span<const Vec4> old_centroids);

// Lloyd iteration from explicitly pinned initial centroids. Stops when an
// update leaves every centroid exactly unchanged or after max_iterations.
KMeansResult run_kmeans_from(std::span<const FeatureVector> data,
                             std::vector<Vec4> initial_centroids,
                             std::size_t max_iterations = 300,
                             Execution exec = Execution::Parallel);

// Seeded single run: random init + Lloyd iteration.
KMeansResult run_kmeans(std::span<const FeatureVector> data, std::size_t k,
                        std::uint64_t seed, std::size_t max_iterations = 300,
                        Execution exec = Execution::Parallel);

// n_restarts independent runs seeded seed, seed+1, ...; returns the run with
// the smallest total SSE (ties keep the earliest restart).
KMeansResult run_restarts(std::span<const FeatureVector> data, const KMeansConfig& config,
                          Execution exec = Execution::Parallel);

namespace reference {

// Plain single-threaded implementation with the same contract, kept as the
// baseline the parallel kernels are checked against.
KMeansResult run_kmeans(std::span<const FeatureVector> data, std::size_t k,
                        std::uint64_t seed, std::size_t max_iterations = 300);

KMeansResult run_restarts(std::span<const FeatureVector> data, const KMeansConfig& config);

} // namespace reference

} // namespace nfat
