#pragma once

#include "nfat/features.hpp"
#include "nfat/kmeans.hpp"
#include "nfat/log_event.hpp"

#include <atomic>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

namespace testsup {

inline std::filesystem::path data_dir() { return NFAT_TEST_DATA_DIR; }

inline std::filesystem::path fixture(const std::string& name) { return data_dir() / name; }

// Scratch directory removed on scope exit.
struct TempDir {
    std::filesystem::path path;

    TempDir() {
        static std::atomic<unsigned> counter{0};
        path = std::filesystem::temp_directory_path() /
               ("nfat-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
};

inline nfat::LogEvent make_event(std::uint64_t id, const std::string& time,
                                 nfat::Protocol protocol, std::uint16_t port,
                                 std::uint32_t ip_len, std::uint8_t flags,
                                 std::string src = "10.0.0.1", std::string dst = "10.0.0.2") {
    nfat::LogEvent e;
    e.event_id = id;
    e.timestamp = nfat::Timestamp::parse(time);
    e.src_addr = std::move(src);
    e.dst_addr = std::move(dst);
    e.protocol = protocol;
    e.d_port = port;
    e.ip_len = ip_len;
    e.tcp_flags = flags;
    if (protocol == nfat::Protocol::UDP)
        e.tcp_flags = 0;
    return e;
}

inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + unit * (hi - lo);
}

inline std::vector<nfat::FeatureVector> random_points(std::size_t n, std::uint64_t seed,
                                                      double lo = 0.0, double hi = 100.0) {
    std::mt19937_64 rng(seed);
    std::vector<nfat::FeatureVector> points(n);
    for (std::size_t i = 0; i < n; ++i) {
        points[i].event_id = i + 1;
        for (auto& dim : points[i].dims)
            dim = uniform_real(rng, lo, hi);
    }
    return points;
}

inline bool same_bits(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

inline bool bit_identical(const nfat::KMeansResult& a, const nfat::KMeansResult& b) {
    if (a.centroids.size() != b.centroids.size() || a.assignments != b.assignments ||
        a.iterations != b.iterations || a.converged != b.converged ||
        a.per_cluster_sse.size() != b.per_cluster_sse.size() ||
        a.sse_history.size() != b.sse_history.size() || !same_bits(a.total_sse, b.total_sse))
        return false;
    for (std::size_t j = 0; j < a.centroids.size(); ++j)
        for (std::size_t d = 0; d < 4; ++d)
            if (!same_bits(a.centroids[j][d], b.centroids[j][d]))
                return false;
    for (std::size_t j = 0; j < a.per_cluster_sse.size(); ++j)
        if (!same_bits(a.per_cluster_sse[j], b.per_cluster_sse[j]))
            return false;
    for (std::size_t i = 0; i < a.sse_history.size(); ++i)
        if (!same_bits(a.sse_history[i], b.sse_history[i]))
            return false;
    return true;
}

// Exhaustive 2-partition oracle: minimum SSE over every split of the points
// into two clusters (either side may be empty), centroids at the side means.
// Independent of the engine's code paths; usable up to ~20 points.
inline double brute_force_min_sse_k2(const std::vector<nfat::FeatureVector>& points) {
    const std::size_t n = points.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double sse = 0.0;
        for (int side = 0; side < 2; ++side) {
            nfat::Vec4 sum{};
            std::size_t count = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (((mask >> i) & 1u) != static_cast<std::uint32_t>(side))
                    continue;
                for (std::size_t d = 0; d < 4; ++d)
                    sum[d] += points[i].dims[d];
                ++count;
            }
            if (count == 0)
                continue;
            nfat::Vec4 mean{};
            for (std::size_t d = 0; d < 4; ++d)
                mean[d] = sum[d] / static_cast<double>(count);
            for (std::size_t i = 0; i < n; ++i) {
                if (((mask >> i) & 1u) != static_cast<std::uint32_t>(side))
                    continue;
                for (std::size_t d = 0; d < 4; ++d) {
                    const double diff = points[i].dims[d] - mean[d];
                    sse += diff * diff;
                }
            }
        }
        best = std::min(best, sse);
    }
    return best;
}

} // namespace testsup
