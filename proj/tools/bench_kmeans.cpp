// Benchmark for the clustering kernels: reference serial implementation vs
// the engine's serial and OpenMP paths on the same synthetic workload. All
// three must produce bit-identical results; the run fails otherwise.

#include "nfat/kmeans.hpp"

#include <CLI11.hpp>

#include <bit>
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using nfat::FeatureVector;
using nfat::KMeansConfig;
using nfat::KMeansResult;

std::vector<FeatureVector> synthetic_events(std::size_t n, std::uint64_t seed) {
    // three loose blobs in feature space: (protocol, norm_port, ip_len, flags)
    std::mt19937_64 rng(seed);
    const auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<FeatureVector> data(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int blob = static_cast<int>(nfat::bounded_uniform(rng, 3));
        FeatureVector& fv = data[i];
        fv.event_id = i + 1;
        fv.dims[0] = blob == 2 ? 0.0 : 1.0;
        fv.dims[1] = (blob == 0 ? 0.5 : blob == 1 ? 60.0 : 0.08) + unit() * 2.0;
        fv.dims[2] = (blob == 0 ? 412.0 : blob == 1 ? 70.0 : 0.0) + unit() * 20.0;
        fv.dims[3] = blob == 2 ? 0.0 : (blob == 0 ? 24.0 : 18.0);
    }
    return data;
}

bool bit_identical(const KMeansResult& a, const KMeansResult& b) {
    const auto same = [](double x, double y) {
        return std::bit_cast<std::uint64_t>(x) == std::bit_cast<std::uint64_t>(y);
    };
    if (a.centroids.size() != b.centroids.size() || a.assignments != b.assignments ||
        a.iterations != b.iterations || a.converged != b.converged ||
        a.per_cluster_sse.size() != b.per_cluster_sse.size() ||
        a.sse_history.size() != b.sse_history.size() || !same(a.total_sse, b.total_sse))
        return false;
    for (std::size_t j = 0; j < a.centroids.size(); ++j)
        for (std::size_t d = 0; d < 4; ++d)
            if (!same(a.centroids[j][d], b.centroids[j][d]))
                return false;
    for (std::size_t j = 0; j < a.per_cluster_sse.size(); ++j)
        if (!same(a.per_cluster_sse[j], b.per_cluster_sse[j]))
            return false;
    for (std::size_t i = 0; i < a.sse_history.size(); ++i)
        if (!same(a.sse_history[i], b.sse_history[i]))
            return false;
    return true;
}

template <typename F> double time_best_of(F&& fn, int reps) {
    double best = 1e100;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

} // namespace

int main(int argc, char** argv) {
    std::size_t points = 200000;
    KMeansConfig config;
    config.seed = 7;
    int reps = 3;

    CLI::App app{"clustering kernel benchmark", "nfat-bench"};
    app.add_option("--points", points, "synthetic event count")->capture_default_str();
    app.add_option("--k", config.k, "clusters")->capture_default_str();
    app.add_option("--restarts", config.n_restarts, "restarts")->capture_default_str();
    app.add_option("--seed", config.seed, "seed")->capture_default_str();
    app.add_option("--max-iterations", config.max_iterations, "iteration cap")->capture_default_str();
    app.add_option("--reps", reps, "timing repetitions (best-of)")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    const auto data = synthetic_events(points, config.seed);

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif
    std::printf("points %zu, k %zu, restarts %zu, seed %llu\n\n", points, config.k,
                config.n_restarts, static_cast<unsigned long long>(config.seed));

    KMeansResult ref, serial, parallel;
    const double t_ref =
        time_best_of([&] { ref = nfat::reference::run_restarts(data, config); }, reps);
    const double t_serial = time_best_of(
        [&] { serial = nfat::run_restarts(data, config, nfat::Execution::Serial); }, reps);
    const double t_parallel = time_best_of(
        [&] { parallel = nfat::run_restarts(data, config, nfat::Execution::Parallel); }, reps);

    std::printf("%-18s %10s %12s %10s\n", "implementation", "time [s]", "total SSE", "speedup");
    std::printf("%-18s %10.4f %12.4e %10s\n", "reference serial", t_ref, ref.total_sse, "1.00x");
    std::printf("%-18s %10.4f %12.4e %9.2fx\n", "engine serial", t_serial, serial.total_sse,
                t_ref / t_serial);
    std::printf("%-18s %10.4f %12.4e %9.2fx\n", "engine parallel", t_parallel, parallel.total_sse,
                t_ref / t_parallel);

    const bool ok = bit_identical(ref, serial) && bit_identical(ref, parallel);
    std::printf("\nresults bit-identical across implementations: %s\n", ok ? "yes" : "NO");
    return ok ? 0 : 1;
}
