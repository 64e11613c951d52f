#include <benchmark/benchmark.h>

#include <random>

#include "rkcf/cf_models.hpp"
#include "rkcf/evaluation.hpp"
#include "rkcf/features.hpp"
#include "rkcf/io.hpp"
#include "rkcf/spectral.hpp"
#include "rkcf/tracker.hpp"

using namespace rkcf;

namespace {

RealGrid noise(int rows, int cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RealGrid g(rows, cols);
    for (auto& v : g) v = u(rng);
    return g;
}

void BM_ForwardTransform(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const RealGrid x = noise(n, n, 1);
    for (auto _ : state) benchmark::DoNotOptimize(forward_transform(x));
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_ForwardTransform)->Arg(32)->Arg(64)->Arg(128);

void BM_TrainKernelCf(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const FeatureMap x(noise(n, n, 2));
    const RealGrid y = gaussian_target({n, n}, 0.1 * n);
    for (auto _ : state)
        benchmark::DoNotOptimize(train_kernel_cf(x, y, 0.5, 1e-4, KernelNormalization::per_element));
}
BENCHMARK(BM_TrainKernelCf)->Arg(64)->Arg(128);

void BM_DetectTranslation(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const RealGrid y = gaussian_target({n, n}, 0.1 * n);
    const auto model = train_kernel_cf(FeatureMap(noise(n, n, 3)), y, 0.5, 1e-4, KernelNormalization::per_element);
    const FeatureMap z(noise(n, n, 4));
    for (auto _ : state) benchmark::DoNotOptimize(detect_translation(model, z));
}
BENCHMARK(BM_DetectTranslation)->Arg(64)->Arg(128);

void BM_DenseOracle(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const RealGrid x = noise(1, n, 5), y = noise(1, n, 6);
    for (auto _ : state) benchmark::DoNotOptimize(dense_circulant_ridge_oracle(x, y, 1e-2));
}
BENCHMARK(BM_DenseOracle)->Arg(64)->Arg(256);

void BM_GlobalHog(benchmark::State& state) {
    const RealGrid p = noise(64, 64, 7);
    for (auto _ : state) benchmark::DoNotOptimize(global_hog(p, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_GlobalHog)->Arg(36)->Arg(90);

void BM_RotatePatch(benchmark::State& state) {
    const RealGrid p = noise(64, 64, 8);
    for (auto _ : state) benchmark::DoNotOptimize(rotate_patch(p, 23.0));
}
BENCHMARK(BM_RotatePatch);

void BM_RotationFilter(benchmark::State& state) {
    const int b = 90;
    const auto a0 = global_hog(noise(64, 64, 9), b);
    const auto a1 = global_hog(noise(64, 64, 10), b);
    const RealGrid g = gaussian_target({1, b}, 0.0625 * b);
    for (auto _ : state) {
        const auto m = train_rotation_filter(a0, g, 1e-4);
        benchmark::DoNotOptimize(detect_rotation_filter(m, a1));
    }
}
BENCHMARK(BM_RotationFilter);

void BM_TrackFrame(benchmark::State& state) {
    const auto seq = io::generate_synthetic_sequence(io::SyntheticKind::translate_rotate, 3, {}, 0);
    TrackerConfig c;
    c.rotation_method = state.range(0) ? RotationMethod::filter : RotationMethod::none;
    const TrackerState init = init_tracker(seq.frames[0], seq.ground_truth[0], c);
    for (auto _ : state) {
        TrackerState s = init;
        benchmark::DoNotOptimize(track_frame(s, seq.frames[1], c));
    }
}
BENCHMARK(BM_TrackFrame)->Arg(0)->Arg(1)->ArgNames({"rotation"});

}  // namespace
BENCHMARK_MAIN();
