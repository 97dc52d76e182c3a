// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "gtk/kernels.hpp"

namespace {

using namespace gtk;

template <auto Fn>
void BM_ScoreWindows(benchmark::State& state) {
    const auto len = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(Fn(len, SignBoundary{len / 4, len / 2}, 32, 1, IouMode::FrameCount));
    state.SetItemsProcessed(state.iterations() * len);
}

struct AnnotationInput {
    std::vector<FrameDetections> frames;
    std::vector<GestureClassMeta> metas{{"like", Arity::OneHanded, true},
                                        {"heart", Arity::TwoHanded, true},
                                        {"xsign", Arity::TwoHandedXsign, true}};
    std::vector<kernels::AnnotationJob> jobs;

    explicit AnnotationInput(std::size_t n) {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(0.0, 0.8);
        frames.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            FrameDetections f{static_cast<std::int64_t>(i), std::nullopt, {}};
            for (int k = 0; k < 4; ++k) {
                const double x = u(rng), y = u(rng);
                f.detections.push_back({"hand", u(rng), {x, y, x + 0.15, y + 0.15}});
            }
            frames.push_back(std::move(f));
        }
        for (std::size_t i = 0; i < n; ++i) jobs.push_back({&frames[i], &metas[i % metas.size()]});
    }
};

template <auto Fn>
void BM_AnnotateBatch(benchmark::State& state) {
    const AnnotationInput input(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Fn(input.jobs));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fn>
void BM_AugmentBatch(benchmark::State& state) {
    const auto base = sample_window(600, 64, 2, 10, {100, 400});
    const auto ops = parse_pipeline("random");
    const auto count = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(Fn(base, ops, {}, 7, count));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fn>
void BM_DropSelectionCounts(benchmark::State& state) {
    const auto trials = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(Fn(32, 0.5, 3, trials));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_ScoreWindows<kernels::score_windows>)->Arg(10'000)->Arg(100'000);
BENCHMARK(BM_ScoreWindows<kernels::score_windows_serial>)->Arg(10'000)->Arg(100'000);
BENCHMARK(BM_AnnotateBatch<kernels::annotate_batch>)->Arg(1'000)->Arg(20'000);
BENCHMARK(BM_AnnotateBatch<kernels::annotate_batch_serial>)->Arg(1'000)->Arg(20'000);
BENCHMARK(BM_AugmentBatch<kernels::augment_batch>)->Arg(256)->Arg(4'096);
BENCHMARK(BM_AugmentBatch<kernels::augment_batch_serial>)->Arg(256)->Arg(4'096);
BENCHMARK(BM_DropSelectionCounts<kernels::drop_selection_counts>)->Arg(10'000);
BENCHMARK(BM_DropSelectionCounts<kernels::drop_selection_counts_serial>)->Arg(10'000);

}  // namespace

BENCHMARK_MAIN();
