#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "phsw/codec.hpp"
#include "phsw/filter_bank.hpp"
#include "phsw/phsd2d.hpp"
#include "phsw/range_coder.hpp"
#include "phsw/transform1d.hpp"

namespace {

phsw::ImageBuffer random_image(int side, std::uint32_t seed) {
    phsw::ImageBuffer image(side, side, 8);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 255.0);
    for (double& s : image.samples) s = dist(rng);
    return image;
}

void BM_BuildFilterPair(benchmark::State& state) {
    const int order = static_cast<int>(state.range(0));
    double theta = 0.0;
    for (auto _ : state) {
        theta += 1e-6;  // defeat any memoization upstream
        benchmark::DoNotOptimize(phsw::build_filter_pair(theta, order));
    }
}
BENCHMARK(BM_BuildFilterPair)->Arg(2)->Arg(5)->Arg(9);

void BM_AnalyzeRow(benchmark::State& state) {
    const int length = static_cast<int>(state.range(0));
    std::vector<std::complex<double>> row(static_cast<std::size_t>(length));
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (auto& v : row) v = {dist(rng), dist(rng)};
    const int levels = phsw::effective_levels(length, 9, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(phsw::analyze_row(row, 3, 0.3, 9, levels));
    }
    state.SetItemsProcessed(state.iterations() * length);
}
BENCHMARK(BM_AnalyzeRow)->Arg(64)->Arg(256)->Arg(1024);

void BM_Forward2D(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const phsw::ImageBuffer image = random_image(side, 11);
    phsw::Phsd2dParams params;
    params.threads = 1;
    params.levels = phsw::effective_levels(side, params.order_n, params.levels);
    for (auto _ : state) {
        benchmark::DoNotOptimize(phsw::phsd_forward(image, params));
    }
    state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_Forward2D)->Arg(64)->Arg(128)->Arg(256);

void BM_RangeCoder(benchmark::State& state) {
    const std::size_t count = static_cast<std::size_t>(state.range(0));
    std::vector<std::uint8_t> symbols(count);
    std::mt19937 rng(23);
    std::geometric_distribution<int> dist(0.2);
    for (auto& s : symbols) s = static_cast<std::uint8_t>(dist(rng) & 0xFF);
    for (auto _ : state) {
        std::vector<std::uint8_t> out;
        phsw::RangeEncoder enc(out);
        phsw::AdaptiveByteModel model;
        for (std::uint8_t s : symbols) model.encode(enc, s);
        enc.flush();
        benchmark::DoNotOptimize(out);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count));
}
BENCHMARK(BM_RangeCoder)->Arg(1 << 12)->Arg(1 << 16);

}  // namespace

BENCHMARK_MAIN();
